"""
環服務：建構商環、目錄查詢、Hilbert 函數、正則元素與一般正則序列
"""
import logging
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from config.ring_catalog import find_ring_spec, get_ring_specs
from config.settings import EngineConfig
from domain.models.module import FPModule
from domain.models.polynomial import Polynomial, PolynomialRing
from domain.models.quotient_ring import QuotientRing
from domain.services.groebner_service import GroebnerService
from domain.services.module_service import ModuleService
from shared.exceptions import RegularSequenceNotFoundError, ValidationError
from shared.utils.helpers import lcm_all

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.Generator, None]


def as_generator(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class RingService:
    """QuotientRing 的建構與環層級的運算"""

    def __init__(self, groebner: GroebnerService, modules: ModuleService, config: EngineConfig):
        self.groebner = groebner
        self.modules = modules
        self.config = config
        self._catalog: Dict[str, QuotientRing] = {}

    # ---- 建構 ----------------------------------------------------------

    def polynomial_ring(self, p: int, names: Sequence[str], weights: Optional[Sequence[int]] = None) -> PolynomialRing:
        return PolynomialRing(p, names, weights)

    def quotient_ring(
        self,
        ambient: PolynomialRing,
        gens: Sequence[Union[Polynomial, str]],
        name: Optional[str] = None,
    ) -> QuotientRing:
        polys = [ambient.parse(g) if isinstance(g, str) else g for g in gens]
        return self.groebner.make_quotient_ring(ambient, polys, name)

    def from_spec(self, spec: Dict[str, Any]) -> QuotientRing:
        """由 {name, p, variables, ideal} 字典建構環"""
        try:
            names = [v[0] for v in spec["variables"]]
            weights = [int(v[1]) for v in spec["variables"]]
            ambient = self.polynomial_ring(int(spec["p"]), names, weights)
        except (KeyError, IndexError, TypeError) as e:
            raise ValidationError(f"環描述格式錯誤: {e}", "bad_ring_spec")
        return self.quotient_ring(ambient, spec.get("ideal", []), spec.get("name"))

    def catalog(self, name: str) -> QuotientRing:
        """依名稱或別名取得目錄中的環（同一進程內共用同一物件）"""
        spec = find_ring_spec(name)
        if spec is None:
            raise ValidationError(f"目錄中沒有名為 {name} 的環", "unknown_ring")
        ring = self._catalog.get(spec["name"])
        if ring is None:
            ring = self.from_spec(spec)
            self._catalog[spec["name"]] = ring
            logger.info("[Ring] 載入目錄環 %s = %s", spec["name"], ring.describe())
        return ring

    def catalog_names(self) -> List[str]:
        return [spec["name"] for spec in get_ring_specs()]

    # ---- 基本運算 ------------------------------------------------------

    def groebner_basis(self, gens: Sequence[Polynomial]) -> List[Polynomial]:
        return self.groebner.groebner_basis(gens)

    def normal_form(self, f: Polynomial, ring: QuotientRing) -> Polynomial:
        return self.groebner.normal_form(f, ring)

    def hilbert_function(self, ring: QuotientRing, degree: int) -> int:
        return self.modules.hilbert_function(self.modules.ring_module(ring), degree)

    def hilbert_series_prefix(self, ring: QuotientRing, upto: int) -> List[int]:
        return [self.hilbert_function(ring, d) for d in range(0, upto + 1)]

    def krull_dim(self, ring: QuotientRing) -> int:
        return ring.dim

    def random_form(self, ring: QuotientRing, degree: int, rng: Seed) -> Polynomial:
        return self.groebner.random_form(ring, degree, as_generator(rng))

    # ---- 正則元素 ------------------------------------------------------

    def is_regular_element(self, f: Polynomial, M: FPModule) -> bool:
        return self.modules.is_regular_on(M, f)

    def general_regular_sequence(
        self, mods: Sequence[FPModule], length: int, seed: Seed = None
    ) -> List[Polynomial]:
        """隨機尋找對所有模組都正則的序列；次數取權重的最小公倍數"""
        if not mods:
            raise ValidationError("至少需要一個模組", "empty_module_list")
        ring = mods[0].ring
        rng = as_generator(seed)
        degree = lcm_all(ring.weights)
        current = list(mods)
        sequence: List[Polynomial] = []
        for step in range(length):
            found = None
            for attempt in range(self.config.regular_retry_budget):
                f = self.groebner.random_form(ring, degree, rng)
                if f.is_zero():
                    continue
                if all(self.modules.is_regular_on(M, f) for M in current):
                    found = f
                    break
            if found is None:
                logger.info("[Ring] 第 %d 個正則元素在 %d 次嘗試後仍未找到", step + 1, self.config.regular_retry_budget)
                raise RegularSequenceNotFoundError(
                    f"找到 {len(sequence)} 個正則元素後，重試預算耗盡", found=len(sequence)
                )
            sequence.append(found)
            current = [self.modules.mod_out(M, [found]) for M in current]
        return sequence

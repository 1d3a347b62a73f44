"""
同構判定服務
先以不變量排除，再在 Hom_0(M, N) 中尋找常數部分可逆的映射
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config.settings import EngineConfig
from domain.models.module import FPModule, ModuleHomomorphism
from domain.models.verdict import IsoResult, IsoStatus
from domain.services.homology_service import HomologyService
from domain.services.module_service import ModuleService
from infrastructure.linalg import batch_invertible_mod, is_invertible_mod, rank_mod

logger = logging.getLogger(__name__)


class IsomorphismService:
    """三值同構判定：TRUE 附見證、FALSE 附理由、INCONCLUSIVE 表示取樣預算耗盡"""

    def __init__(self, modules: ModuleService, homology: HomologyService, config: EngineConfig):
        self.modules = modules
        self.homology = homology
        self.config = config

    # ---- 不變量排除 ----------------------------------------------------

    def invariant_mismatch(self, M: FPModule, N: FPModule) -> Optional[str]:
        """第一個不一致的不變量名稱；全部一致時回傳 None"""
        Mm = self.modules.minimal_presentation(M)
        Nm = self.modules.minimal_presentation(N)
        if Mm.ring != Nm.ring:
            return "ring"
        if Mm.num_generators != Nm.num_generators:
            return "mu"
        if sorted(Mm.generator_twists) != sorted(Nm.generator_twists):
            return "generator_degrees"
        if sorted(Mm.relation_twists) != sorted(Nm.relation_twists):
            return "relation_degrees"
        if self.modules.krull_dim(Mm) != self.modules.krull_dim(Nm):
            return "krull_dim"
        if Mm.num_generators == 0:
            return None
        start = min(Mm.generator_twists)
        upto = start + self.config.hilbert_compare_degree
        if self.modules.hilbert_prefix(Mm, upto, start) != self.modules.hilbert_prefix(Nm, upto, start):
            return "hilbert_function"
        if self.modules.is_finite_length(Mm) and self.modules.length(Mm) != self.modules.length(Nm):
            return "length"
        if not self.homology.ideal_equals(self.homology.annihilator(Mm), self.homology.annihilator(Nm)):
            return "annihilator"
        for j in range(Mm.num_generators):
            if not self.homology.ideal_equals(self.homology.fitting_ideal(Mm, j), self.homology.fitting_ideal(Nm, j)):
                return f"fitting_{j}"
        return None

    # ---- 搜尋 ----------------------------------------------------------

    @staticmethod
    def _constant_part(f: ModuleHomomorphism, p: int) -> np.ndarray:
        rows = len(f.matrix)
        cols = len(f.matrix[0]) if rows else 0
        C = np.zeros((rows, cols), dtype=np.int64)
        for k, row in enumerate(f.matrix):
            for j, entry in enumerate(row):
                C[k, j] = entry.constant_term() % p
        return C

    @staticmethod
    def _independent(constants: Sequence[np.ndarray], p: int) -> List[int]:
        """常數矩陣中線性獨立的一組下標（貪婪選取）"""
        chosen: List[int] = []
        rows: List[np.ndarray] = []
        for i, C in enumerate(constants):
            candidate = rows + [C.reshape(-1)]
            if rank_mod(np.array(candidate, dtype=np.int64), p) == len(candidate):
                rows = candidate
                chosen.append(i)
        return chosen

    @staticmethod
    def _combine(maps: Sequence[ModuleHomomorphism], coefficients: Sequence[int]) -> ModuleHomomorphism:
        first = maps[0]
        ring = first.ring
        rows = []
        for k in range(len(first.matrix)):
            row = []
            for j in range(len(first.matrix[k])):
                entry = ring.zero()
                for f, c in zip(maps, coefficients):
                    if c:
                        entry = entry + f.matrix[k][j].scale(c)
                row.append(entry)
            rows.append(tuple(row))
        return ModuleHomomorphism(first.source, first.target, tuple(rows), first.degree)

    def _confirm(self, f: ModuleHomomorphism, checked: int, exhaustive: bool) -> IsoResult:
        """f 為滿射；有限長度或核為零時即為同構，否則 M ≇ N"""
        witness = [[str(entry) for entry in row] for row in f.matrix]
        if self.modules.is_finite_length(f.source) or self.modules.is_zero(self.modules.kernel_of_map(f)):
            return IsoResult(IsoStatus.TRUE, "surjection_with_trivial_kernel", witness, 0, checked, exhaustive)
        return IsoResult(IsoStatus.FALSE, "surjection_with_kernel", None, 0, checked, exhaustive)

    def exhaustive_search_applies(self, p: int, dim: int) -> bool:
        """小特徵時 Hom_0 維數不超過上限即窮舉；其他情況看候選總數"""
        if p <= self.config.iso_exhaustive_max_prime and dim <= self.config.iso_exhaustive_dim:
            return True
        return p ** dim <= self.config.iso_exhaustive_limit

    def _exhaustive(self, maps: Sequence[ModuleHomomorphism], stacked: np.ndarray, p: int) -> IsoResult:
        """依字典序枚舉全部非零係數向量，分批檢查常數部分是否可逆"""
        dim = len(maps)
        total = p ** dim
        place = p ** np.arange(dim - 1, -1, -1, dtype=np.int64)
        batch = self.config.iso_batch_size
        for start in range(1, total, batch):
            index = np.arange(start, min(start + batch, total), dtype=np.int64)
            digits = (index[:, None] // place[None, :]) % p
            candidates = np.tensordot(digits, stacked, axes=1) % p
            hits = np.flatnonzero(batch_invertible_mod(candidates, p))
            if hits.size:
                first = int(hits[0])
                coefficients = tuple(int(c) for c in digits[first])
                return self._confirm(self._combine(maps, coefficients), int(index[first]), True)
        logger.debug("[Iso] 窮舉 %d 維 Hom_0 (p=%d) 無可逆常數部分", dim, p)
        return IsoResult(IsoStatus.FALSE, "no_degree_zero_surjection", None, 0, total - 1, True)

    def is_isomorphic(self, M: FPModule, N: FPModule, seed: Optional[int] = None) -> IsoResult:
        Mm = self.modules.minimal_presentation(M)
        Nm = self.modules.minimal_presentation(N)
        reason = self.invariant_mismatch(Mm, Nm)
        if reason is not None:
            logger.debug("[Iso] 不變量 %s 不一致", reason)
            return IsoResult(IsoStatus.FALSE, f"invariant:{reason}")
        if Mm.num_generators == 0:
            return IsoResult(IsoStatus.TRUE, "both_zero", [])

        p = Mm.ring.p
        maps = self.homology.hom_degree_basis(Mm, Nm, 0)
        constants = [self._constant_part(f, p) for f in maps]
        chosen = self._independent(constants, p)
        if not chosen:
            return IsoResult(IsoStatus.FALSE, "no_degree_zero_surjection")
        maps = [maps[i] for i in chosen]
        constants = [constants[i] for i in chosen]
        stacked = np.stack(constants)

        def invertible(coefficients: Tuple[int, ...]) -> bool:
            C = np.tensordot(np.array(coefficients, dtype=np.int64), stacked, axes=1) % p
            return is_invertible_mod(C, p)

        if self.exhaustive_search_applies(p, len(chosen)):
            return self._exhaustive(maps, stacked, p)

        rng = np.random.default_rng(seed)
        for attempt in range(self.config.iso_sample_budget):
            coefficients = tuple(int(c) for c in rng.integers(0, p, size=len(chosen)))
            if invertible(coefficients):
                return self._confirm(self._combine(maps, coefficients), attempt + 1, False)
        logger.info("[Iso] %d 維搜尋空間中取樣 %d 次未找到可逆映射", len(chosen), self.config.iso_sample_budget)
        return IsoResult(IsoStatus.INCONCLUSIVE, "sample_budget_exhausted", None, 0, self.config.iso_sample_budget, False)

    def is_isomorphic_up_to_shift(self, M: FPModule, N: FPModule, seed: Optional[int] = None) -> IsoResult:
        """M(s) ≅ N 對某個 |s| ≤ twist_window"""
        Mm = self.modules.minimal_presentation(M)
        Nm = self.modules.minimal_presentation(N)
        if Mm.num_generators == 0 or Nm.num_generators == 0:
            status = IsoStatus.TRUE if Mm.num_generators == Nm.num_generators else IsoStatus.FALSE
            return IsoResult(status, "zero_module", [] if status == IsoStatus.TRUE else None)
        shift = min(Nm.generator_twists) - min(Mm.generator_twists)
        if abs(shift) > self.config.twist_window:
            return IsoResult(IsoStatus.FALSE, "shift_outside_window", None, shift)
        result = self.is_isomorphic(self.modules.twist(Mm, shift), Nm, seed)
        result.shift = shift
        return result

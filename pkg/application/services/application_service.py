"""
工作台服務協調器（WorkbenchService）

定位與職責
- 作為應用層的 Facade，把環、模組、同調、同構與判定器服務組合成「以名稱呼叫」的穩定介面，
  供腳本執行器（CommandHandler）與測試使用。
- 集中處理：
  1) 模組宣告的建構子（coker、syzygy、dual、hom、ext、cut ...）
  2) compute 指令的運算表與參數型別檢查
  3) 把 FPModule、Ideal、IsoResult 等結果轉成可 JSON 序列化的值

使用方式（透過 DI 取得）
- container.get(WorkbenchService)
- workbench.construct("hom", [M, N], "H")
- workbench.compute("ext_dim", [1, M, N], seed=42)

注意
- 參數在進來之前已由呼叫端解析成 FPModule / QuotientRing / int / Polynomial；
  這一層只檢查型別與數量，不處理腳本語法。
"""
import inspect
import logging
import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from config.settings import EngineConfig
from domain.models.ideal import Ideal
from domain.models.module import FPModule
from domain.models.polynomial import Polynomial
from domain.models.quotient_ring import QuotientRing
from domain.services.homology_service import HomologyService, Witness
from domain.services.isomorphism_service import IsomorphismService
from domain.services.module_service import ModuleService
from domain.services.oracle_service import OracleService
from domain.services.ring_service import RingService
from shared.exceptions import ValidationError
from shared.utils.helpers import derive_seed

logger = logging.getLogger(__name__)

# 參數型別：ring、module、int、poly；"?" 可省略，"+" 一個以上
Signature = Tuple[str, ...]


def _depth(value) -> Any:
    return "inf" if value == math.inf else int(value)


def _witness(witness: Optional[Witness]) -> Optional[Dict[str, Any]]:
    if witness is None:
        return None
    return {"kind": witness.kind, "verified": witness.verified, "detail": witness.detail, **witness.data}


class WorkbenchService:
    """以名稱呼叫的建構子與計算"""

    # 模組宣告：module NAME = <constructor> args
    CONSTRUCTORS: Dict[str, Signature] = {
        "free": ("ring", "int"),
        "residue": ("ring",),
        "maximal": ("ring",),
        "quotient": ("ring", "poly+"),
        "canonical": ("ring",),
        "syzygy": ("module", "int?"),
        "dual": ("module",),
        "transpose": ("module",),
        "matlis": ("module",),
        "minimal": ("module",),
        "socle": ("module",),
        "twist": ("module", "int"),
        "sum": ("module+",),
        "hom": ("module", "module"),
        "ext": ("int", "module", "module"),
        "tensor": ("module", "module"),
        "cut": ("module", "poly"),
    }

    # compute 指令
    OPERATIONS: Dict[str, Signature] = {
        "hom": ("module", "module"),
        "ext": ("int", "module", "module"),
        "ext_dim": ("int", "module", "module"),
        "oracle_ext": ("int", "module", "module"),
        "tensor": ("module", "module"),
        "dual": ("module",),
        "transpose": ("module",),
        "syzygy": ("module", "int?"),
        "minimal": ("module",),
        "matlis": ("module",),
        "canonical": ("ring",),
        "betti": ("module", "int?"),
        "fitting": ("module", "int"),
        "annihilator": ("module",),
        "trace": ("module",),
        "socle": ("module",),
        "socle_dim": ("module",),
        "depth": ("module",),
        "ring_depth": ("ring",),
        "mu": ("module",),
        "length": ("module",),
        "krull_dim": ("module",),
        "hilbert": ("module", "int"),
        "hilbert_series": ("ring", "int"),
        "is_zero": ("module",),
        "is_free": ("module",),
        "is_finite_length": ("module",),
        "is_faithful": ("module",),
        "is_mcm": ("module",),
        "is_cm": ("ring",),
        "has_free_summand": ("module",),
        "type": ("module",),
        "ring_type": ("ring",),
        "gorenstein": ("ring",),
        "reflexive": ("module",),
        "semidualizing": ("module", "int?"),
        "nu": ("int", "module"),
        "invariants": ("module",),
        "iso": ("module", "module"),
        "iso_shift": ("module", "module"),
        "is_regular": ("module", "poly"),
        "regular_sequence": ("module", "int"),
        "multiplicity": ("module", "poly+"),
        "generic_rank": ("module",),
        "omega_deep": ("module",),
        "df": ("module",),
    }

    def __init__(
        self,
        rings: RingService,
        modules: ModuleService,
        homology: HomologyService,
        iso: IsomorphismService,
        oracle: OracleService,
        config: EngineConfig,
    ):
        self.rings = rings
        self.modules = modules
        self.homology = homology
        self.iso = iso
        self.oracle = oracle
        self.config = config

    # ---- 參數檢查 ------------------------------------------------------

    @staticmethod
    def check_arguments(name: str, signature: Signature, args: Sequence[Any]) -> List[Any]:
        """依簽名檢查型別；省略的 "?" 參數補 None，"+" 參數收成清單"""
        kinds = {"ring": QuotientRing, "module": FPModule, "int": int, "poly": Polynomial}
        bound: List[Any] = []
        position = 0
        for kind in signature:
            base = kind.rstrip("?+")
            expected = kinds[base]
            if kind.endswith("+"):
                rest = list(args[position:])
                if not rest or not all(isinstance(a, expected) for a in rest):
                    raise ValidationError(f"{name} 需要一個以上的 {base} 參數", "bad_arguments")
                bound.append(rest)
                position = len(args)
                continue
            if position >= len(args):
                if kind.endswith("?"):
                    bound.append(None)
                    continue
                raise ValidationError(f"{name} 缺少 {base} 參數", "bad_arguments")
            value = args[position]
            if not isinstance(value, expected) or (base == "int" and isinstance(value, bool)):
                raise ValidationError(f"{name} 的第 {position + 1} 個參數應為 {base}", "bad_arguments")
            bound.append(value)
            position += 1
        if position < len(args):
            raise ValidationError(f"{name} 的參數過多", "bad_arguments")
        return bound

    # ---- 模組宣告 ------------------------------------------------------

    def coker(
        self,
        ring: QuotientRing,
        rows: Sequence[Sequence[Polynomial]],
        twists: Optional[Sequence[int]] = None,
        name: Optional[str] = None,
    ) -> FPModule:
        return self.modules.from_matrix(ring, rows, twists, name)

    def construct(self, constructor: str, args: Sequence[Any], name: Optional[str] = None) -> FPModule:
        signature = self.CONSTRUCTORS.get(constructor)
        if signature is None:
            raise ValidationError(f"未知的模組建構子 {constructor}", "unknown_constructor")
        bound = self.check_arguments(constructor, signature, args)
        builder: Callable[..., FPModule] = getattr(self, f"_build_{constructor}")
        module = builder(*bound)
        if name:
            module.name = name
        logger.debug("[Presentation] %s = %s: %d 個生成元", name, constructor, module.num_generators)
        return module

    def _build_free(self, ring: QuotientRing, rank: int) -> FPModule:
        if rank < 0:
            raise ValidationError("自由模組的秩不可為負", "bad_rank")
        return self.modules.free_module(ring, (0,) * rank)

    def _build_residue(self, ring: QuotientRing) -> FPModule:
        return self.homology.residue_field(ring)

    def _build_maximal(self, ring: QuotientRing) -> FPModule:
        return self.modules.maximal_ideal(ring)

    def _build_quotient(self, ring: QuotientRing, gens: List[Polynomial]) -> FPModule:
        return self.modules.quotient_by_ideal(ring, gens)

    def _build_canonical(self, ring: QuotientRing) -> FPModule:
        return self.homology.canonical_module(ring)

    def _build_syzygy(self, M: FPModule, i: Optional[int]) -> FPModule:
        return self.modules.syzygy_module(M, 1 if i is None else i)

    def _build_dual(self, M: FPModule) -> FPModule:
        return self.homology.dual(M)

    def _build_transpose(self, M: FPModule) -> FPModule:
        return self.homology.transpose(M)

    def _build_matlis(self, M: FPModule) -> FPModule:
        return self.homology.matlis_dual(M)

    def _build_minimal(self, M: FPModule) -> FPModule:
        return self.modules.minimal_presentation(M)

    def _build_socle(self, M: FPModule) -> FPModule:
        return self.homology.socle(M)

    def _build_twist(self, M: FPModule, shift: int) -> FPModule:
        return self.modules.twist(M, shift)

    def _build_sum(self, modules: List[FPModule]) -> FPModule:
        self._same_ring(modules)
        return self.modules.direct_sum(modules)

    def _build_hom(self, M: FPModule, N: FPModule) -> FPModule:
        self._same_ring([M, N])
        return self.homology.hom_module(M, N)

    def _build_ext(self, i: int, M: FPModule, N: FPModule) -> FPModule:
        self._same_ring([M, N])
        return self.homology.ext_module(M, N, i)

    def _build_tensor(self, M: FPModule, N: FPModule) -> FPModule:
        self._same_ring([M, N])
        return self.homology.tensor_module(M, N)

    def _build_cut(self, M: FPModule, f: Polynomial) -> FPModule:
        return self.modules.cut_down(M, f)

    @staticmethod
    def _same_ring(modules: Sequence[FPModule]) -> None:
        rings = {M.ring for M in modules}
        if len(rings) > 1:
            raise ValidationError("模組必須在同一個環上", "ring_mismatch")

    # ---- compute 指令 ----------------------------------------------------

    def compute(self, operation: str, args: Sequence[Any], seed: int = 0) -> Any:
        """執行 compute 指令並回傳可 JSON 序列化的值"""
        signature = self.OPERATIONS.get(operation)
        if signature is None:
            raise ValidationError(f"未知的運算 {operation}", "unknown_operation")
        bound = self.check_arguments(operation, signature, args)
        modules = [a for a in bound if isinstance(a, FPModule)]
        if modules:
            self._same_ring(modules)
        handler = getattr(self, f"_op_{operation}")
        if "seed" in inspect.signature(handler).parameters:
            return handler(*bound, seed=derive_seed(seed, operation))
        return handler(*bound)

    def summarize(self, M: FPModule) -> Dict[str, Any]:
        """模組結果的摘要：極小表現、Hilbert 前綴與（有限時）長度"""
        Mm = self.modules.minimal_presentation(M)
        finite = self.modules.is_finite_length(Mm)
        start = min(Mm.generator_twists) if Mm.num_generators else 0
        summary: Dict[str, Any] = {
            "name": M.name,
            "mu": Mm.num_generators,
            "generator_twists": list(Mm.generator_twists),
            "presentation": Mm.presentation.to_strings(),
            "krull_dim": self.modules.krull_dim(Mm),
            "hilbert": self.modules.hilbert_prefix(Mm, start + self.config.twist_window, start),
        }
        summary["length"] = self.modules.length(Mm) if finite else None
        return summary

    @staticmethod
    def _ideal(I: Ideal) -> List[str]:
        return I.to_list()

    def _op_hom(self, M: FPModule, N: FPModule) -> Dict[str, Any]:
        return self.summarize(self.homology.hom_module(M, N))

    def _op_ext(self, i: int, M: FPModule, N: FPModule) -> Dict[str, Any]:
        return self.summarize(self.homology.ext_module(M, N, i))

    def _op_ext_dim(self, i: int, M: FPModule, N: FPModule) -> Any:
        E = self.homology.ext_module(M, N, i)
        return self.modules.length(E) if self.modules.is_finite_length(E) else "inf"

    def _op_oracle_ext(self, upto: int, M: FPModule, N: FPModule) -> List[int]:
        """判定器計算的 dim Ext^i(M, N)，i = 0..upto（只限 Artinian 環）"""
        return self.oracle.lin_ext_dims(self.oracle.realize(M), self.oracle.realize(N), upto)

    def _op_tensor(self, M: FPModule, N: FPModule) -> Dict[str, Any]:
        return self.summarize(self.homology.tensor_module(M, N))

    def _op_dual(self, M: FPModule) -> Dict[str, Any]:
        return self.summarize(self.homology.dual(M))

    def _op_transpose(self, M: FPModule) -> Dict[str, Any]:
        return self.summarize(self.homology.transpose(M))

    def _op_syzygy(self, M: FPModule, i: Optional[int]) -> Dict[str, Any]:
        return self.summarize(self.modules.syzygy_module(M, 1 if i is None else i))

    def _op_minimal(self, M: FPModule) -> Dict[str, Any]:
        return self.summarize(M)

    def _op_matlis(self, M: FPModule) -> Dict[str, Any]:
        return self.summarize(self.homology.matlis_dual(M))

    def _op_canonical(self, ring: QuotientRing) -> Dict[str, Any]:
        return self.summarize(self.homology.canonical_module(ring))

    def _op_betti(self, M: FPModule, length: Optional[int]) -> List[int]:
        if length is None:
            length = self.modules.default_resolution_length(M.ring)
        return self.modules.betti_numbers(M, length)

    def _op_fitting(self, M: FPModule, j: int) -> List[str]:
        return self._ideal(self.homology.fitting_ideal(M, j))

    def _op_annihilator(self, M: FPModule) -> List[str]:
        return self._ideal(self.homology.annihilator(M))

    def _op_trace(self, M: FPModule) -> List[str]:
        return self._ideal(self.homology.trace_ideal(M))

    def _op_socle(self, M: FPModule) -> Dict[str, Any]:
        return self.summarize(self.homology.socle(M))

    def _op_socle_dim(self, M: FPModule) -> int:
        return self.homology.socle_dim(M)

    def _op_depth(self, M: FPModule) -> Any:
        return _depth(self.homology.depth(M))

    def _op_ring_depth(self, ring: QuotientRing) -> int:
        return self.homology.ring_depth(ring)

    def _op_mu(self, M: FPModule) -> int:
        return self.modules.mu(M)

    def _op_length(self, M: FPModule) -> int:
        return self.modules.length(M)

    def _op_krull_dim(self, M: FPModule) -> int:
        return self.modules.krull_dim(M)

    def _op_hilbert(self, M: FPModule, upto: int) -> List[int]:
        return self.modules.hilbert_prefix(M, upto)

    def _op_hilbert_series(self, ring: QuotientRing, upto: int) -> List[int]:
        return self.rings.hilbert_series_prefix(ring, upto)

    def _op_is_zero(self, M: FPModule) -> bool:
        return self.modules.is_zero(M)

    def _op_is_free(self, M: FPModule) -> bool:
        return self.modules.is_free(M)

    def _op_is_finite_length(self, M: FPModule) -> bool:
        return self.modules.is_finite_length(M)

    def _op_is_faithful(self, M: FPModule) -> bool:
        return self.homology.is_faithful(M)

    def _op_is_mcm(self, M: FPModule) -> bool:
        return self.homology.is_maximal_cm(M)

    def _op_is_cm(self, ring: QuotientRing) -> bool:
        return self.homology.is_cohen_macaulay_ring(ring)

    def _op_has_free_summand(self, M: FPModule) -> Dict[str, Any]:
        value, witness = self.homology.has_free_summand(M)
        return {"value": value, "witness": witness}

    def _op_type(self, M: FPModule) -> int:
        return self.homology.module_type(M)

    def _op_ring_type(self, ring: QuotientRing) -> int:
        return self.homology.ring_type(ring)

    def _op_gorenstein(self, ring: QuotientRing) -> bool:
        return self.homology.gorenstein_test(ring)

    def _op_reflexive(self, M: FPModule) -> bool:
        return self.homology.is_reflexive(M)

    def _op_semidualizing(self, M: FPModule, bound: Optional[int]) -> bool:
        return self.homology.is_semidualizing(M, 2 if bound is None else bound)

    def _op_nu(self, i: int, M: FPModule) -> int:
        return self.homology.nu(i, M)

    def _op_invariants(self, M: FPModule) -> Dict[str, Any]:
        return self.homology.invariants(M, self.config.twist_window).to_dict()

    def _op_iso(self, M: FPModule, N: FPModule, seed: int = 0) -> Dict[str, Any]:
        return self.iso.is_isomorphic(M, N, seed).to_dict()

    def _op_iso_shift(self, M: FPModule, N: FPModule, seed: int = 0) -> Dict[str, Any]:
        return self.iso.is_isomorphic_up_to_shift(M, N, seed).to_dict()

    def _op_is_regular(self, M: FPModule, f: Polynomial) -> bool:
        return self.rings.is_regular_element(f, M)

    def _op_regular_sequence(self, M: FPModule, length: int, seed: int = 0) -> List[str]:
        return [str(f) for f in self.rings.general_regular_sequence([M], length, seed)]

    def _op_multiplicity(self, M: FPModule, seq: List[Polynomial]) -> int:
        return self.homology.multiplicity(M, seq)

    def _op_generic_rank(self, M: FPModule, seed: int = 0) -> Optional[Dict[str, Any]]:
        return self.homology.generic_rank_estimate(M, seed)

    def _op_omega_deep(self, M: FPModule) -> Optional[Dict[str, Any]]:
        return _witness(self.homology.omega_deep_witness(M))

    def _op_df(self, M: FPModule) -> Optional[Dict[str, Any]]:
        return _witness(self.homology.df_witness(M))

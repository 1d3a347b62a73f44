"""
Freeness criteria as executable predicates.

Each check_* method evaluates its hypothesis slots with engine operations (never
assumed), then the conclusion, and returns a Verdict. A false or undecidable
hypothesis makes the verdict inconclusive with reason "hypothesis:<slot>".
"""
import inspect
import logging
import math
from typing import Any, Dict, List, Optional, Tuple

from config.settings import EngineConfig
from domain.models.module import FPModule
from domain.models.quotient_ring import QuotientRing
from domain.models.statement import Statement
from domain.models.verdict import Conclusion, Hypotheses, IsoResult, IsoStatus, Verdict
from domain.services.homology_service import HomologyService, Witness
from domain.services.isomorphism_service import IsomorphismService
from domain.services.module_service import ModuleService
from domain.services.ring_service import RingService
from shared.exceptions import NonCohenMacaulayError, RegularSequenceNotFoundError, ValidationError
from shared.utils.helpers import Stopwatch, derive_seed

from .samplers import Instance

logger = logging.getLogger(__name__)

_MODULE_ARGUMENTS = ("M", "N", "I")


def _depth(value) -> Any:
    return "inf" if value == math.inf else int(value)


def _iso_flag(result: IsoResult) -> Optional[bool]:
    if result.status == IsoStatus.TRUE:
        return True
    if result.status == IsoStatus.FALSE:
        return False
    return None


def _witness_flag(witness: Optional[Witness]) -> Tuple[Optional[bool], Optional[Dict[str, Any]]]:
    if witness is None:
        return None, None
    return witness.verified, {"kind": witness.kind, "detail": witness.detail, **witness.data}


class TheoremService:
    """定理謂詞與判決"""

    def __init__(
        self,
        rings: RingService,
        modules: ModuleService,
        homology: HomologyService,
        iso: IsomorphismService,
        config: EngineConfig,
    ):
        self.rings = rings
        self.modules = modules
        self.homology = homology
        self.iso = iso
        self.config = config

    # ---- 判決組裝 ------------------------------------------------------

    @staticmethod
    def _verdict(
        statement_id: str,
        hypotheses: Hypotheses,
        conclusion: Optional[bool],
        payload: Optional[Dict[str, Any]] = None,
        reason: str = "",
    ) -> Verdict:
        payload = payload or {}
        failure = hypotheses.first_failure()
        if failure is not None:
            return Verdict(statement_id, hypotheses, Conclusion.INCONCLUSIVE, payload, reason=f"hypothesis:{failure.name}")
        if conclusion is None:
            return Verdict(statement_id, hypotheses, Conclusion.INCONCLUSIVE, payload, reason=reason or "undecided")
        return Verdict(statement_id, hypotheses, Conclusion.HOLDS if conclusion else Conclusion.FAILS, payload, reason=reason)

    def evaluate(self, statement: Statement, instance: Instance) -> Verdict:
        """依 statement.predicate 派發到 check_* 方法"""
        handler = getattr(self, f"check_{statement.predicate}", None)
        if handler is None:
            raise ValidationError(f"未知的謂詞 {statement.predicate}", "unknown_predicate")
        parameters = inspect.signature(handler).parameters
        arguments: Dict[str, Any] = {}
        for name in parameters:
            if name in _MODULE_ARGUMENTS:
                if name not in instance.modules:
                    raise ValidationError(f"{statement.id} 需要模組 {name}", "missing_module")
                arguments[name] = instance.modules[name]
            elif name == "ring":
                arguments[name] = instance.ring
            elif name == "seed":
                arguments[name] = instance.seed
            elif name in instance.params:
                arguments[name] = instance.params[name]

        watch = Stopwatch()
        try:
            verdict = handler(**arguments)
        except RegularSequenceNotFoundError as e:
            verdict = Verdict(statement.id, Hypotheses(), Conclusion.INCONCLUSIVE, {"found": e.found}, reason="regular_sequence_not_found")
        except NonCohenMacaulayError:
            hypotheses = Hypotheses()
            hypotheses.add("cohen_macaulay_ring", False)
            verdict = self._verdict(statement.id, hypotheses, None)
        verdict.statement_id = statement.id
        verdict.seed = instance.seed
        verdict.instance = instance.label
        verdict.timings["evaluate_ms"] = watch.elapsed_ms()
        logger.debug("[Theorem] %s %s → %s %s", statement.id, instance.label, verdict.conclusion.value, verdict.reason)
        return verdict

    # ---- 共用假設 ------------------------------------------------------

    def _ext_range(self, M: FPModule, N: FPModule, low: int, high: int) -> bool:
        return self.homology.ext_vanishes(M, N, range(low, high + 1))

    def _power_target(self, M: FPModule, N: FPModule) -> FPModule:
        """⊕_j N(t_j)，即 Hom(F_0, N) 其中 F_0 為 M 的極小覆蓋"""
        Mm = self.modules.minimal_presentation(M)
        copies = [self.modules.twist(N, -t) for t in Mm.generator_twists]
        return self.modules.direct_sum(copies, f"{N.name or 'N'}^{len(copies)}")

    def _hom_iso_to_power(self, M: FPModule, N: FPModule, r: int, seed: int) -> Tuple[Optional[bool], Dict[str, Any]]:
        """Hom(M, N) ≅ N^r：μ(M) = r 時以分次同構檢驗，否則只用非分次不變量排除"""
        H = self.homology.hom_module(M, N)
        mu_m = self.modules.mu(M)
        if mu_m == r:
            result = self.iso.is_isomorphic(H, self._power_target(M, N), seed)
            return _iso_flag(result), {"method": "graded", **result.to_dict()}
        if self.modules.mu(H) != r * self.modules.mu(N):
            return False, {"method": "invariant", "reason": "mu"}
        if self.modules.is_finite_length(N):
            if self.modules.length(H) != r * self.modules.length(N):
                return False, {"method": "invariant", "reason": "length"}
            if self.homology.socle_dim(H) != r * self.homology.socle_dim(N):
                return False, {"method": "invariant", "reason": "socle_dim"}
        return None, {"method": "invariant", "reason": "undecided"}

    def _ass_equals_min(self, N: FPModule) -> Optional[bool]:
        """Ass N = Min N，只在可判定的片段：有限長度，或 CM 環上的非零自由模組"""
        if self.modules.is_zero(N):
            return None
        if self.modules.is_finite_length(N):
            return True
        if self.modules.is_free(N) and self.homology.is_cohen_macaulay_ring(N.ring):
            return True
        return None

    # ---- 極小合衝 ------------------------------------------------------

    def check_minsyz(self, M: FPModule) -> Verdict:
        """depth 0 時四個條件等價：自由直和項、忠實、Soc(R)M ≠ 0、見證嵌入非極小"""
        ring = M.ring
        if not ring.is_artinian:
            raise ValidationError("minsyz 需要 Artinian 環", "not_artinian")
        Mm = self.modules.minimal_presentation(M)
        hypotheses = Hypotheses()
        hypotheses.add("artinian_ring", True)
        hypotheses.add("M_nonzero", not self.modules.is_zero(Mm))
        if Mm.embedding is not None and Mm.cache.get("embedded_in_free"):
            non_minimal = any(
                not entry.is_zero() and entry.constant_term() % ring.p != 0
                for row in Mm.embedding.matrix for entry in row
            )
            hypotheses.add("syzygy_witness", True, "resolution embedding")
        elif self.modules.is_free(Mm):
            non_minimal = True
            hypotheses.add("syzygy_witness", True, "free module")
        else:
            raise ValidationError("M 沒有合衝見證", "missing_syzygy_witness")

        summand, info = self.homology.has_free_summand(Mm)
        faithful = self.homology.is_faithful(Mm)
        socle_acts = not self.homology.ideal_annihilates(self.homology.socle_ideal(ring), Mm)
        conditions = {
            "free_summand": summand,
            "faithful": faithful,
            "socle_acts": socle_acts,
            "non_minimal_embedding": non_minimal,
        }
        payload: Dict[str, Any] = {"conditions": conditions}
        if info:
            payload["summand_witness"] = info
        agree = len(set(conditions.values())) == 1
        return self._verdict("minsyz", hypotheses, agree, payload)

    # ---- Fitting 理想 ----------------------------------------------------

    def check_fitting(self, M: FPModule, N: FPModule, r: int, seed: int = 0) -> Verdict:
        """Hom(M, N) ≅ N^r 當且僅當 μ(M) = r 且 I_{r-1}(M)N = 0"""
        if not self.modules.is_finite_length(N):
            raise ValidationError("fitting 需要有限長度的 N", "positive_dimensional_N")
        hypotheses = Hypotheses()
        hypotheses.add("N_finite_length", True)
        left, detail = self._hom_iso_to_power(M, N, r, seed)
        mu = self.modules.mu(M)
        fitting = self.homology.fitting_ideal(M, r - 1)
        right = mu == r and self.homology.ideal_annihilates(fitting, N)
        payload = {
            "r": r,
            "mu_M": mu,
            "hom_iso_to_Nr": left,
            "fitting_condition": right,
            "fitting_ideal": fitting.to_list(),
            "iso": detail,
        }
        if left is None:
            return self._verdict("fitting", hypotheses, None, payload, reason="iso_inconclusive")
        return self._verdict("fitting", hypotheses, left == right, payload)

    def check_fittingM(self, M: FPModule, r: int, seed: int = 0) -> Verdict:
        """Hom(M, M) ≅ M^r 時 I_{r-1}(M) = Ann M"""
        hypotheses = Hypotheses()
        hypotheses.add("M_finite_length", self.modules.is_finite_length(M))
        iso, detail = self._hom_iso_to_power(M, M, r, seed)
        hypotheses.add("hom_iso_to_Mr", iso, witness=detail)
        fitting = self.homology.fitting_ideal(M, r - 1)
        ann = self.homology.annihilator(M)
        payload = {"r": r, "fitting_ideal": fitting.to_list(), "annihilator": ann.to_list()}
        return self._verdict("fittingM", hypotheses, self.homology.ideal_equals(fitting, ann), payload)

    def check_fitting_best(self, M: FPModule, N: FPModule, r: int, seed: int = 0) -> Verdict:
        """Ass N = Min N 且 Hom(M, N) ≅ N^r ⇒ I_{r-1}(M)N = 0"""
        hypotheses = Hypotheses()
        hypotheses.add("ass_eq_min", self._ass_equals_min(N))
        iso, detail = self._hom_iso_to_power(M, N, r, seed)
        hypotheses.add("hom_iso_to_Nr", iso, witness=detail)
        fitting = self.homology.fitting_ideal(M, r - 1)
        payload = {"r": r, "fitting_ideal": fitting.to_list()}
        return self._verdict("fitting_best", hypotheses, self.homology.ideal_annihilates(fitting, N), payload)

    def check_fitting_sharp(self, ring: QuotientRing, seed: int = 0) -> Verdict:
        """depth 1 的環上 M = m、N = R：I_0(m)R = 0 但 Hom(m, R) ≇ R"""
        hypotheses = Hypotheses()
        hypotheses.add("depth_R_eq_1", self.homology.ring_depth(ring) == 1)
        M = self.modules.maximal_ideal(ring)
        R = self.modules.ring_module(ring)
        kills = self.homology.ideal_annihilates(self.homology.fitting_ideal(M, 0), R)
        iso, detail = self._hom_iso_to_power(M, R, 1, seed)
        payload = {"fitting_kills_N": kills, "hom_iso_to_Nr": iso, "mu_M": self.modules.mu(M), "iso": detail}
        if iso is None:
            return self._verdict("fitting_sharp", hypotheses, None, payload, reason="iso_inconclusive")
        return self._verdict("fitting_sharp", hypotheses, kills and not iso, payload)

    # ---- M 的自由性 ------------------------------------------------------

    def check_Mfree(self, M: FPModule, N: FPModule, s: int, r: Optional[int] = None, seed: int = 0) -> Verdict:
        """depth M ≥ t、depth N = t、Ass N = Min N、Ext^{1..s}(M,N) = 0 (s ≥ t)、Hom(M,N) ≅ N^r
        ⇒ M/IM ≅ (R/I)^r，I = Ann N；N 忠實，或 Ass R ⊆ Ass N 且 s > 0 時 M ≅ R^r"""
        r = self.modules.mu(M) if r is None else r
        ring = M.ring
        hypotheses = Hypotheses()
        if not hypotheses.add("N_nonzero", not self.modules.is_zero(N)):
            return self._verdict("Mfree", hypotheses, None)
        t = self.homology.ring_depth(ring)
        depth_m = self.homology.depth(M)
        depth_n = self.homology.depth(N)
        hypotheses.add("depth_M_ge_t", depth_m >= t, f"depth M = {_depth(depth_m)}, t = {t}")
        hypotheses.add("depth_N_eq_t", depth_n == t, f"depth N = {_depth(depth_n)}")
        hypotheses.add("ass_eq_min", self._ass_equals_min(N))
        hypotheses.add("s_ge_t", s >= t)
        hypotheses.add("ext_vanishing", self._ext_range(M, N, 1, s), f"1..{s}")
        iso, detail = self._hom_iso_to_power(M, N, r, seed)
        hypotheses.add("hom_iso_to_Nr", iso, witness=detail)
        if not hypotheses.all_true:
            return self._verdict("Mfree", hypotheses, None)

        ann = self.homology.annihilator(N)
        quotient = self.modules.quotient_ring(ring, ann.generators)
        reduced = self.modules.base_change(self.modules.minimal_presentation(M), quotient)
        quotient_free = self.modules.is_free(reduced) and self.modules.mu(reduced) == r
        faithful = ann.is_zero()
        # Ass R ⊆ Ass N 只在 Artinian 環上可判定（兩者都是 {m}）
        associated = ring.is_artinian and s > 0
        payload: Dict[str, Any] = {
            "r": r,
            "annihilator": ann.to_list(),
            "quotient_free": quotient_free,
            "faithful_N": faithful,
            "ass_R_in_ass_N": associated,
        }
        conclusion = quotient_free
        if faithful or associated:
            payload["M_free"] = self.modules.is_free(M) and self.modules.mu(M) == r
            conclusion = conclusion and payload["M_free"]
        return self._verdict("Mfree", hypotheses, conclusion, payload)

    def check_dualfree(self, M: FPModule) -> Verdict:
        """Ext^{1..t}(M,R) = 0：M* 自由 ⇒ M 自由；t = 0 且 R | M* ⇒ R | M"""
        ring = M.ring
        R = self.modules.ring_module(ring)
        t = self.homology.ring_depth(ring)
        hypotheses = Hypotheses()
        hypotheses.add("ext_vanishing_M_R", self._ext_range(M, R, 1, t), f"1..{t}")
        D = self.homology.dual(M)
        if self.modules.is_free(D):
            hypotheses.add("dual_free", True)
            return self._verdict("dualfree", hypotheses, self.modules.is_free(M), {"mode": "dual_free", "t": t})
        if t == 0:
            summand, info = self.homology.has_free_summand(D)
            hypotheses.add("dual_has_free_summand", summand, witness=info)
            result, witness = self.homology.has_free_summand(M)
            payload = {"mode": "dual_summand", "t": t, "summand_witness": witness}
            return self._verdict("dualfree", hypotheses, result, payload)
        hypotheses.add("dual_free", False)
        return self._verdict("dualfree", hypotheses, None, {"t": t})

    def check_dual_free_low_dim(self, M: FPModule) -> Verdict:
        """dim R ≤ 1 的 CM 環上，MCM 模組 M 的 M* 自由 ⇒ M 自由"""
        ring = M.ring
        hypotheses = Hypotheses()
        hypotheses.add("cohen_macaulay_ring", self.homology.is_cohen_macaulay_ring(ring))
        hypotheses.add("dim_le_1", ring.dim <= 1)
        hypotheses.add("M_mcm", self.homology.is_maximal_cm(M))
        hypotheses.add("dual_free", self.modules.is_free(self.homology.dual(M)))
        return self._verdict("dual_free_low_dim", hypotheses, self.modules.is_free(M))

    def check_hom_free(self, M: FPModule, N: FPModule, mode: str = "summand") -> Verdict:
        """depth M ≥ t、N ∈ ΩDeep、Ext^{1..t-1}(M,N) = 0 且
        summand: Hom ∈ DF ⇒ R | N；free: Hom 自由 ⇒ N 自由；extt: 另加 Ext^{1..t}(M,R) = 0 ⇒ M 自由"""
        if mode not in ("summand", "free", "extt"):
            raise ValidationError(f"未知的 hom_free 模式 {mode}", "unknown_mode")
        ring = M.ring
        t = self.homology.ring_depth(ring)
        hypotheses = Hypotheses()
        hypotheses.add("depth_M_ge_t", self.homology.depth(M) >= t)
        value, witness = _witness_flag(self.homology.omega_deep_witness(N))
        hypotheses.add("omega_deep_witness_N", value, witness=witness)
        hypotheses.add("ext_vanishing", self._ext_range(M, N, 1, t - 1), f"1..{t - 1}")
        H = self.homology.hom_module(M, N)
        statement_id = f"hom_free_{mode}"
        if mode == "summand":
            value, witness = _witness_flag(self.homology.df_witness(H))
            hypotheses.add("df_witness_hom", value, witness=witness)
            result, info = self.homology.has_free_summand(N)
            return self._verdict(statement_id, hypotheses, result, {"mode": mode, "summand_witness": info})
        hypotheses.add("hom_nonzero_free", not self.modules.is_zero(H) and self.modules.is_free(H))
        if mode == "free":
            return self._verdict(statement_id, hypotheses, self.modules.is_free(N), {"mode": mode})
        R = self.modules.ring_module(ring)
        hypotheses.add("ext_vanishing_M_R", self._ext_range(M, R, 1, t), f"1..{t}")
        return self._verdict(statement_id, hypotheses, self.modules.is_free(M), {"mode": mode})

    def check_intersect_summand(self, M: FPModule) -> Verdict:
        """M ∈ ΩDeep ∩ DF ⇒ R | M"""
        hypotheses = Hypotheses()
        value, witness = _witness_flag(self.homology.omega_deep_witness(M))
        hypotheses.add("omega_deep_witness", value, witness=witness)
        value, witness = _witness_flag(self.homology.df_witness(M))
        hypotheses.add("df_witness", value, witness=witness)
        result, info = self.homology.has_free_summand(M)
        return self._verdict("intersect_summand", hypotheses, result, {"summand_witness": info})

    def check_ideal_free(self, I: FPModule) -> Verdict:
        """一維 CM 環上 R/I 有限長度、Hom(I, I) 自由且 Ext^1(I, R) = 0 ⇒ I 自由"""
        ring = I.ring
        gens = I.cache.get("ideal_generators")
        if gens is None:
            raise ValidationError("ideal_free 需要以理想生成元建構的模組", "missing_ideal_generators")
        hypotheses = Hypotheses()
        hypotheses.add("cohen_macaulay_ring", self.homology.is_cohen_macaulay_ring(ring))
        hypotheses.add("dim_eq_1", ring.dim == 1)
        hypotheses.add("quotient_finite_length", self.modules.is_finite_length(self.modules.quotient_by_ideal(ring, gens)))
        hypotheses.add("endomorphisms_free", self.modules.is_free(self.homology.hom_module(I, I)))
        R = self.modules.ring_module(ring)
        hypotheses.add("ext1_I_R_zero", self._ext_range(I, R, 1, 1))
        return self._verdict("ideal_free", hypotheses, self.modules.is_free(I), {"ideal": [str(g) for g in gens]})

    def _cyclic_ass_fragment(self, M: FPModule, gens) -> Tuple[Optional[bool], str]:
        """Ass R ⊆ Ass(R/I) 要求 I 落在每個極小質理想中；只判定其否定"""
        ring = M.ring
        if self.modules.krull_dim(M) < ring.dim:
            return False, "dim R/I < dim R"
        for g in gens:
            if self.homology.is_nilpotent(g, ring) is False:
                return False, f"{g} 不是冪零元"
        return None, "需要準素分解"

    def check_cyclic(self, M: FPModule) -> Verdict:
        """M = R/I、Ass R ⊆ Ass M = Min M、Ext^{1..max(1,t)}(M, M) = 0 ⇒ M 自由"""
        ring = M.ring
        gens = M.cache.get("ideal_generators", ())
        t = self.homology.ring_depth(ring)
        hypotheses = Hypotheses()
        if ring.is_artinian or not gens:
            hypotheses.add("ass_fragment", True)
        else:
            value, detail = self._cyclic_ass_fragment(M, gens)
            hypotheses.add("ass_fragment", value, detail)
        top = max(1, t)
        hypotheses.add("ext_vanishing", self._ext_range(M, M, 1, top), f"1..{top}")
        return self._verdict("cyclic", hypotheses, self.modules.is_free(M), {"ideal": [str(g) for g in gens]})

    # ---- Cohen–Macaulay 與 Gorenstein ---------------------------------------

    def check_tensor_cm(self, M: FPModule, N: FPModule) -> Verdict:
        """M、N 為 MCM：Ext^{1..d}(M,N) = 0 ⇒ M ⊗ N^∨ 為 CM；Ext 有限長度時反之亦然"""
        ring = M.ring
        d = ring.dim
        hypotheses = Hypotheses()
        if not hypotheses.add("cohen_macaulay_ring", self.homology.is_cohen_macaulay_ring(ring)):
            return self._verdict("tensor_cm", hypotheses, None)
        hypotheses.add("M_mcm", self.homology.is_maximal_cm(M))
        hypotheses.add("N_mcm", self.homology.is_maximal_cm(N))
        if d == 0:
            return self._verdict("tensor_cm", hypotheses, True, {"d": 0, "vacuous": True})

        omega = self.homology.canonical_module(ring)
        T = self.homology.tensor_module(M, self.homology.hom_module(N, omega))
        depth_t = self.homology.depth(T)
        tensor_cm = depth_t >= d
        exts = [self.homology.ext_module(M, N, i) for i in range(1, d + 1)]
        ext_zero = all(self.modules.is_zero(E) for E in exts)
        finite = all(self.modules.is_finite_length(E) for E in exts)
        forward = tensor_cm or not ext_zero
        converse = ext_zero or not tensor_cm or not finite
        payload = {
            "d": d,
            "ext_vanishing": ext_zero,
            "ext_finite_length": finite,
            "tensor_depth": _depth(depth_t),
            "tensor_cm": tensor_cm,
        }
        return self._verdict("tensor_cm", hypotheses, forward and converse, payload)

    def check_testgor(self, M: FPModule, seed: int = 0) -> Verdict:
        """Ext^{1..d}(M,R) = 0、M 自反、M^∨ ≅ M* ⇒ R 為 Gorenstein"""
        ring = M.ring
        d = ring.dim
        hypotheses = Hypotheses()
        if not hypotheses.add("cohen_macaulay_ring", self.homology.is_cohen_macaulay_ring(ring)):
            return self._verdict("testgor", hypotheses, None)
        hypotheses.add("M_nonzero", not self.modules.is_zero(M))
        R = self.modules.ring_module(ring)
        hypotheses.add("ext_vanishing_M_R", self._ext_range(M, R, 1, d), f"1..{d}")
        hypotheses.add("reflexive", self.homology.is_reflexive(M))
        if not hypotheses.all_true:
            return self._verdict("testgor", hypotheses, None)
        omega = self.homology.canonical_module(ring)
        result = self.iso.is_isomorphic_up_to_shift(self.homology.hom_module(M, omega), self.homology.dual(M), seed)
        hypotheses.add("canonical_dual_iso_dual", _iso_flag(result), witness=result.to_dict())
        gorenstein = self.homology.gorenstein_test(ring)
        return self._verdict("testgor", hypotheses, gorenstein, {"type": self.homology.ring_type(ring)})

    def check_semidualizing(self, M: FPModule, bound: int = 2, seed: int = 0) -> Verdict:
        """R 與 ω 為半對偶模組（Ext 檢查到 bound 為止）"""
        ring = M.ring
        R = self.modules.ring_module(ring)
        known = _iso_flag(self.iso.is_isomorphic_up_to_shift(M, R, seed))
        if not known and self.homology.is_cohen_macaulay_ring(ring):
            omega = self.homology.canonical_module(ring)
            known = _iso_flag(self.iso.is_isomorphic_up_to_shift(M, omega, seed))
        hypotheses = Hypotheses()
        hypotheses.add("M_is_R_or_omega", known)
        value = self.homology.is_semidualizing(M, bound)
        payload = {"semidualizing": value, "ext_bound": bound, "label": f"up to Ext bound {bound}"}
        return self._verdict("semidualizing", hypotheses, value, payload)

    def check_tight_pair(self, M: FPModule, N: FPModule, L: Optional[int] = None, seed: int = 0) -> Verdict:
        """CM 環上 MCM 對，M 自由或 N ≅ ω：Ext^{1..d} = 0 ⇒ Ext^{d+1..L} = 0"""
        ring = M.ring
        d = ring.dim
        L = d + 2 if L is None else L
        hypotheses = Hypotheses()
        if not hypotheses.add("cohen_macaulay_ring", self.homology.is_cohen_macaulay_ring(ring)):
            return self._verdict("tight_pair", hypotheses, None)
        hypotheses.add("M_mcm", self.homology.is_maximal_cm(M))
        hypotheses.add("N_mcm", self.homology.is_maximal_cm(N))
        free = self.modules.is_free(M)
        canonical = free or self.iso.is_isomorphic_up_to_shift(N, self.homology.canonical_module(ring), seed).is_true
        hypotheses.add("M_free_or_N_canonical", free or canonical)
        hypotheses.add("ext_vanishing", self._ext_range(M, N, 1, d), f"1..{d}")
        vanishes = self._ext_range(M, N, d + 1, L)
        return self._verdict("tight_pair", hypotheses, vanishes, {"d": d, "L": L})

    # ---- ν 數與截斷 ------------------------------------------------------

    def check_nu_multiplicativity(self, M: FPModule, N: FPModule) -> Verdict:
        """depth M、depth N ≥ t 且 Ext^{1..t}(M,N) = 0 ⇒ ν_t(Hom(M,N)) = μ(M)ν_t(N)"""
        t = self.homology.ring_depth(M.ring)
        hypotheses = Hypotheses()
        hypotheses.add("depth_M_ge_t", self.homology.depth(M) >= t)
        hypotheses.add("depth_N_ge_t", self.homology.depth(N) >= t)
        hypotheses.add("ext_vanishing", self._ext_range(M, N, 1, t), f"1..{t}")
        if not hypotheses.all_true:
            return self._verdict("nu_multiplicativity", hypotheses, None)
        H = self.homology.hom_module(M, N)
        left = self.homology.nu(t, H)
        mu = self.modules.mu(M)
        right = mu * self.homology.nu(t, N)
        payload = {"t": t, "nu_hom": left, "mu_M": mu, "nu_N": self.homology.nu(t, N)}
        return self._verdict("nu_multiplicativity", hypotheses, left == right, payload)

    def check_ext_shift(self, M: FPModule, N: FPModule, i: int = 1) -> Verdict:
        """Ext^i(M,R) = Ext^i(ΩM,ΩN) = 0 ⇒ Ext^i(M,N) = 0；Ext^{i+1}(M,R) = Ext^i(M,N) = 0 ⇒ Ext^i(ΩM,ΩN) = 0"""
        hypotheses = Hypotheses()
        hypotheses.add("index_positive", i >= 1)
        if i < 1:
            return self._verdict("ext_shift", hypotheses, None)
        R = self.modules.ring_module(M.ring)
        syz_m = self.modules.syzygy_module(M, 1)
        syz_n = self.modules.syzygy_module(N, 1)
        e_mr = self._ext_range(M, R, i, i)
        e_mr_next = self._ext_range(M, R, i + 1, i + 1)
        e_mn = self._ext_range(M, N, i, i)
        e_syz = self._ext_range(syz_m, syz_n, i, i)
        forward = e_mn or not (e_mr and e_syz)
        backward = e_syz or not (e_mr_next and e_mn)
        payload = {
            "i": i,
            "ext_i_M_R": e_mr,
            "ext_next_M_R": e_mr_next,
            "ext_i_M_N": e_mn,
            "ext_i_syzygies": e_syz,
        }
        return self._verdict("ext_shift", hypotheses, forward and backward, payload)

    def check_hom_cutdown(self, M: FPModule, N: FPModule, seed: int = 0) -> Verdict:
        """一般正則序列 x（長度 n ≤ t）：Hom(M,N)/(x) 與 Hom(M̄,N̄) 的 Hilbert 函數 n < t 時相等、n = t 時逐次 ≤"""
        ring = M.ring
        t = self.homology.ring_depth(ring)
        hypotheses = Hypotheses()
        hypotheses.add("positive_depth", t > 0)
        hypotheses.add("depth_M_ge_t", self.homology.depth(M) >= t)
        hypotheses.add("depth_N_ge_t", self.homology.depth(N) >= t)
        hypotheses.add("ext_vanishing", self._ext_range(M, N, 1, t - 1), f"1..{t - 1}")
        if not hypotheses.all_true:
            return self._verdict("hom_cutdown", hypotheses, None)

        R = self.modules.ring_module(ring)
        H = self.homology.hom_module(M, N)
        sequence = self.rings.general_regular_sequence([R, M, N], t, derive_seed(seed, "cutdown"))
        Mm = self.modules.minimal_presentation(M)
        Nm = self.modules.minimal_presentation(N)
        # 次數 d 的映射把 t_j 次的生成元送到 t_j + d 次
        start = min(Nm.generator_twists, default=0) - max(Mm.generator_twists, default=0)
        upto = start + self.config.hilbert_compare_degree
        comparisons: List[Dict[str, Any]] = []
        holds = True
        for n in range(1, t + 1):
            forms = sequence[:n]
            quotient = self.modules.quotient_ring(ring, forms)
            left = self.modules.hilbert_prefix(self.modules.mod_out(H, forms), upto, start)
            cut_m = self.modules.base_change(Mm, quotient)
            cut_n = self.modules.base_change(Nm, quotient)
            right = self.modules.hilbert_prefix(self.homology.hom_module(cut_m, cut_n), upto, start)
            if n < t:
                ok = left == right
            else:
                ok = all(a <= b for a, b in zip(left, right))
            holds = holds and ok
            comparisons.append({"length": n, "hom_mod_x": left, "hom_cut": right, "ok": ok})
        payload = {"t": t, "sequence": [str(f) for f in sequence], "start_degree": start, "comparisons": comparisons}
        return self._verdict("hom_cutdown", hypotheses, holds, payload)

    # ---- 固定的回歸實例 ------------------------------------------------

    def check_conditions_needed(self, ring: QuotientRing, seed: int = 0) -> Verdict:
        """R = F5[x,y]/(xy)、M = S = R/(x)：Ext^1(M,S) = 0 但 M 不自由，缺的是忠實性"""
        x = ring.gens[0]
        M = self.modules.quotient_by_ideal(ring, [x], "S")
        hypotheses = Hypotheses()
        hypotheses.add("positive_depth_ring", self.homology.ring_depth(ring) >= 1)
        ext0 = self.homology.ext_module(M, M, 0)
        ext0_iso = self.iso.is_isomorphic(ext0, M, seed)
        ext1_dim = self.homology.ext_dim(M, M, 1)
        ext2_dim = self.homology.ext_dim(M, M, 2)
        summand, _ = self.homology.has_free_summand(M)
        ann = self.homology.annihilator(M)
        depth_m = self.homology.depth(M)
        gaps = []
        if not ann.is_zero():
            gaps.append("faithfulness")
        payload = {
            "ext0_iso_M": ext0_iso.is_true,
            "ext1_dim": ext1_dim,
            "ext2_dim": ext2_dim,
            "M_free": self.modules.is_free(M),
            "has_free_summand": summand,
            "annihilator": ann.to_list(),
            "depth_M": _depth(depth_m),
            "gap": gaps[0] if gaps else None,
        }
        expected = (
            payload["ext0_iso_M"]
            and ext1_dim == 0
            and ext2_dim == 1
            and not payload["M_free"]
            and not summand
            and payload["gap"] == "faithfulness"
        )
        return self._verdict("conditions_needed", hypotheses, expected, payload)

"""
同調代數服務
Hom、Ext、張量積、對偶、Auslander 轉置、Fitting 理想、socle、零化子、跡理想、
depth 與 ν 數、截斷後的重數、Matlis 對偶與典範模
"""
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import EngineConfig
from domain.models.ideal import Ideal, InvariantRecord
from domain.models.module import FPModule, ModuleHomomorphism, ModuleMap, Vector
from domain.models.polynomial import Polynomial, monomials_of_weighted_degree
from domain.models.quotient_ring import QuotientRing
from domain.services.groebner_service import GroebnerService, SubmoduleBasis, polynomial_to_vector
from domain.services.module_service import ModuleService
from domain.services.oracle_service import OracleService
from domain.services.ring_service import RingService
from infrastructure.linalg import span_basis_mod
from shared.exceptions import (
    ComputationError,
    NonCohenMacaulayError,
    NotRegularError,
    RegularSequenceNotFoundError,
    ValidationError,
)

logger = logging.getLogger(__name__)

Depth = Union[int, float]


@dataclass
class HomContext:
    """Hom(M, N) 的計算資料：H 嵌入於 G = ⊕_{j,k} R(u_k - t_j)，分量下標 j*n' + k"""
    source: FPModule
    target: FPModule
    module: FPModule
    ambient_twists: Tuple[int, ...]
    relations: List[Vector]
    basis: Optional[SubmoduleBasis] = None

    def decode(self, vec: Vector, degree: int) -> ModuleHomomorphism:
        ring = self.source.ring
        n, n2 = self.source.num_generators, self.target.num_generators
        buckets: List[List[Dict]] = [[{} for _ in range(n)] for _ in range(n2)]
        for (comp, mon), c in vec.items():
            j, k = divmod(comp, n2)
            buckets[k][j][mon] = c
        matrix = tuple(
            tuple(Polynomial.from_clean_terms(ring.ambient, entry) for entry in row) for row in buckets
        )
        return ModuleHomomorphism(self.source, self.target, matrix, degree)


@dataclass
class Witness:
    """ΩDeep / DF 成員資格的見證"""
    kind: str
    verified: bool
    detail: str = ""
    data: Dict[str, Any] = field(default_factory=dict)


class HomologyService:
    """同調不變量的計算"""

    def __init__(
        self,
        groebner: GroebnerService,
        modules: ModuleService,
        rings: RingService,
        oracle: OracleService,
        config: EngineConfig,
    ):
        self.groebner = groebner
        self.modules = modules
        self.rings = rings
        self.oracle = oracle
        self.config = config

    # ---- Hom(F, N) 的自由模組資料 ---------------------------------------

    @staticmethod
    def _hom_free(twists: Sequence[int], N: FPModule) -> Tuple[Tuple[int, ...], List[Vector]]:
        """Hom(⊕R(-t_j), N) = ⊕_j N(t_j)：扭轉與區塊對角關係"""
        n2 = N.num_generators
        u = N.generator_twists
        ambient = tuple(u[k] - t for t in twists for k in range(n2))
        relations: List[Vector] = []
        rel_vectors = N.relation_vectors()
        for j in range(len(twists)):
            for vec in rel_vectors:
                relations.append({(j * n2 + k, mon): c for (k, mon), c in vec.items()})
        return ambient, relations

    @staticmethod
    def _hom_map_columns(d: ModuleMap, n2: int) -> List[Vector]:
        """d: F' → F 誘導的 Hom(F, N) → Hom(F', N)，以 Hom(F, N) 的生成元為行"""
        columns: List[Vector] = []
        for j in range(d.target.rank):
            row = d.matrix[j]
            for k in range(n2):
                vec: Vector = {}
                for l, entry in enumerate(row):
                    for mon, c in entry.terms.items():
                        vec[(l * n2 + k, mon)] = c
                columns.append(vec)
        return columns

    def _cocycles(self, ring: QuotientRing, F_twists, d_next: Optional[ModuleMap], N: FPModule) -> List[Vector]:
        """ker(Hom(F_i, N) → Hom(F_{i+1}, N)) 的生成向量"""
        ambient, _ = self._hom_free(F_twists, N)
        zero = ring.ambient.zero_monomial
        if d_next is None or d_next.source.rank == 0:
            return [{(c, zero): 1} for c in range(len(ambient))]
        target_twists, target_relations = self._hom_free(d_next.source.twists, N)
        columns = [self.groebner.reduce_mod_ideal(v, ring) for v in self._hom_map_columns(d_next, N.num_generators)]
        return self.groebner.syzygies_modulo(ring, columns, target_relations, target_twists, ambient)

    # ---- Hom 與 Ext ----------------------------------------------------

    def hom_context(self, M: FPModule, N: FPModule) -> HomContext:
        key = ("hom", id(N))
        entry = M.cache.get(key)
        if entry is not None and entry[0] is N:
            return entry[1]
        Mm = self.modules.minimal_presentation(M)
        Nm = self.modules.minimal_presentation(N)
        ring = Mm.ring
        ambient, relations = self._hom_free(Mm.generator_twists, Nm)
        d1 = Mm.presentation if Mm.num_relations else None
        cocycles = self._cocycles(ring, Mm.generator_twists, d1, Nm)
        label = f"Hom({M.name or 'M'},{N.name or 'N'})"
        H = self.modules.subquotient(ring, cocycles, relations, ambient, label)
        ctx = HomContext(Mm, Nm, H, ambient, relations)
        M.cache[key] = (N, ctx)
        return ctx

    def hom_module(self, M: FPModule, N: FPModule) -> FPModule:
        return self.hom_context(M, N).module

    def hom_degree_basis(self, M: FPModule, N: FPModule, degree: int = 0) -> List[ModuleHomomorphism]:
        """Hom(M, N) 中 degree 次部分的 k-基底（作用於極小表現的生成元）"""
        ctx = self.hom_context(M, N)
        H = ctx.module
        ring = H.ring
        if H.num_generators == 0:
            return []
        if ctx.basis is None:
            ctx.basis = self.groebner.submodule_basis(ring, ctx.ambient_twists, ctx.relations)
        images = H.embedding.column_vectors()
        candidates: List[Vector] = []
        for vec, d in zip(images, H.generator_twists):
            for mon in monomials_of_weighted_degree(ring.weights, degree - d):
                scaled = {(comp, tuple(a + b for a, b in zip(m, mon))): c for (comp, m), c in vec.items()}
                reduced = ctx.basis.reduce(scaled)
                if reduced:
                    candidates.append(reduced)
        if not candidates:
            return []
        terms = sorted({t for v in candidates for t in v})
        index = {t: i for i, t in enumerate(terms)}
        matrix = np.zeros((len(candidates), len(terms)), dtype=np.int64)
        for r, vec in enumerate(candidates):
            for t, c in vec.items():
                matrix[r, index[t]] = c
        rows = span_basis_mod(matrix, ring.p)
        result = []
        for row in rows:
            vec = {terms[i]: int(c) for i, c in enumerate(row) if c}
            result.append(ctx.decode(vec, degree))
        return result

    def ext_module(self, M: FPModule, N: FPModule, i: int) -> FPModule:
        """Ext^i(M, N) 作為 Hom(F_•, N) 的同調（保留到 Hom(F_i, N) 的嵌入）"""
        if i < 0:
            raise ValidationError("Ext 的指標必須非負", "bad_index")
        if i == 0:
            return self.hom_module(M, N)
        key = ("ext", i, id(N))
        entry = M.cache.get(key)
        if entry is not None and entry[0] is N:
            return entry[1]
        ring = M.ring
        Nm = self.modules.minimal_presentation(N)
        res = self.modules.resolution(M, i + 1)
        d_i = res.differential(i)
        label = f"Ext^{i}({M.name or 'M'},{N.name or 'N'})"
        if d_i is None or d_i.source.rank == 0 or Nm.num_generators == 0:
            result = self.modules.zero_module(ring)
        else:
            F_twists = d_i.source.twists
            ambient, relations = self._hom_free(F_twists, Nm)
            cocycles = self._cocycles(ring, F_twists, res.differential(i + 1), Nm)
            boundaries = [self.groebner.reduce_mod_ideal(v, ring) for v in self._hom_map_columns(d_i, Nm.num_generators)]
            result = self.modules.subquotient(ring, cocycles, boundaries + relations, ambient, label)
        result.name = label
        M.cache[key] = (N, result)
        logger.debug("[Ext] %s: %d 個生成元", label, result.num_generators)
        return result

    def ext_dim(self, M: FPModule, N: FPModule, i: int) -> int:
        """Ext^i 的總 k-維數（必須是有限長度）"""
        return self.modules.length(self.ext_module(M, N, i))

    def ext_vanishes(self, M: FPModule, N: FPModule, indices: Sequence[int]) -> bool:
        return all(self.modules.is_zero(self.ext_module(M, N, i)) for i in indices)

    # ---- 張量、轉置與對偶 ----------------------------------------------

    def tensor_module(self, M: FPModule, N: FPModule) -> FPModule:
        """區塊矩陣 (A⊗I | I⊗B) 的餘核"""
        Mm = self.modules.minimal_presentation(M)
        Nm = self.modules.minimal_presentation(N)
        n, n2 = Mm.num_generators, Nm.num_generators
        twists = [t + u for t in Mm.generator_twists for u in Nm.generator_twists]
        relations: List[Vector] = []
        for vec in Mm.relation_vectors():
            for k in range(n2):
                relations.append({(j * n2 + k, mon): c for (j, mon), c in vec.items()})
        for j in range(n):
            for vec in Nm.relation_vectors():
                relations.append({(j * n2 + k, mon): c for (k, mon), c in vec.items()})
        label = f"{M.name or 'M'}⊗{N.name or 'N'}"
        return self.modules.minimal_presentation(self.modules.presented(Mm.ring, relations, twists, label))

    def transpose(self, M: FPModule) -> FPModule:
        """Tr M = coker(A^T)"""
        Mm = self.modules.minimal_presentation(M)
        A = Mm.presentation
        twists = [-s for s in Mm.relation_twists]
        columns: List[Vector] = []
        for j in range(Mm.num_generators):
            vec: Vector = {}
            for l, entry in enumerate(A.matrix[j]):
                for mon, c in entry.terms.items():
                    vec[(l, mon)] = c
            columns.append(vec)
        label = f"Tr({M.name or 'M'})"
        return self.modules.minimal_presentation(self.modules.presented(Mm.ring, columns, twists, label))

    def dual(self, M: FPModule) -> FPModule:
        D = self.hom_module(M, self.modules.ring_module(M.ring))
        return D

    # ---- 理想 ----------------------------------------------------------

    def ideal(self, ring: QuotientRing, gens: Sequence[Polynomial]) -> Ideal:
        """極小生成元化的理想"""
        reduced = [self.groebner.normal_form(g, ring) for g in gens]
        reduced = [g for g in reduced if not g.is_zero()]
        if not reduced:
            return Ideal(ring, ())
        vectors = [polynomial_to_vector(g) for g in reduced]
        keep = self.groebner.minimal_generators(ring, vectors, [], (0,))
        ordered = sorted((reduced[i] for i in keep), key=lambda g: (g.degree, str(g)))
        return Ideal(ring, tuple(ordered))

    def unit_ideal(self, ring: QuotientRing) -> Ideal:
        return Ideal(ring, (ring.one(),))

    def zero_ideal(self, ring: QuotientRing) -> Ideal:
        return Ideal(ring, ())

    def _ideal_basis(self, I: Ideal) -> SubmoduleBasis:
        basis = I.cache.get("gb")
        if basis is None:
            basis = self.groebner.submodule_basis(I.ring, (0,), [polynomial_to_vector(g) for g in I.generators])
            I.cache["gb"] = basis
        return basis

    def ideal_contains(self, I: Ideal, f: Polynomial) -> bool:
        f = self.groebner.normal_form(f, I.ring)
        if f.is_zero():
            return True
        return not self._ideal_basis(I).reduce(polynomial_to_vector(f))

    def ideal_contains_ideal(self, I: Ideal, J: Ideal) -> bool:
        return all(self.ideal_contains(I, g) for g in J.generators)

    def ideal_equals(self, I: Ideal, J: Ideal) -> bool:
        return self.ideal_contains_ideal(I, J) and self.ideal_contains_ideal(J, I)

    def ideal_is_unit(self, I: Ideal) -> bool:
        return any(g.is_constant() for g in I.generators)

    def ideal_product(self, I: Ideal, J: Ideal) -> Ideal:
        return self.ideal(I.ring, [f * g for f in I.generators for g in J.generators])

    def ideal_sum(self, I: Ideal, J: Ideal) -> Ideal:
        return self.ideal(I.ring, list(I.generators) + list(J.generators))

    def ideal_annihilates(self, I: Ideal, M: FPModule) -> bool:
        """I·M = 0"""
        for f in I.generators:
            for i in range(M.num_generators):
                vec = {(i, mon): c for mon, c in f.terms.items()}
                if self.groebner.module_normal_form(vec, M):
                    return False
        return True

    def ideal_height(self, I: Ideal) -> int:
        ring = I.ring
        quotient = self.modules.quotient_by_ideal(ring, I.generators)
        return ring.dim - self.modules.krull_dim(quotient)

    # ---- Fitting 理想、零化子、socle、跡 --------------------------------

    def _determinant(self, rows: List[List[Polynomial]], ring: QuotientRing) -> Polynomial:
        size = len(rows)
        if size == 1:
            return rows[0][0]
        total = ring.zero()
        for c in range(size):
            entry = rows[0][c]
            if entry.is_zero():
                continue
            minor = [row[:c] + row[c + 1:] for row in rows[1:]]
            term = self.groebner.normal_form(entry * self._determinant(minor, ring), ring)
            total = total + term if c % 2 == 0 else total - term
        return self.groebner.normal_form(total, ring)

    def fitting_ideal(self, M: FPModule, j: int) -> Ideal:
        """I_j(M)：極小表現的 (n-j) 階子式"""
        Mm = self.modules.minimal_presentation(M)
        ring = Mm.ring
        if j < 0:
            return self.zero_ideal(ring)
        n, m = Mm.num_generators, Mm.num_relations
        k = n - j
        if k <= 0:
            return self.unit_ideal(ring)
        if k > m:
            return self.zero_ideal(ring)
        matrix = [list(row) for row in Mm.presentation.matrix]
        minors = []
        for row_set in combinations(range(n), k):
            for col_set in combinations(range(m), k):
                sub = [[matrix[r][c] for c in col_set] for r in row_set]
                det = self._determinant(sub, ring)
                if not det.is_zero():
                    minors.append(det)
        return self.ideal(ring, minors)

    def annihilator(self, M: FPModule) -> Ideal:
        """{f : f e_j ∈ U 對所有 j}，以單行映射 R → ⊕_j M 的合衝計算"""
        Mm = self.modules.minimal_presentation(M)
        ring = Mm.ring
        n = Mm.num_generators
        if n == 0:
            return self.unit_ideal(ring)
        t = Mm.generator_twists
        twists = tuple(t[k] - t[j] for j in range(n) for k in range(n))
        zero = ring.ambient.zero_monomial
        column = {(j * n + j, zero): 1 for j in range(n)}
        modulo: List[Vector] = []
        for j in range(n):
            for vec in Mm.relation_vectors():
                modulo.append({(j * n + k, mon): c for (k, mon), c in vec.items()})
        syz = self.groebner.syzygies_modulo(ring, [column], modulo, twists, (0,))
        gens = [Polynomial.from_clean_terms(ring.ambient, {mon: c for (_, mon), c in v.items()}) for v in syz]
        return self.ideal(ring, gens)

    def is_faithful(self, M: FPModule) -> bool:
        return self.annihilator(M).is_zero()

    def is_nilpotent(self, f: Polynomial, ring: QuotientRing) -> Optional[bool]:
        """f^k = 0 時為 True；ann(f^k) 已穩定而 f^k ≠ 0 時為 False；nilpotency_bound 次內未穩定為 None"""
        power = self.groebner.normal_form(f, ring)
        previous: Optional[Ideal] = None
        for _ in range(self.config.nilpotency_bound):
            if power.is_zero():
                return True
            current = self.annihilator(self.modules.ideal_module(ring, [power]))
            if previous is not None and self.ideal_equals(previous, current):
                return False
            previous = current
            power = self.groebner.normal_form(power * f, ring)
        return None

    def socle(self, M: FPModule) -> FPModule:
        """M → ⊕_v M(次數減 w_v)，e ↦ (x_v e)_v 的核"""
        Mm = self.modules.minimal_presentation(M)
        ring = Mm.ring
        n = Mm.num_generators
        label = f"Soc({M.name or 'M'})"
        if n == 0:
            return self.modules.zero_module(ring)
        copies = [self.modules.twist(Mm, -w) for w in ring.weights]
        target = self.modules.direct_sum(copies, "⊕M")
        zero = ring.zero()
        rows = []
        for v in range(ring.n):
            x = ring.variable(v)
            for k in range(n):
                rows.append(tuple(x if j == k else zero for j in range(n)))
        f = ModuleHomomorphism(Mm, target, tuple(rows), 0)
        return self.modules.kernel_of_map(f, label)

    def socle_dim(self, M: FPModule) -> int:
        return self.modules.length(self.socle(M))

    def socle_ideal(self, ring: QuotientRing) -> Ideal:
        """Soc(R) 作為理想"""
        cached = ring.cache.get("socle_ideal")
        if cached is None:
            S = self.socle(self.modules.ring_module(ring))
            gens = [] if S.embedding is None else [S.embedding.matrix[0][j] for j in range(S.num_generators)]
            cached = self.ideal(ring, gens)
            ring.cache["socle_ideal"] = cached
        return cached

    def trace_ideal(self, M: FPModule) -> Ideal:
        """由 Hom(M, R) 生成元在 M 生成元上的值生成"""
        D = self.dual(M)
        ring = M.ring
        if D.num_generators == 0:
            return self.zero_ideal(ring)
        values = [entry for row in D.embedding.matrix for entry in row]
        return self.ideal(ring, values)

    def has_free_summand(self, M: FPModule) -> Tuple[bool, Optional[Dict[str, Any]]]:
        """存在 φ 與生成元 e_j 使 φ(e_j) 為單位元；回傳 (結果, 見證)"""
        D = self.dual(M)
        if D.num_generators == 0:
            return False, None
        for j, row in enumerate(D.embedding.matrix):
            for a, entry in enumerate(row):
                entry = self.groebner.normal_form(entry, M.ring)
                if not entry.is_zero() and entry.is_constant():
                    return True, {"hom_generator": a, "module_generator": j, "value": str(entry)}
        return False, None

    # ---- depth、ν、type -------------------------------------------------

    def residue_field(self, ring: QuotientRing) -> FPModule:
        cached = ring.cache.get("residue")
        if cached is None:
            cached = self.modules.residue_field(ring)
            ring.cache["residue"] = cached
        return cached

    def nu(self, i: int, M: FPModule) -> int:
        """ν_i(M) = dim_k Ext^i(k, M)"""
        key = ("nu", i)
        if key not in M.cache:
            M.cache[key] = self.ext_dim(self.residue_field(M.ring), M, i)
        return M.cache[key]

    def depth(self, M: FPModule) -> Depth:
        """最小的 i 使 ν_i(M) ≠ 0；零模組的 depth 為無窮大"""
        if "depth" in M.cache:
            return M.cache["depth"]
        if self.modules.is_zero(M):
            M.cache["depth"] = math.inf
            return math.inf
        for i in range(0, M.ring.dim + 1):
            if self.nu(i, M):
                M.cache["depth"] = i
                return i
        raise ComputationError(f"{M.name or 'M'} 的 depth 超過環的維數")

    def ring_depth(self, ring: QuotientRing) -> int:
        if "depth" not in ring.cache:
            ring.cache["depth"] = self.depth(self.modules.ring_module(ring))
        return ring.cache["depth"]

    def module_type(self, M: FPModule) -> int:
        depth = self.depth(M)
        if depth == math.inf:
            return 0
        return self.nu(int(depth), M)

    def ring_type(self, ring: QuotientRing) -> int:
        return self.module_type(self.modules.ring_module(ring))

    def is_maximal_cm(self, M: FPModule) -> bool:
        return self.depth(M) >= M.ring.dim

    def is_cohen_macaulay_ring(self, ring: QuotientRing) -> bool:
        return self.ring_depth(ring) == ring.dim

    # ---- 重數 ----------------------------------------------------------

    def multiplicity(self, M: FPModule, seq: Sequence[Polynomial]) -> int:
        """length(M/(seq)M)；seq 必須是長度 dim R 的 M-正則序列"""
        ring = M.ring
        if len(seq) != ring.dim:
            raise ValidationError(f"序列長度 {len(seq)} 與環的維數 {ring.dim} 不符", "bad_sequence_length")
        current = M
        for f in seq:
            if not self.modules.is_regular_on(current, f):
                raise NotRegularError(f"{f} 在 {current.name or 'M'} 的商上不是正則元素")
            current = self.modules.mod_out(current, [f])
        return self.modules.length(current)

    def generic_rank_estimate(self, M: FPModule, seed: int = 0) -> Optional[Dict[str, Any]]:
        """e(M)/e(R) 的啟發式秩估計；找不到參數系時回傳 None"""
        ring = M.ring
        R = self.modules.ring_module(ring)
        try:
            seq = self.rings.general_regular_sequence([R, M], ring.dim, seed)
        except RegularSequenceNotFoundError:
            return None
        e_m = self.multiplicity(M, seq)
        e_r = self.multiplicity(R, seq)
        return {"estimate": e_m / e_r, "e_module": e_m, "e_ring": e_r, "heuristic": True}

    # ---- Matlis 對偶與典範模 --------------------------------------------

    def matlis_dual(self, M: FPModule) -> FPModule:
        X = self.oracle.realize(M)
        dual = self.oracle.lin_matlis_dual(X)
        return self.oracle.lin_to_fp(dual, f"{M.name or 'M'}^v")

    def _polynomial_ring_of(self, ring: QuotientRing) -> QuotientRing:
        cached = ring.cache.get("ambient_ring")
        if cached is None:
            cached = self.groebner.make_quotient_ring(ring.ambient, [])
            ring.cache["ambient_ring"] = cached
        return cached

    def canonical_module(self, ring: QuotientRing) -> FPModule:
        """ω = Ext_S^{n-d}(S/I, S(-Σw))，平移使極小生成元次數為 0，再基變換到 R"""
        cached = ring.cache.get("canonical")
        if cached is not None:
            return cached
        if not self.is_cohen_macaulay_ring(ring):
            raise NonCohenMacaulayError(f"{ring.describe()} 不是 Cohen–Macaulay 環")
        S = self._polynomial_ring_of(ring)
        codim = ring.n - ring.dim
        quotient = self.modules.quotient_by_ideal(S, ring.ideal_gens, "S/I")
        target = self.modules.free_module(S, (sum(ring.weights),), "S")
        E = self.modules.minimal_presentation(self.ext_module(quotient, target, codim))
        shift = -min(E.generator_twists) if E.num_generators else 0
        shifted = self.modules.twist(E, shift)
        omega = self.modules.minimal_presentation(self.modules.base_change(shifted, ring))
        omega.name = "ω"
        ring.cache["canonical"] = omega
        logger.info("[Canonical] %s: μ(ω) = %d", ring.describe(), omega.num_generators)
        return omega

    def gorenstein_test(self, ring: QuotientRing) -> bool:
        by_mu = self.modules.mu(self.canonical_module(ring)) == 1
        by_type = self.ring_type(ring) == 1
        if by_mu != by_type:
            raise ComputationError(
                f"{ring.describe()}: μ(ω)=1 為 {by_mu}，type=1 為 {by_type}，兩者不一致"
            )
        return by_mu

    # ---- 自反性與半對偶 ------------------------------------------------

    def is_reflexive(self, M: FPModule) -> bool:
        """自然映射 M → M** 為同構"""
        Mm = self.modules.minimal_presentation(M)
        ring = Mm.ring
        D = self.dual(Mm)
        s = D.num_generators
        theta_twists = tuple(-d for d in D.generator_twists)
        target = self.modules.free_module(ring, theta_twists)
        rows = []
        for a in range(s):
            rows.append(tuple(D.embedding.matrix[j][a] for j in range(Mm.num_generators)))
        theta = ModuleHomomorphism(Mm, target, tuple(rows), 0)
        if not self.modules.is_zero(self.modules.kernel_of_map(theta)):
            return False
        double = self.hom_module(D, self.modules.ring_module(ring))
        if double.num_generators == 0:
            return True
        image = self.groebner.submodule_basis(ring, theta_twists, theta.column_vectors())
        return all(not image.reduce(v) for v in double.embedding.column_vectors())

    def is_semidualizing(self, M: FPModule, bound: int) -> bool:
        """R → Hom(M, M) 為同構且 Ext^{1..bound}(M, M) = 0"""
        if self.modules.is_zero(M) or not self.is_faithful(M):
            return False
        ctx = self.hom_context(M, M)
        H = ctx.module
        ring = H.ring
        n = ctx.source.num_generators
        zero = ring.ambient.zero_monomial
        identity = {(j * n + j, zero): 1 for j in range(n)}
        span = self.groebner.submodule_basis(ring, ctx.ambient_twists, ctx.relations + [identity])
        if any(span.reduce(v) for v in H.embedding.column_vectors()):
            return False
        return self.ext_vanishes(M, M, range(1, bound + 1))

    # ---- ΩDeep 與 DF 見證 -----------------------------------------------

    def verify_embedding_witness(self, M: FPModule, embedding: ModuleMap, min_depth: int) -> Witness:
        """M → F 單射且餘核 depth ≥ min_depth"""
        Mm = self.modules.minimal_presentation(M)
        target = self.modules.free_module(M.ring, embedding.target.twists)
        try:
            f = self.modules.homomorphism(Mm, target, embedding.matrix, 0)
        except ValidationError as e:
            return Witness("embedding", False, f"見證映射無效: {e.message}")
        if not self.modules.is_zero(self.modules.kernel_of_map(f)):
            return Witness("embedding", False, "見證映射不是單射")
        depth = self.depth(self.modules.cokernel_of_map(f))
        ok = depth >= min_depth
        return Witness("embedding", ok, f"餘核 depth = {depth}", {"cokernel_depth": _depth_value(depth)})

    def omega_deep_witness(self, M: FPModule) -> Optional[Witness]:
        """標準見證：自由模組，或帶著分解嵌入的合衝模組"""
        t = self.ring_depth(M.ring)
        if self.modules.is_free(M):
            return Witness("free", True, "自由模組屬於 ΩDeep")
        Mm = self.modules.minimal_presentation(M)
        if Mm.embedding is not None and Mm.cache.get("embedded_in_free"):
            return self.verify_embedding_witness(Mm, Mm.embedding, t)
        return None

    def df_witness(self, M: FPModule) -> Optional[Witness]:
        """標準見證：t = 0 時的忠實性，或餘部分夠深的自由直和項"""
        ring = M.ring
        t = self.ring_depth(ring)
        if self.modules.is_zero(M):
            return None
        if t == 0:
            return Witness("faithful", self.is_faithful(M), "depth 0 時 DF 等同忠實")
        has_summand, info = self.has_free_summand(M)
        if not has_summand:
            return None
        Mm = self.modules.minimal_presentation(M)
        j = info["module_generator"]
        source = self.modules.free_module(ring, (Mm.generator_twists[j],))
        zero = ring.zero()
        matrix = tuple((ring.one() if k == j else zero,) for k in range(Mm.num_generators))
        split = ModuleHomomorphism(source, Mm, matrix, 0)
        complement = self.modules.cokernel_of_map(split)
        depth = self.depth(complement)
        return Witness(
            "free_summand", depth >= t, f"餘部分 depth = {depth}", {"complement_depth": _depth_value(depth)}
        )

    # ---- 不變量摘要 ----------------------------------------------------

    def invariants(self, M: FPModule, upto: int = 6) -> InvariantRecord:
        finite = self.modules.is_finite_length(M)
        depth = self.depth(M)
        return InvariantRecord(
            mu=self.modules.mu(M),
            depth=None if depth == math.inf else int(depth),
            krull_dim=self.modules.krull_dim(M),
            hilbert_prefix=self.modules.hilbert_prefix(M, upto),
            betti_prefix=self.modules.betti_numbers(M, self.modules.default_resolution_length(M.ring)),
            socle_dim=self.socle_dim(M),
            type=self.module_type(M),
            annihilator=self.annihilator(M).to_list(),
            length=self.modules.length(M) if finite else None,
        )


def _depth_value(depth: Depth) -> Union[int, str]:
    return "inf" if depth == math.inf else int(depth)

"""
有限表現分次模組服務
建構、極小表現、合衝、自由分解、映射的核/像/餘核、截斷與基變換
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import EngineConfig
from domain.models.module import (
    FPModule,
    FreeModule,
    ModuleHomomorphism,
    ModuleMap,
    Resolution,
    Vector,
    column_to_vector,
    vector_degree,
)
from domain.models.polynomial import Polynomial, monomial_mul
from domain.models.quotient_ring import QuotientRing
from domain.services.groebner_service import GroebnerService
from infrastructure.linalg import inverse_mod, is_invertible_mod
from shared.exceptions import (
    IncompatibleMapError,
    InfiniteLengthError,
    NotRegularError,
    ValidationError,
)

logger = logging.getLogger(__name__)


def combine(columns: Sequence[Vector], coefficients: Vector, p: int) -> Vector:
    """Σ coefficients_j · columns[j]，coefficients 是來源自由模組中的向量"""
    result: Vector = {}
    for (j, mon), c in coefficients.items():
        for (comp, m), v in columns[j].items():
            term = (comp, monomial_mul(m, mon))
            value = (result.get(term, 0) + c * v) % p
            if value:
                result[term] = value
            else:
                result.pop(term, None)
    return result


def add_vectors(a: Vector, b: Vector, p: int, scale: int = 1) -> Vector:
    result = dict(a)
    for term, c in b.items():
        value = (result.get(term, 0) + scale * c) % p
        if value:
            result[term] = value
        else:
            result.pop(term, None)
    return result


def shift_components(vec: Vector, offset: int) -> Vector:
    return {(comp + offset, mon): c for (comp, mon), c in vec.items()}


def vectors_to_matrix(vectors: Sequence[Vector], rank: int, ring: QuotientRing) -> Tuple[Tuple[Polynomial, ...], ...]:
    buckets: List[List[Dict]] = [[{} for _ in vectors] for _ in range(rank)]
    for j, vec in enumerate(vectors):
        for (comp, mon), c in vec.items():
            buckets[comp][j][mon] = c
    return tuple(
        tuple(Polynomial.from_clean_terms(ring.ambient, entry) for entry in row) for row in buckets
    )


class ModuleService:
    """FPModule 的建構與基本運算"""

    def __init__(self, groebner: GroebnerService, config: EngineConfig):
        self.groebner = groebner
        self.config = config

    # ---- 建構 ----------------------------------------------------------

    def presented(
        self,
        ring: QuotientRing,
        relations: Sequence[Vector],
        generator_twists: Sequence[int],
        name: Optional[str] = None,
        embedding: Optional[ModuleMap] = None,
    ) -> FPModule:
        """由關係向量建構 coker；零向量會被丟棄"""
        p = ring.p
        generator_twists = tuple(generator_twists)
        cleaned = []
        for vec in relations:
            vec = self.groebner.reduce_mod_ideal(vec, ring)
            if vec:
                cleaned.append(vec)
        relation_twists = [vector_degree(v, generator_twists, ring.weights) for v in cleaned]
        presentation = ModuleMap(
            FreeModule(ring, relation_twists),
            FreeModule(ring, generator_twists),
            vectors_to_matrix(cleaned, len(generator_twists), ring),
        )
        return FPModule(presentation, name, embedding)

    def from_matrix(
        self,
        ring: QuotientRing,
        rows: Sequence[Sequence[Polynomial]],
        twists: Optional[Sequence[int]] = None,
        name: Optional[str] = None,
    ) -> FPModule:
        """coker(rows)；來源扭轉由非零項推得，不一致時錯誤訊息指出該項"""
        n = len(rows)
        twists = tuple(twists) if twists is not None else tuple(0 for _ in range(n))
        if len(twists) != n:
            raise ValidationError(f"扭轉數量 {len(twists)} 與列數 {n} 不符", "bad_twists")
        m = len(rows[0]) if rows else 0
        if any(len(row) != m for row in rows):
            raise ValidationError("矩陣各列長度不一致", "bad_matrix_shape")
        columns: List[Vector] = []
        for j in range(m):
            expected = None
            vec: Vector = {}
            for i in range(n):
                entry = self.groebner.normal_form(rows[i][j], ring)
                if entry.is_zero():
                    continue
                degree = entry.homogeneous_degree
                if degree is None or (expected is not None and degree + twists[i] != expected):
                    raise ValidationError(
                        f"第 ({i + 1},{j + 1}) 項 {rows[i][j]} 的次數與同行其他項不一致",
                        "inhomogeneous_entry",
                    )
                expected = degree + twists[i]
                for mon, c in entry.terms.items():
                    vec[(i, mon)] = c
            columns.append(vec)
        return self.presented(ring, columns, twists, name)

    def free_module(self, ring: QuotientRing, twists: Sequence[int], name: Optional[str] = None) -> FPModule:
        return self.presented(ring, [], twists, name or f"R^{len(twists)}")

    def zero_module(self, ring: QuotientRing) -> FPModule:
        return self.presented(ring, [], (), "0")

    def ring_module(self, ring: QuotientRing) -> FPModule:
        return self.free_module(ring, (0,), "R")

    def quotient_by_ideal(self, ring: QuotientRing, gens: Sequence[Polynomial], name: Optional[str] = None) -> FPModule:
        """R/(gens)"""
        columns = [{(0, mon): c for mon, c in self.groebner.normal_form(g, ring).terms.items()} for g in gens]
        return self.presented(ring, columns, (0,), name)

    def residue_field(self, ring: QuotientRing) -> FPModule:
        return self.quotient_by_ideal(ring, ring.gens, "k")

    def ideal_module(self, ring: QuotientRing, gens: Sequence[Polynomial], name: Optional[str] = None) -> FPModule:
        """理想 (gens) 作為 R 的子模組，保留到 R 的嵌入"""
        vectors = [{(0, mon): c for mon, c in self.groebner.normal_form(g, ring).terms.items()} for g in gens]
        return self.subquotient(ring, vectors, [], (0,), name)

    def maximal_ideal(self, ring: QuotientRing) -> FPModule:
        return self.ideal_module(ring, ring.gens, "m")

    def direct_sum(self, modules: Sequence[FPModule], name: Optional[str] = None) -> FPModule:
        if not modules:
            raise ValidationError("直和至少需要一個模組", "empty_sum")
        ring = modules[0].ring
        twists: List[int] = []
        relations: List[Vector] = []
        for M in modules:
            if M.ring != ring:
                raise ValidationError("直和的模組必須在同一個環上", "ring_mismatch")
            offset = len(twists)
            relations.extend(shift_components(v, offset) for v in M.relation_vectors())
            twists.extend(M.generator_twists)
        label = name or " + ".join(M.name or "M" for M in modules)
        return self.presented(ring, relations, twists, label)

    def twist(self, M: FPModule, shift: int, name: Optional[str] = None) -> FPModule:
        """所有次數加 shift（生成元次數 t_i 變成 t_i + shift）"""
        twists = tuple(t + shift for t in M.generator_twists)
        return self.presented(M.ring, M.relation_vectors(), twists, name or M.name)

    def subquotient(
        self,
        ring: QuotientRing,
        generators: Sequence[Vector],
        modulo: Sequence[Vector],
        ambient_twists: Sequence[int],
        name: Optional[str] = None,
    ) -> FPModule:
        """(span(generators) + U) / U，其中 U = span(modulo) + I·F；保留嵌入"""
        ambient_twists = tuple(ambient_twists)
        keep = self.groebner.minimal_generators(ring, generators, modulo, ambient_twists)
        gens = [generators[i] for i in keep]
        gens.sort(key=lambda v: vector_degree(v, ambient_twists, ring.weights))
        gen_twists = tuple(vector_degree(v, ambient_twists, ring.weights) for v in gens)
        relations = self.groebner.syzygies_modulo(ring, gens, modulo, ambient_twists, gen_twists)
        embedding = ModuleMap(
            FreeModule(ring, gen_twists),
            FreeModule(ring, ambient_twists),
            vectors_to_matrix(gens, len(ambient_twists), ring),
        )
        module = self.presented(ring, relations, gen_twists, name, embedding)
        result = self.minimal_presentation(module)
        result.cache["embedded_in_free"] = not any(modulo)
        return result

    # ---- 極小表現 ------------------------------------------------------

    def minimal_presentation(self, M: FPModule) -> FPModule:
        """消去單位元樞軸並選取極小關係；結果快取於 M.cache"""
        cached = M.cache.get("minimal")
        if cached is not None:
            return cached
        ring = M.ring
        p = ring.p
        zero = ring.ambient.zero_monomial
        twists = list(M.generator_twists)
        keep = list(range(len(twists)))
        columns = [self.groebner.reduce_mod_ideal(v, ring) for v in M.relation_vectors()]
        columns = [v for v in columns if v]

        while True:
            pivot = self._find_unit_pivot(columns)
            if pivot is None:
                break
            j, row = pivot
            col_j = columns[j]
            inv = pow(col_j[(row, zero)], p - 2, p)
            updated: List[Vector] = []
            for l, col in enumerate(columns):
                if l == j:
                    continue
                factor = {(0, mon): (-c * inv) % p for (comp, mon), c in col.items() if comp == row}
                if factor:
                    col = add_vectors(col, combine([col_j], factor, p), p)
                col = {
                    (comp - 1 if comp > row else comp, mon): c for (comp, mon), c in col.items() if comp != row
                }
                col = self.groebner.reduce_mod_ideal(col, ring)
                if col:
                    updated.append(col)
            columns = updated
            del twists[row]
            del keep[row]

        if columns:
            chosen = self.groebner.minimal_generators(ring, columns, [], twists)
            columns = [columns[i] for i in chosen]
        columns.sort(key=lambda v: vector_degree(v, twists, ring.weights))

        embedding = None
        if M.embedding is not None:
            source_twists = tuple(M.embedding.source.twists[i] for i in keep)
            embedding = ModuleMap(
                FreeModule(ring, source_twists),
                M.embedding.target,
                tuple(tuple(row[i] for i in keep) for row in M.embedding.matrix),
            )
        result = self.presented(ring, columns, twists, M.name, embedding)
        result.cache["minimal"] = result
        result.cache["kept_generators"] = tuple(range(len(keep)))
        if M.cache.get("embedded_in_free"):
            result.cache["embedded_in_free"] = True
        M.cache["minimal"] = result
        M.cache["kept_generators"] = tuple(keep)
        logger.debug("[Presentation] %s: %d → %d 個生成元", M.name, M.num_generators, len(keep))
        return result

    @staticmethod
    def _find_unit_pivot(columns: Sequence[Vector]) -> Optional[Tuple[int, int]]:
        for j, col in enumerate(columns):
            for (comp, mon), c in col.items():
                if not any(mon):
                    return j, comp
        return None

    # ---- 合衝與自由分解 ------------------------------------------------

    def syzygy(self, f: ModuleMap) -> ModuleMap:
        """ker f 的極小生成元，作為 F' → f.source 的映射"""
        ring = f.ring
        columns = [self.groebner.reduce_mod_ideal(v, ring) for v in f.column_vectors()]
        kernel = self.groebner.syzygies_modulo(ring, columns, [], f.target.twists, f.source.twists)
        if kernel:
            chosen = self.groebner.minimal_generators(ring, kernel, [], f.source.twists)
            kernel = [kernel[i] for i in chosen]
        kernel.sort(key=lambda v: vector_degree(v, f.source.twists, ring.weights))
        twists = [vector_degree(v, f.source.twists, ring.weights) for v in kernel]
        return ModuleMap(FreeModule(ring, twists), f.source, vectors_to_matrix(kernel, f.source.rank, ring))

    def default_resolution_length(self, ring: QuotientRing) -> int:
        depth = ring.depth_t if ring.depth_t is not None else max(ring.dim, 0)
        return depth + self.config.resolution_extra

    def resolution(self, M: FPModule, length: Optional[int] = None) -> Resolution:
        """長度 length 的極小自由分解；部分結果快取於 M.cache"""
        if length is None:
            length = self.default_resolution_length(M.ring)
        if length < 0:
            raise ValidationError("分解長度必須非負", "bad_length")
        minimal = self.minimal_presentation(M)
        maps: List[ModuleMap] = list(minimal.cache.get("resolution_maps", []))
        if not maps and length >= 1:
            maps.append(minimal.presentation)
        while len(maps) < length and maps[-1].source.rank > 0:
            maps.append(self.syzygy(maps[-1]))
            logger.debug("[Resolution] %s: F_%d 秩 %d", M.name, len(maps), maps[-1].source.rank)
        if len(maps) > len(minimal.cache.get("resolution_maps", [])):
            minimal.cache["resolution_maps"] = list(maps)
        return Resolution(minimal, maps[:length], minimal=True)

    def betti_numbers(self, M: FPModule, length: int) -> List[int]:
        betti = self.resolution(M, length).betti_numbers
        return betti + [0] * (length + 1 - len(betti))

    def syzygy_module(self, M: FPModule, i: int) -> FPModule:
        """Ω^i(M)，embedding 為 d_i: F_i → F_{i-1}"""
        if i == 0:
            return self.minimal_presentation(M)
        res = self.resolution(M, i + 1)
        d_i = res.differential(i)
        if d_i is None or d_i.source.rank == 0:
            return self.zero_module(M.ring)
        d_next = res.differential(i + 1)
        relations = d_next.column_vectors() if d_next is not None else []
        label = f"Ω^{i}({M.name or 'M'})" if i > 1 else f"Ω({M.name or 'M'})"
        module = self.presented(M.ring, relations, d_i.source.twists, label, d_i)
        module.cache["minimal"] = module
        module.cache["embedded_in_free"] = True
        return module

    # ---- 映射 ----------------------------------------------------------

    def homomorphism(
        self, source: FPModule, target: FPModule, matrix: Sequence[Sequence[Polynomial]], degree: int = 0
    ) -> ModuleHomomorphism:
        f = ModuleHomomorphism(source, target, tuple(tuple(row) for row in matrix), degree)
        f.validate_degrees()
        self.check_compatible(f)
        return f

    def check_compatible(self, f: ModuleHomomorphism) -> None:
        """f∘pres_source 必須落在 pres_target 的像中"""
        columns = f.column_vectors()
        p = f.ring.p
        for k, relation in enumerate(f.source.relation_vectors()):
            image = combine(columns, relation, p)
            if image and self.groebner.module_normal_form(image, f.target):
                raise IncompatibleMapError(f"第 {k + 1} 個關係的像不在目標的關係中", k)

    def kernel_of_map(self, f: ModuleHomomorphism, name: Optional[str] = None) -> FPModule:
        self.check_compatible(f)
        M, N = f.source, f.target
        ring = M.ring
        columns = [self.groebner.reduce_mod_ideal(v, ring) for v in f.column_vectors()]
        shifted = tuple(t + f.degree for t in M.generator_twists)
        kernel = self.groebner.syzygies_modulo(
            ring, columns, N.relation_vectors(), N.generator_twists, shifted
        )
        return self.subquotient(ring, kernel, M.relation_vectors(), M.generator_twists, name)

    def image_of_map(self, f: ModuleHomomorphism, name: Optional[str] = None) -> FPModule:
        self.check_compatible(f)
        N = f.target
        return self.subquotient(N.ring, f.column_vectors(), N.relation_vectors(), N.generator_twists, name)

    def cokernel_of_map(self, f: ModuleHomomorphism, name: Optional[str] = None) -> FPModule:
        self.check_compatible(f)
        N = f.target
        module = self.presented(N.ring, N.relation_vectors() + f.column_vectors(), N.generator_twists, name)
        return self.minimal_presentation(module)

    def multiplication_map(self, M: FPModule, f: Polynomial) -> ModuleHomomorphism:
        degree = f.homogeneous_degree
        if degree is None:
            raise ValidationError(f"{f} 不是非零齊次元素", "inhomogeneous_element")
        n = M.num_generators
        zero = M.ring.zero()
        matrix = tuple(tuple(f if i == j else zero for j in range(n)) for i in range(n))
        return ModuleHomomorphism(M, M, matrix, degree)

    def is_regular_on(self, M: FPModule, f: Polynomial) -> bool:
        """f 在 M 上的乘法是否單射"""
        if f.homogeneous_degree == 0:
            raise ValidationError("正則元素的次數必須為正", "degree_zero_element")
        f = self.groebner.normal_form(f, M.ring)
        if f.is_zero():
            return self.is_zero(M)
        if f.homogeneous_degree is None:
            raise ValidationError(f"{f} 不是齊次元素", "inhomogeneous_element")
        if f.homogeneous_degree <= 0:
            raise ValidationError("正則元素的次數必須為正", "degree_zero_element")
        if self.is_zero(M):
            return True
        return self.is_zero(self.kernel_of_map(self.multiplication_map(M, f)))

    # ---- 基變換與截斷 --------------------------------------------------

    def quotient_ring(self, ring: QuotientRing, forms: Sequence[Polynomial]) -> QuotientRing:
        """R/(forms)；快取於 ring.cache"""
        key = ("cut", tuple(forms))
        cached = ring.cache.get(key)
        if cached is None:
            cached = self.groebner.make_quotient_ring(ring.ambient, list(ring.ideal_gens) + list(forms))
            ring.cache[key] = cached
        return cached

    def base_change(self, M: FPModule, ring: QuotientRing) -> FPModule:
        """M ⊗_R R'，R' 為同一多項式環的商"""
        if ring.ambient != M.ring.ambient:
            raise ValidationError("基變換的環必須共用同一個多項式環", "ring_mismatch")
        return self.presented(ring, M.relation_vectors(), M.generator_twists, M.name)

    def mod_out(self, M: FPModule, forms: Sequence[Polynomial]) -> FPModule:
        """M/(forms)M，仍視為 R 上的模組"""
        relations = list(M.relation_vectors())
        for f in forms:
            f = self.groebner.normal_form(f, M.ring)
            for i in range(M.num_generators):
                vec = {(i, mon): c for mon, c in f.terms.items()}
                if vec:
                    relations.append(vec)
        return self.presented(M.ring, relations, M.generator_twists, M.name)

    def cut_down(self, M: FPModule, f: Polynomial) -> FPModule:
        """M/fM 作為 R/(f) 上的模組；f 必須在 M 上正則"""
        if not self.is_regular_on(M, f):
            raise NotRegularError(f"{f} 不是 {M.name or 'M'} 上的正則元素")
        return self.base_change(M, self.quotient_ring(M.ring, [f]))

    # ---- 不變量 --------------------------------------------------------

    def mu(self, M: FPModule) -> int:
        return self.minimal_presentation(M).num_generators

    def is_zero(self, M: FPModule) -> bool:
        return self.mu(M) == 0

    def is_free(self, M: FPModule) -> bool:
        return self.minimal_presentation(M).num_relations == 0

    def krull_dim(self, M: FPModule) -> int:
        return self.groebner.krull_dim_of(self.groebner.module_basis(M), M.ring.n)

    def is_finite_length(self, M: FPModule) -> bool:
        return self.krull_dim(M) <= 0

    def length(self, M: FPModule) -> int:
        if not self.is_finite_length(M):
            raise InfiniteLengthError(f"{M.name or 'M'} 不是有限長度")
        return len(self.groebner.standard_terms(self.groebner.module_basis(M), M.ring.n))

    def hilbert_function(self, M: FPModule, degree: int) -> int:
        return self.groebner.hilbert_value(self.groebner.module_basis(M), M.ring.weights, degree)

    def hilbert_prefix(self, M: FPModule, upto: int, start: Optional[int] = None) -> List[int]:
        if start is None:
            start = min(M.generator_twists) if M.num_generators else 0
        return [self.hilbert_function(M, d) for d in range(start, upto + 1)]

    # ---- 隨機化表現 ----------------------------------------------------

    def randomize_presentation(self, M: FPModule, rng: np.random.Generator) -> FPModule:
        """同構的另一個表現：生成元與關係的隨機可逆變換，外加冗餘生成元與冗餘關係"""
        ring = M.ring
        p = ring.p
        twists = list(M.generator_twists)
        n = len(twists)
        columns = [self.groebner.reduce_mod_ideal(v, ring) for v in M.relation_vectors()]
        columns = [v for v in columns if v]

        # 同次數生成元之間的常數可逆變換
        blocks: Dict[int, List[int]] = {}
        for i, t in enumerate(twists):
            blocks.setdefault(t, []).append(i)
        change = np.eye(n, dtype=np.int64)
        for indices in blocks.values():
            change[np.ix_(indices, indices)] = self._random_invertible(len(indices), p, rng)
        changed: List[Vector] = []
        for col in columns:
            new: Vector = {}
            for (comp, mon), c in col.items():
                for row in range(n):
                    coeff = int(change[row, comp])
                    if coeff:
                        new = add_vectors(new, {(row, mon): c * coeff % p}, p)
            changed.append(new)
        columns = changed

        images: Optional[List[Vector]] = None
        if M.embedding is not None and n:
            inv = inverse_mod(change, p)
            old = M.embedding.column_vectors()
            images = []
            for row in range(n):
                coefficients = {(i, ring.ambient.zero_monomial): int(inv[i, row]) for i in range(n) if inv[i, row]}
                images.append(combine(old, coefficients, p))

        # 關係之間加上隨機的高次組合
        rel_twists = [vector_degree(v, twists, ring.weights) for v in columns]
        mixed: List[Vector] = []
        for l, col in enumerate(columns):
            for j, other in enumerate(columns):
                if j == l or rel_twists[j] > rel_twists[l]:
                    continue
                if rel_twists[j] == rel_twists[l] and j > l:
                    continue
                form = self.groebner.random_form(ring, rel_twists[l] - rel_twists[j], rng)
                if form.is_zero():
                    continue
                factor = {(0, mon): c for mon, c in form.terms.items()}
                col = add_vectors(col, combine([other], factor, p), p)
            mixed.append(self.groebner.reduce_mod_ideal(col, ring))
        columns = [v for v in mixed if v]

        # 冗餘關係
        if columns:
            j = int(rng.integers(0, len(columns)))
            form = self.groebner.random_form(ring, ring.weights[0], rng)
            if not form.is_zero():
                factor = {(0, mon): c for mon, c in form.terms.items()}
                columns.append(combine([columns[j]], factor, p))

        # 冗餘生成元 e_n = Σ h_i e_i
        if n:
            anchor = int(rng.integers(0, n))
            new_twist = twists[anchor] + ring.weights[0]
            relation: Vector = {(n, ring.ambient.zero_monomial): p - 1}
            for i, t in enumerate(twists):
                form = self.groebner.random_form(ring, new_twist - t, rng)
                for mon, c in form.terms.items():
                    relation[(i, mon)] = c
            if images is not None:
                coefficients = {(i, mon): c for (i, mon), c in relation.items() if i < n}
                images.append(self.groebner.reduce_mod_ideal(combine(images, coefficients, p), ring))
            columns.append(relation)
            twists.append(new_twist)

        embedding = None
        if images is not None:
            embedding = ModuleMap(
                FreeModule(ring, tuple(twists)),
                M.embedding.target,
                vectors_to_matrix(images, M.embedding.target.rank, ring),
            )
        result = self.presented(ring, columns, twists, M.name, embedding)
        if M.cache.get("embedded_in_free"):
            result.cache["embedded_in_free"] = True
        logger.debug("[Presentation] 隨機化 %s: %d 個生成元、%d 個關係", M.name, result.num_generators, result.num_relations)
        return result

    @staticmethod
    def _random_invertible(size: int, p: int, rng: np.random.Generator) -> np.ndarray:
        for _ in range(64):
            candidate = rng.integers(0, p, size=(size, size), dtype=np.int64)
            if is_invertible_mod(candidate, p):
                return candidate
        return np.eye(size, dtype=np.int64)

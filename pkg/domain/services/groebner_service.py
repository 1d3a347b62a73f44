"""
Gröbner 基計算服務
齊次、逐次數處理的 Buchberger 演算法；理想 (秩 1) 與子模組共用同一套核心
"""
import logging
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from config.settings import EngineConfig
from domain.models.module import FPModule, Term, Vector
from domain.models.polynomial import (
    Monomial,
    Polynomial,
    PolynomialRing,
    monomial_degree,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
    monomials_of_weighted_degree,
    revlex_part,
)
from domain.models.quotient_ring import QuotientRing
from shared.exceptions import InfiniteLengthError, ValidationError

logger = logging.getLogger(__name__)


class TermOrder:
    """自由模組上的項序

    position="top"：先比次數與單項式，再比分量；"pot"：先比分量。
    block=r 時，分量 < r 的項一律大於分量 ≥ r 的項（消去序）；
    induced 給出下區塊第 j 個分量的 Schreyer 首項 (分量, 單項式)。
    """

    def __init__(
        self,
        weights: Sequence[int],
        twists: Sequence[int],
        position: str = "top",
        block: Optional[int] = None,
        induced: Optional[Dict[int, Term]] = None,
    ):
        self.weights = tuple(weights)
        self.twists = tuple(twists)
        self.position = position
        self.block = block
        self.induced = dict(induced or {})
        self._memo: Dict[Term, Tuple] = {}

    @property
    def rank(self) -> int:
        return len(self.twists)

    def term_degree(self, term: Term) -> int:
        comp, mon = term
        return monomial_degree(mon, self.weights) + self.twists[comp]

    def key(self, term: Term) -> Tuple:
        cached = self._memo.get(term)
        if cached is not None:
            return cached
        comp, mon = term
        degree = monomial_degree(mon, self.weights) + self.twists[comp]
        if self.block is not None and comp >= self.block:
            j = comp - self.block
            lead = self.induced.get(j)
            if lead is not None:
                effective_mon, effective_comp = monomial_mul(mon, lead[1]), lead[0]
            else:
                effective_mon, effective_comp = mon, comp
            result = (0, degree, revlex_part(effective_mon, self.weights), -effective_comp, -j)
        elif self.position == "pot":
            result = (1, -comp, degree, revlex_part(mon, self.weights), 0)
        else:
            result = (1, degree, revlex_part(mon, self.weights), -comp, 0)
        self._memo[term] = result
        return result

    def vector_degree(self, vec: Vector) -> int:
        for term in vec:
            return self.term_degree(term)
        raise ValidationError("零向量沒有次數", "zero_vector")

    def leading_term(self, vec: Vector) -> Term:
        return max(vec, key=self.key)


class GBElement:
    __slots__ = ("index", "vec", "lead", "degree")

    def __init__(self, index: int, vec: Vector, lead: Term, degree: int):
        self.index = index
        self.vec = vec
        self.lead = lead
        self.degree = degree


class SubmoduleBasis:
    """已計算的（截斷）Gröbner 基，附帶按分量分組的首項索引"""

    def __init__(self, order: TermOrder, p: int):
        self.order = order
        self.p = p
        self.elements: List[GBElement] = []
        self._by_component: Dict[int, List[GBElement]] = {}

    def __len__(self) -> int:
        return len(self.elements)

    def add(self, vec: Vector) -> GBElement:
        lead = self.order.leading_term(vec)
        inv = pow(vec[lead], self.p - 2, self.p)
        if inv != 1:
            vec = {t: (c * inv) % self.p for t, c in vec.items()}
        elem = GBElement(len(self.elements), vec, lead, self.order.term_degree(lead))
        self.elements.append(elem)
        self._by_component.setdefault(lead[0], []).append(elem)
        return elem

    def component_elements(self, comp: int) -> List[GBElement]:
        return self._by_component.get(comp, [])

    def find_divisor(self, term: Term) -> Optional[GBElement]:
        comp, mon = term
        for elem in self._by_component.get(comp, ()):
            if monomial_divides(elem.lead[1], mon):
                return elem
        return None

    def reduce(self, vec: Vector) -> Vector:
        """完全約化；回傳正規形"""
        p = self.p
        key = self.order.key
        f = dict(vec)
        remainder: Vector = {}
        while f:
            term = max(f, key=key)
            c = f[term]
            elem = self.find_divisor(term)
            if elem is None:
                remainder[term] = c
                del f[term]
                continue
            q = monomial_div(term[1], elem.lead[1])
            for (ec, em), ev in elem.vec.items():
                nt = (ec, monomial_mul(em, q))
                nv = (f.get(nt, 0) - c * ev) % p
                if nv:
                    f[nt] = nv
                else:
                    f.pop(nt, None)
        return remainder

    def leading_monomials(self, comp: int) -> List[Monomial]:
        mons = [e.lead[1] for e in self._by_component.get(comp, ())]
        return minimalize_monomials(mons)

    def interreduce(self) -> None:
        """把每個元素的尾項對其餘元素約化（首項集合已極小）"""
        for elem in self.elements:
            lead_coeff = elem.vec[elem.lead]
            tail = {t: c for t, c in elem.vec.items() if t != elem.lead}
            reduced = self.reduce(tail) if tail else {}
            reduced[elem.lead] = lead_coeff
            elem.vec = reduced


def minimalize_monomials(mons: Iterable[Monomial]) -> List[Monomial]:
    """單項式理想的極小生成元"""
    unique = sorted(set(mons), key=lambda m: (sum(m), m))
    result: List[Monomial] = []
    for mon in unique:
        if not any(monomial_divides(other, mon) for other in result):
            result.append(mon)
    return result


def monomial_ideal_dim(mons: Sequence[Monomial], n: int) -> int:
    """S/J 的 Krull 維數；J = (1) 時為 -1"""
    if any(not any(m) for m in mons):
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in mons]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            chosen = frozenset(subset)
            if not any(s <= chosen for s in supports):
                return size
    return -1


def vector_to_polynomial(vec: Vector, ambient: PolynomialRing, comp: int = 0) -> Polynomial:
    return Polynomial.from_clean_terms(ambient, {mon: c for (k, mon), c in vec.items() if k == comp})


def polynomial_to_vector(poly: Polynomial, comp: int = 0) -> Vector:
    return {(comp, mon): c for mon, c in poly.terms.items()}


class GroebnerService:
    """Buchberger 核心、正規形、Hilbert 函數與 Krull 維數"""

    def __init__(self, config: EngineConfig):
        self.config = config

    # ---- Buchberger 核心 ----------------------------------------------

    def buchberger(
        self,
        inputs: Sequence[Tuple[Vector, bool]],
        order: TermOrder,
        p: int,
        product_criterion: bool = False,
    ) -> Tuple[SubmoduleBasis, List[bool]]:
        """逐次數計算 Gröbner 基

        inputs 的第二個欄位為 True 表示背景生成元（不參與極小性判定）。
        同一次數內依序處理：S-對、背景生成元、真實生成元；
        真實生成元約化後非零者即為極小生成元。
        """
        basis = SubmoduleBasis(order, p)
        minimal = [False] * len(inputs)
        by_degree: Dict[int, List[Tuple[int, Vector, bool]]] = {}
        for idx, (vec, background) in enumerate(inputs):
            if vec:
                by_degree.setdefault(order.vector_degree(vec), []).append((idx, vec, background))
        pairs: Dict[int, List[Tuple[int, int]]] = {}
        processed: set = set()

        while by_degree or pairs:
            degree = min(list(by_degree) + list(pairs))
            for i, j in sorted(pairs.pop(degree, [])):
                if self._chain_criterion(basis, i, j, processed):
                    processed.add((i, j))
                    continue
                processed.add((i, j))
                remainder = basis.reduce(self._s_vector(basis.elements[i], basis.elements[j], p))
                if remainder:
                    self._insert(basis, remainder, pairs, product_criterion)
            items = by_degree.pop(degree, [])
            items.sort(key=lambda item: (not item[2], item[0]))
            for idx, vec, background in items:
                remainder = basis.reduce(vec)
                if remainder:
                    self._insert(basis, remainder, pairs, product_criterion)
                    if not background:
                        minimal[idx] = True
        logger.debug("[GB] 完成，基底大小 %d", len(basis))
        return basis, minimal

    def _insert(
        self,
        basis: SubmoduleBasis,
        vec: Vector,
        pairs: Dict[int, List[Tuple[int, int]]],
        product_criterion: bool,
    ) -> GBElement:
        existing = list(basis.component_elements(basis.order.leading_term(vec)[0]))
        elem = basis.add(vec)
        comp, mon = elem.lead
        for other in existing:
            if product_criterion and all(a == 0 or b == 0 for a, b in zip(mon, other.lead[1])):
                continue
            lcm = monomial_lcm(mon, other.lead[1])
            degree = basis.order.term_degree((comp, lcm))
            pairs.setdefault(degree, []).append((other.index, elem.index))
        return elem

    @staticmethod
    def _chain_criterion(basis: SubmoduleBasis, i: int, j: int, processed: set) -> bool:
        a, b = basis.elements[i], basis.elements[j]
        lcm = monomial_lcm(a.lead[1], b.lead[1])
        for k_elem in basis.component_elements(a.lead[0]):
            k = k_elem.index
            if k in (i, j) or not monomial_divides(k_elem.lead[1], lcm):
                continue
            if (min(i, k), max(i, k)) in processed and (min(j, k), max(j, k)) in processed:
                return True
        return False

    @staticmethod
    def _s_vector(a: GBElement, b: GBElement, p: int) -> Vector:
        lcm = monomial_lcm(a.lead[1], b.lead[1])
        qa = monomial_div(lcm, a.lead[1])
        qb = monomial_div(lcm, b.lead[1])
        result: Vector = {}
        for (c, m), v in a.vec.items():
            result[(c, monomial_mul(m, qa))] = v
        for (c, m), v in b.vec.items():
            term = (c, monomial_mul(m, qb))
            value = (result.get(term, 0) - v) % p
            if value:
                result[term] = value
            else:
                result.pop(term, None)
        return result

    # ---- 理想與商環 ----------------------------------------------------

    def groebner_basis(self, gens: Sequence[Polynomial]) -> List[Polynomial]:
        """齊次生成元的約化 Gröbner 基（帶權分次反字典序）"""
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            return []
        ambient = gens[0].ring
        for g in gens:
            if not g.is_homogeneous():
                raise ValidationError(f"生成元 {g} 不是齊次多項式", "inhomogeneous_generator")
        order = TermOrder(ambient.weights, (0,))
        basis, _ = self.buchberger(
            [(polynomial_to_vector(g), True) for g in gens], order, ambient.p, product_criterion=True
        )
        basis.interreduce()
        polys = [vector_to_polynomial(e.vec, ambient) for e in basis.elements]
        polys.sort(key=lambda f: ambient.order.key(f.leading_term()[0]), reverse=True)
        return polys

    def make_quotient_ring(
        self, ambient: PolynomialRing, gens: Sequence[Polynomial], name: Optional[str] = None
    ) -> QuotientRing:
        gens = [g for g in gens if not g.is_zero()]
        gb = self.groebner_basis(gens)
        if any(g.is_constant() for g in gb):
            raise ValidationError("理想為單位理想，商環為零環", "unit_ideal")
        leads = [g.leading_term()[0] for g in gb]
        dim = monomial_ideal_dim(minimalize_monomials(leads), ambient.n)
        ring = QuotientRing(ambient, gens, gb, dim, name)
        logger.debug("[GB] 建立商環 %s，維數 %d", ring.describe(), dim)
        return ring

    def ring_basis(self, ring: QuotientRing) -> SubmoduleBasis:
        basis = ring.cache.get("gb_basis")
        if basis is None:
            basis = SubmoduleBasis(TermOrder(ring.weights, (0,)), ring.p)
            for g in ring.gb:
                basis.add(polynomial_to_vector(g))
            ring.cache["gb_basis"] = basis
        return basis

    def normal_form(self, f: Polynomial, ring: QuotientRing) -> Polynomial:
        """f 在 R 中的標準代表元；f ∈ I 時為 0"""
        if not ring.gb or f.is_zero():
            return f
        remainder = self.ring_basis(ring).reduce(polynomial_to_vector(f))
        return vector_to_polynomial(remainder, ring.ambient)

    def random_form(self, ring: QuotientRing, degree: int, rng) -> Polynomial:
        """R 中隨機的 degree 次齊次元素（已化為正規形）；rng 為 numpy Generator"""
        mons = list(monomials_of_weighted_degree(ring.weights, degree))
        if not mons:
            return ring.zero()
        coeffs = rng.integers(0, ring.p, size=len(mons))
        poly = Polynomial(ring.ambient, {m: int(c) for m, c in zip(mons, coeffs)})
        return self.normal_form(poly, ring)

    def reduce_mod_ideal(self, vec: Vector, ring: QuotientRing) -> Vector:
        """逐分量以環的 Gröbner 基約化"""
        if not ring.gb or not vec:
            return dict(vec)
        basis = self.ring_basis(ring)
        by_comp: Dict[int, Vector] = {}
        for (comp, mon), c in vec.items():
            by_comp.setdefault(comp, {})[(0, mon)] = c
        result: Vector = {}
        for comp, part in by_comp.items():
            for (_, mon), c in basis.reduce(part).items():
                result[(comp, mon)] = c
        return result

    def ideal_vectors(self, ring: QuotientRing, components: Iterable[int]) -> List[Vector]:
        """I·e_i 的生成向量"""
        vectors = []
        for comp in components:
            for g in ring.gb:
                vectors.append(polynomial_to_vector(g, comp))
        return vectors

    # ---- 子模組 --------------------------------------------------------

    def submodule_basis(
        self,
        ring: QuotientRing,
        twists: Sequence[int],
        generators: Sequence[Vector],
        position: str = "top",
    ) -> SubmoduleBasis:
        """span(generators) + I·F 的 Gröbner 基"""
        order = TermOrder(ring.weights, twists, position=position)
        inputs = [(v, True) for v in self.ideal_vectors(ring, range(len(twists)))]
        inputs += [(v, True) for v in generators if v]
        basis, _ = self.buchberger(inputs, order, ring.p, product_criterion=len(twists) == 1)
        return basis

    def module_basis(self, M: FPModule) -> SubmoduleBasis:
        basis = M.cache.get("gb")
        if basis is None:
            basis = self.submodule_basis(M.ring, M.generator_twists, M.relation_vectors())
            M.cache["gb"] = basis
        return basis

    def module_normal_form(self, vec: Vector, M: FPModule) -> Vector:
        return self.module_basis(M).reduce(vec)

    def syzygies_modulo(
        self,
        ring: QuotientRing,
        columns: Sequence[Vector],
        modulo: Sequence[Vector],
        target_twists: Sequence[int],
        source_twists: Sequence[int],
    ) -> List[Vector]:
        """{v ∈ R^m : Σ v_j col_j ∈ span(modulo) + I·F} 的生成元（以區塊消去序計算）"""
        r, m = len(target_twists), len(columns)
        if m == 0:
            return []
        twists = tuple(target_twists) + tuple(source_twists)
        top_order = TermOrder(ring.weights, target_twists)
        induced = {j: top_order.leading_term(col) for j, col in enumerate(columns) if col}
        order = TermOrder(ring.weights, twists, block=r, induced=induced)
        zero = ring.ambient.zero_monomial
        inputs: List[Tuple[Vector, bool]] = [(v, True) for v in self.ideal_vectors(ring, range(r))]
        inputs += [(v, True) for v in modulo if v]
        for j, col in enumerate(columns):
            stacked = dict(col)
            stacked[(r + j, zero)] = 1
            inputs.append((stacked, False))
        basis, _ = self.buchberger(inputs, order, ring.p)
        result: List[Vector] = []
        for elem in basis.elements:
            if elem.lead[0] < r:
                continue
            bottom = {(c - r, mon): v for (c, mon), v in elem.vec.items() if c >= r}
            bottom = self.reduce_mod_ideal(bottom, ring)
            if bottom:
                result.append(bottom)
        logger.debug("[Syz] %d 行、%d 個模關係 → %d 個合衝", m, len(modulo), len(result))
        return result

    def minimal_generators(
        self,
        ring: QuotientRing,
        vectors: Sequence[Vector],
        background: Sequence[Vector],
        twists: Sequence[int],
    ) -> List[int]:
        """在背景子模組之外，vectors 中構成極小生成集的下標"""
        order = TermOrder(ring.weights, twists)
        inputs: List[Tuple[Vector, bool]] = [(v, True) for v in self.ideal_vectors(ring, range(len(twists)))]
        inputs += [(v, True) for v in background if v]
        offset = len(inputs)
        inputs += [(v, False) for v in vectors]
        _, flags = self.buchberger(inputs, order, ring.p)
        return [i for i in range(len(vectors)) if flags[offset + i]]

    # ---- Hilbert 函數與維數 ----------------------------------------------

    def hilbert_value(self, basis: SubmoduleBasis, weights: Sequence[int], degree: int) -> int:
        """商模組 F/U 在某次數的維數（以標準項計數）"""
        total = 0
        for comp, twist in enumerate(basis.order.twists):
            leads = basis.leading_monomials(comp)
            for mon in monomials_of_weighted_degree(tuple(weights), degree - twist):
                if not any(monomial_divides(l, mon) for l in leads):
                    total += 1
        return total

    def krull_dim_of(self, basis: SubmoduleBasis, n: int) -> int:
        """F/U 的 Krull 維數；零模組為 -1"""
        best = -1
        for comp in range(basis.order.rank):
            best = max(best, monomial_ideal_dim(basis.leading_monomials(comp), n))
        return best

    def standard_terms(self, basis: SubmoduleBasis, n: int) -> List[Term]:
        """有限長度商模組的全部標準項，依 (次數, 分量, 單項式) 排序"""
        terms: List[Term] = []
        order = basis.order
        for comp in range(order.rank):
            leads = basis.leading_monomials(comp)
            dim = monomial_ideal_dim(leads, n)
            if dim < 0:
                continue
            if dim > 0:
                raise InfiniteLengthError("模組不是有限長度")
            zero = tuple(0 for _ in range(n))
            seen = {zero}
            frontier = [zero]
            while frontier:
                mon = frontier.pop()
                terms.append((comp, mon))
                for v in range(n):
                    nxt = tuple(e + (1 if i == v else 0) for i, e in enumerate(mon))
                    if nxt in seen or any(monomial_divides(l, nxt) for l in leads):
                        continue
                    seen.add(nxt)
                    frontier.append(nxt)
        terms.sort(key=lambda t: (order.term_degree(t), t[0], revlex_part(t[1], order.weights)))
        return terms


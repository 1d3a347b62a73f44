"""
判定器服務：以純線性代數處理有限長度模組
把 FPModule 實現為向量空間加上變數作用，獨立計算 Hom/Ext/socle，並枚舉小模組
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import CampaignConfig
from domain.models.lin_module import LinMap, LinModule
from domain.models.module import FPModule, Vector
from domain.models.polynomial import Monomial
from domain.models.quotient_ring import QuotientRing
from domain.services.groebner_service import GroebnerService
from domain.services.module_service import ModuleService
from infrastructure.linalg import matmul_mod, nullspace_mod, rank_mod, span_basis_mod
from shared.exceptions import ValidationError

logger = logging.getLogger(__name__)


@dataclass
class EnumerationResult:
    """enumerate_modules 的輸出；sampled 表示改用抽樣"""
    modules: List[LinModule] = field(default_factory=list)
    raw_tuples: int = 0
    valid_tuples: int = 0
    sampled: bool = False


class OracleService:
    """有限長度模組的線性代數判定器"""

    def __init__(self, groebner: GroebnerService, modules: ModuleService, config: CampaignConfig):
        self.groebner = groebner
        self.modules = modules
        self.config = config

    # ---- 實現與還原 ----------------------------------------------------

    def realize(self, M: FPModule) -> LinModule:
        """標準項為基底，變數作用以正規形計算"""
        cached = M.cache.get("lin")
        if cached is not None:
            return cached
        ring = M.ring
        basis = self.groebner.module_basis(M)
        terms = self.groebner.standard_terms(basis, ring.n)
        index = {term: k for k, term in enumerate(terms)}
        dim = len(terms)
        actions = []
        for v in range(ring.n):
            unit = ring.ambient.unit_exponent(v)
            A = np.zeros((dim, dim), dtype=np.int64)
            for k, (comp, mon) in enumerate(terms):
                image = basis.reduce({(comp, tuple(a + b for a, b in zip(mon, unit))): 1})
                for term, c in image.items():
                    A[index[term], k] = c
            actions.append(A)
        degrees = tuple(basis.order.term_degree(t) for t in terms)
        X = LinModule(ring, degrees, tuple(actions), M.name)
        X.cache["terms"] = terms
        X.cache["generators"] = self._coordinates(
            [{(i, ring.ambient.zero_monomial): 1} for i in range(M.num_generators)], basis, index
        )
        M.cache["lin"] = X
        logger.debug("[Oracle] 實現 %s: 維數 %d", M.name, dim)
        return X

    @staticmethod
    def _coordinates(vectors: Sequence[Vector], basis, index: Dict) -> np.ndarray:
        coords = np.zeros((len(index), len(vectors)), dtype=np.int64)
        for j, vec in enumerate(vectors):
            for term, c in basis.reduce(vec).items():
                coords[index[term], j] = c
        return coords

    def lin_to_fp(self, X: LinModule, name: Optional[str] = None) -> FPModule:
        """以 x_v e_k − Σ (A_v)_{lk} e_l 為關係的表現"""
        ring = X.ring
        relations: List[Vector] = []
        for v in range(ring.n):
            unit = ring.ambient.unit_exponent(v)
            zero = ring.ambient.zero_monomial
            A = X.actions[v]
            for k in range(X.dim):
                vec: Vector = {(k, unit): 1}
                for l in range(X.dim):
                    c = int(A[l, k])
                    if c:
                        vec[(l, zero)] = (-c) % X.p
                relations.append(vec)
        module = self.modules.presented(ring, relations, X.degrees, name or X.label)
        return self.modules.minimal_presentation(module)

    # ---- 基本不變量 ----------------------------------------------------

    @staticmethod
    def maximal_ideal_image(X: LinModule) -> np.ndarray:
        if X.dim == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return np.concatenate(X.actions, axis=1) if X.actions else np.zeros((X.dim, 0), dtype=np.int64)

    def lin_mu(self, X: LinModule) -> int:
        return X.dim - rank_mod(self.maximal_ideal_image(X), X.p)

    def lin_socle_dim(self, X: LinModule) -> int:
        if X.dim == 0:
            return 0
        if not X.actions:
            return X.dim
        stacked = np.concatenate(X.actions, axis=0)
        return X.dim - rank_mod(stacked, X.p)

    def lin_hilbert(self, X: LinModule) -> Dict[int, int]:
        return X.hilbert_function()

    def lin_matlis_dual(self, X: LinModule) -> LinModule:
        """次數取負、作用取轉置"""
        degrees = tuple(-d for d in X.degrees)
        actions = tuple(A.T.copy() for A in X.actions)
        label = f"{X.label}^v" if X.label else None
        return LinModule(X.ring, degrees, actions, label)

    def ring_monomials(self, ring: QuotientRing) -> List[Monomial]:
        """Artinian 環的標準單項式"""
        cached = ring.cache.get("standard_monomials")
        if cached is None:
            R = self.modules.ring_module(ring)
            cached = [mon for _, mon in self.groebner.standard_terms(self.groebner.module_basis(R), ring.n)]
            ring.cache["standard_monomials"] = cached
        return cached

    def monomial_action(self, X: LinModule, mon: Monomial, memo: Optional[Dict] = None) -> np.ndarray:
        if memo is not None and mon in memo:
            return memo[mon]
        result = np.eye(X.dim, dtype=np.int64)
        for v, e in enumerate(mon):
            for _ in range(e):
                result = matmul_mod(X.actions[v], result, X.p)
        if memo is not None:
            memo[mon] = result
        return result

    def fingerprint(self, X: LinModule) -> Tuple:
        """不看次數的不變量指紋：維數、μ、socle 維數與各單項式作用的秩"""
        ranks = []
        for mon in self.ring_monomials(X.ring):
            if any(mon):
                ranks.append(rank_mod(self.monomial_action(X, mon), X.p) if X.dim else 0)
        return (X.dim, self.lin_mu(X), self.lin_socle_dim(X), tuple(ranks))

    # ---- Hom 與 Ext ----------------------------------------------------

    def lin_hom(self, X: LinModule, Y: LinModule, degree: Optional[int] = None) -> List[LinMap]:
        """與所有變數作用交換的線性映射之基底；degree 給定時只取該次數"""
        p = X.p
        dx, dy = X.dim, Y.dim
        if dx == 0 or dy == 0:
            return []
        allowed = [
            r * dx + c
            for r in range(dy)
            for c in range(dx)
            if degree is None or Y.degrees[r] == X.degrees[c] + degree
        ]
        if not allowed:
            return []
        blocks = []
        eye_x = np.eye(dx, dtype=np.int64)
        eye_y = np.eye(dy, dtype=np.int64)
        for A, B in zip(X.actions, Y.actions):
            blocks.append((np.kron(eye_y, A.T) - np.kron(B, eye_x)) % p)
        if blocks:
            system = np.concatenate(blocks, axis=0)[:, allowed]
            null = nullspace_mod(system, p)
        else:
            null = np.eye(len(allowed), dtype=np.int64)
        maps = []
        for k in range(null.shape[1]):
            flat = np.zeros(dy * dx, dtype=np.int64)
            flat[allowed] = null[:, k]
            maps.append(LinMap(X, Y, flat.reshape(dy, dx), degree or 0))
        return maps

    def lin_resolution(self, X: LinModule, steps: int) -> List[np.ndarray]:
        """自由覆蓋的迭代：回傳每一步生成元（R^{s_{k-1}} 中的行向量矩陣，第 0 步在 X 中）"""
        ring = X.ring
        if not ring.is_artinian:
            raise ValidationError("判定器的 Ext 只支援 Artinian 環", "not_artinian")
        p = X.p
        basis_mons = self.ring_monomials(ring)
        ell = len(basis_mons)
        regular = self.realize(self.modules.ring_module(ring))
        reg_memo: Dict = {}
        reg_actions = [self.monomial_action(regular, mon, reg_memo) for mon in basis_mons]

        generators = self._choose_generators(X.dim, list(X.actions), np.eye(X.dim, dtype=np.int64), p)
        result = [generators]
        x_memo: Dict = {}
        x_actions = [self.monomial_action(X, mon, x_memo) for mon in basis_mons]
        cover = self._cover_matrix(generators, x_actions, X.dim, p)
        for _ in range(steps):
            kernel = nullspace_mod(cover, p) if cover.shape[1] else np.zeros((0, 0), dtype=np.int64)
            s = cover.shape[1] // ell if ell else 0
            if kernel.shape[1] == 0:
                result.append(np.zeros((s * ell, 0), dtype=np.int64))
                cover = np.zeros((s * ell, 0), dtype=np.int64)
                continue
            free_actions = [self._block_diagonal(A, s) for A in regular.actions]
            generators = self._choose_generators(s * ell, free_actions, kernel, p)
            result.append(generators)
            block_actions = [self._block_diagonal(A, s) for A in reg_actions]
            cover = self._cover_matrix(generators, block_actions, s * ell, p)
        return result

    @staticmethod
    def _block_diagonal(A: np.ndarray, copies: int) -> np.ndarray:
        return np.kron(np.eye(copies, dtype=np.int64), A)

    @staticmethod
    def _cover_matrix(generators: np.ndarray, actions: List[np.ndarray], dim: int, p: int) -> np.ndarray:
        """R^s → 空間：第 (j, b) 行是 b·g_j"""
        columns = []
        for j in range(generators.shape[1]):
            g = generators[:, j]
            for A in actions:
                columns.append(matmul_mod(A, g.reshape(-1, 1), p).reshape(-1))
        if not columns:
            return np.zeros((dim, 0), dtype=np.int64)
        return np.stack(columns, axis=1) % p

    @staticmethod
    def _choose_generators(dim: int, actions: List[np.ndarray], subspace: np.ndarray, p: int) -> np.ndarray:
        """子模組 K（以行向量給出）中補足 mK 的向量"""
        if subspace.shape[1] == 0 or dim == 0:
            return np.zeros((dim, 0), dtype=np.int64)
        images = [matmul_mod(A, subspace, p) for A in actions if A.size]
        current = np.concatenate(images, axis=1).T if images else np.zeros((0, dim), dtype=np.int64)
        current = span_basis_mod(current, p) if current.size else np.zeros((0, dim), dtype=np.int64)
        rank = current.shape[0]
        chosen = []
        for k in range(subspace.shape[1]):
            candidate = subspace[:, k].reshape(1, -1)
            stacked = np.concatenate([current, candidate], axis=0)
            new_rank = rank_mod(stacked, p)
            if new_rank > rank:
                chosen.append(subspace[:, k])
                current = stacked
                rank = new_rank
        if not chosen:
            return np.zeros((dim, 0), dtype=np.int64)
        return np.stack(chosen, axis=1) % p

    def _coboundary(self, generators: np.ndarray, Y: LinModule, y_actions: List[np.ndarray], previous: int) -> np.ndarray:
        """Y^{s_{k-1}} → Y^{s_k}：區塊 (j, k') = Σ_b h_j[(k', b)] · b(Y)"""
        p = Y.p
        ell = len(y_actions)
        dy = Y.dim
        s = generators.shape[1]
        D = np.zeros((s * dy, previous * dy), dtype=np.int64)
        for j in range(s):
            h = generators[:, j]
            for k in range(previous):
                block = np.zeros((dy, dy), dtype=np.int64)
                for b in range(ell):
                    c = int(h[k * ell + b])
                    if c:
                        block = (block + c * y_actions[b]) % p
                D[j * dy:(j + 1) * dy, k * dy:(k + 1) * dy] = block
        return D

    def lin_ext_dims(self, X: LinModule, Y: LinModule, upto: int) -> List[int]:
        """dim Ext^i(X, Y)，i = 0..upto"""
        p = X.p
        if X.dim == 0 or Y.dim == 0:
            return [0] * (upto + 1)
        resolution = self.lin_resolution(X, upto + 1)
        y_memo: Dict = {}
        y_actions = [self.monomial_action(Y, mon, y_memo) for mon in self.ring_monomials(X.ring)]
        ranks_of = []
        sizes = [resolution[0].shape[1]]
        for k in range(1, len(resolution)):
            D = self._coboundary(resolution[k], Y, y_actions, sizes[-1])
            ranks_of.append(rank_mod(D, p) if D.size else 0)
            sizes.append(resolution[k].shape[1])
        dims = []
        for i in range(upto + 1):
            total = sizes[i] * Y.dim
            nullity = total - ranks_of[i]
            previous_rank = ranks_of[i - 1] if i >= 1 else 0
            dims.append(nullity - previous_rank)
        return dims

    def lin_ext(self, X: LinModule, Y: LinModule, i: int) -> int:
        return self.lin_ext_dims(X, Y, i)[i]

    # ---- 模組枚舉 ------------------------------------------------------

    def _degree_vectors(self, dim: int, max_step: int) -> List[Tuple[int, ...]]:
        vectors = []
        for steps in itertools.product(range(max_step + 1), repeat=max(dim - 1, 0)):
            degrees = [0]
            for s in steps:
                degrees.append(degrees[-1] + s)
            vectors.append(tuple(degrees))
        return vectors

    def _allowed_entries(self, ring: QuotientRing, degrees: Tuple[int, ...]) -> List[Tuple[int, int, int]]:
        slots = []
        for v, w in enumerate(ring.weights):
            for r, dr in enumerate(degrees):
                for c, dc in enumerate(degrees):
                    if dr == dc + w:
                        slots.append((v, r, c))
        return slots

    def _build(self, ring: QuotientRing, degrees: Tuple[int, ...], slots, values) -> Optional[LinModule]:
        dim = len(degrees)
        actions = [np.zeros((dim, dim), dtype=np.int64) for _ in range(ring.n)]
        for (v, r, c), value in zip(slots, values):
            actions[v][r, c] = value
        X = LinModule(ring, degrees, tuple(actions))
        return X if self.is_valid_module(X) else None

    def is_valid_module(self, X: LinModule) -> bool:
        """作用兩兩交換且理想的 Gröbner 基作用為零"""
        p = X.p
        for a, b in itertools.combinations(X.actions, 2):
            if not np.array_equal(matmul_mod(a, b, p), matmul_mod(b, a, p)):
                return False
        memo: Dict = {}
        for g in X.ring.gb:
            total = np.zeros((X.dim, X.dim), dtype=np.int64)
            for mon, c in g.terms.items():
                total = (total + c * self.monomial_action(X, mon, memo)) % p
            if total.any():
                return False
        return True

    def enumerate_modules(
        self,
        ring: QuotientRing,
        max_dim: int,
        budget: Optional[int] = None,
        rng: Optional[np.random.Generator] = None,
    ) -> EnumerationResult:
        """所有交換且滿足環關係的分次作用組，以指紋去重；超出預算時改為抽樣"""
        if not ring.is_artinian:
            raise ValidationError("只能在 Artinian 環上枚舉模組", "not_artinian")
        budget = budget if budget is not None else self.config.enumeration_budget
        rng = rng if rng is not None else np.random.default_rng(0)
        p = ring.p
        max_step = max(ring.weights)
        plan = []
        for dim in range(1, max_dim + 1):
            for degrees in self._degree_vectors(dim, max_step):
                slots = self._allowed_entries(ring, degrees)
                plan.append((degrees, slots))
        total = sum(p ** len(slots) for _, slots in plan)
        result = EnumerationResult(sampled=total > budget)
        seen = set()
        share = max(1, budget // max(len(plan), 1))
        for degrees, slots in plan:
            if result.sampled and p ** len(slots) > share:
                candidates = (tuple(int(x) for x in rng.integers(0, p, size=len(slots))) for _ in range(share))
            else:
                candidates = itertools.product(range(p), repeat=len(slots))
            for values in candidates:
                result.raw_tuples += 1
                X = self._build(ring, degrees, slots, values)
                if X is None:
                    continue
                result.valid_tuples += 1
                key = self.fingerprint(X)
                if key in seen:
                    continue
                seen.add(key)
                X.label = f"X{len(result.modules)}"
                result.modules.append(X)
        logger.info(
            "[Oracle] 枚舉 %s (dim ≤ %d): %d 組原始作用、%d 個指紋%s",
            ring.describe(), max_dim, result.raw_tuples, len(result.modules), "（抽樣）" if result.sampled else "",
        )
        return result

    def random_module(
        self, ring: QuotientRing, max_dim: int, rng: np.random.Generator, tries: int = 64
    ) -> LinModule:
        """隨機的有限長度分次模組；找不到非平凡作用時退回 k^dim"""
        dim = int(rng.integers(1, max_dim + 1))
        vectors = self._degree_vectors(dim, max(ring.weights))
        for _ in range(tries):
            degrees = vectors[int(rng.integers(0, len(vectors)))]
            slots = self._allowed_entries(ring, degrees)
            values = tuple(int(x) for x in rng.integers(0, ring.p, size=len(slots)))
            X = self._build(ring, degrees, slots, values)
            if X is not None:
                return X
        zero = tuple(np.zeros((dim, dim), dtype=np.int64) for _ in range(ring.n))
        return LinModule(ring, tuple(0 for _ in range(dim)), zero)

"""
判定器一側的有限長度模組：有限維向量空間加上每個變數一個交換的冪零算子
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from domain.models.quotient_ring import QuotientRing
from infrastructure.linalg import rank_mod


@dataclass(eq=False)
class LinModule:
    """actions[v] 是變數 v 的作用矩陣 (dim × dim)，作用於行向量座標"""
    ring: QuotientRing
    degrees: Tuple[int, ...]
    actions: Tuple[np.ndarray, ...]
    label: Optional[str] = None
    cache: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.degrees = tuple(int(d) for d in self.degrees)
        self.actions = tuple(np.asarray(a, dtype=np.int64) % self.ring.p for a in self.actions)

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def p(self) -> int:
        return self.ring.p

    def hilbert_function(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for d in self.degrees:
            counts[d] = counts.get(d, 0) + 1
        return dict(sorted(counts.items()))

    def describe(self) -> str:
        label = self.label or "X"
        return f"{label}: dim {self.dim}, degrees {list(self.degrees)}"


@dataclass(eq=False)
class LinMap:
    """LinModule 之間保持次數（或固定平移）且與所有變數作用交換的線性映射"""
    source: LinModule
    target: LinModule
    matrix: np.ndarray
    shift: int = 0

    def commutes(self) -> bool:
        p = self.source.p
        for a_src, a_tgt in zip(self.source.actions, self.target.actions):
            if not np.array_equal((self.matrix @ a_src) % p, (a_tgt @ self.matrix) % p):
                return False
        return True

    def rank(self) -> int:
        return rank_mod(self.matrix, self.source.p)


def lin_zero(ring: QuotientRing) -> LinModule:
    return LinModule(ring, (), tuple(np.zeros((0, 0), dtype=np.int64) for _ in range(ring.n)), "0")


def lin_direct_sum(modules: List[LinModule]) -> LinModule:
    if not modules:
        raise ValueError("直和至少需要一個模組")
    ring = modules[0].ring
    degrees: List[int] = []
    for X in modules:
        degrees.extend(X.degrees)
    actions = []
    for v in range(ring.n):
        blocks = [X.actions[v] for X in modules]
        total = sum(b.shape[0] for b in blocks)
        A = np.zeros((total, total), dtype=np.int64)
        offset = 0
        for b in blocks:
            k = b.shape[0]
            A[offset:offset + k, offset:offset + k] = b
            offset += k
        actions.append(A)
    return LinModule(ring, tuple(degrees), tuple(actions), "+".join(X.label or "X" for X in modules))

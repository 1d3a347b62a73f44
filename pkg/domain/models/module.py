"""
有限表現分次模組的數據模型
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from domain.models.polynomial import Monomial, Polynomial
from domain.models.quotient_ring import QuotientRing
from shared.exceptions import ValidationError

# 自由模組中的向量：(分量, 單項式) → 係數
Term = Tuple[int, Monomial]
Vector = Dict[Term, int]


def column_to_vector(column: Sequence[Polynomial], offset: int = 0) -> Vector:
    vec: Vector = {}
    for i, entry in enumerate(column):
        for mon, c in entry.terms.items():
            vec[(i + offset, mon)] = c
    return vec


def vector_to_column(vec: Vector, rank: int, ring: QuotientRing, offset: int = 0) -> List[Polynomial]:
    buckets: List[Dict[Monomial, int]] = [dict() for _ in range(rank)]
    for (comp, mon), c in vec.items():
        buckets[comp - offset][mon] = c
    return [Polynomial.from_clean_terms(ring.ambient, b) for b in buckets]


def vector_degree(vec: Vector, twists: Sequence[int], weights: Sequence[int]) -> Optional[int]:
    for (comp, mon) in vec:
        return sum(e * w for e, w in zip(mon, weights)) + twists[comp]
    return None


@dataclass(eq=False)
class FreeModule:
    """帶扭轉的自由模組 ⊕ R(-t_i)；twists[i] 是第 i 個基底元素的次數"""
    ring: QuotientRing
    twists: Tuple[int, ...]

    def __post_init__(self):
        self.twists = tuple(int(t) for t in self.twists)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeModule) and other.ring == self.ring and other.twists == self.twists

    def __hash__(self) -> int:
        return hash((self.ring, self.twists))


@dataclass(eq=False)
class ModuleMap:
    """自由模組之間的齊次映射；matrix 為 target.rank × source.rank"""
    source: FreeModule
    target: FreeModule
    matrix: Tuple[Tuple[Polynomial, ...], ...]

    def __post_init__(self):
        self.matrix = tuple(tuple(row) for row in self.matrix)
        if len(self.matrix) != self.target.rank:
            raise ValidationError(
                f"矩陣列數 {len(self.matrix)} 與目標秩 {self.target.rank} 不符", "bad_matrix_shape"
            )
        for row in self.matrix:
            if len(row) != self.source.rank:
                raise ValidationError(
                    f"矩陣行數 {len(row)} 與來源秩 {self.source.rank} 不符", "bad_matrix_shape"
                )

    def validate_degrees(self) -> None:
        """每個非零項必須齊次且次數為 s_j - t_i"""
        for i, row in enumerate(self.matrix):
            for j, entry in enumerate(row):
                if entry.is_zero():
                    continue
                expected = self.source.twists[j] - self.target.twists[i]
                if entry.homogeneous_degree != expected:
                    raise ValidationError(
                        f"第 ({i + 1},{j + 1}) 項 {entry} 應為 {expected} 次齊次", "inhomogeneous_entry"
                    )

    @property
    def ring(self) -> QuotientRing:
        return self.target.ring

    def column(self, j: int) -> List[Polynomial]:
        return [row[j] for row in self.matrix]

    def column_vector(self, j: int) -> Vector:
        return column_to_vector(self.column(j))

    def column_vectors(self) -> List[Vector]:
        return [self.column_vector(j) for j in range(self.source.rank)]

    def entry(self, i: int, j: int) -> Polynomial:
        return self.matrix[i][j]

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self.matrix for entry in row)

    def to_strings(self) -> List[List[str]]:
        return [[str(entry) for entry in row] for row in self.matrix]


class FPModule:
    """M = coker(presentation)；值建構後不可變，cache 只做一次性填入"""

    def __init__(
        self,
        presentation: ModuleMap,
        name: Optional[str] = None,
        embedding: Optional[ModuleMap] = None,
    ):
        self.presentation = presentation
        self.name = name
        # 子商模組：embedding 把生成元送到環境自由模組中的代表向量
        self.embedding = embedding
        self.cache: Dict[Any, Any] = {}

    @property
    def ring(self) -> QuotientRing:
        return self.presentation.target.ring

    @property
    def generator_twists(self) -> Tuple[int, ...]:
        return self.presentation.target.twists

    @property
    def relation_twists(self) -> Tuple[int, ...]:
        return self.presentation.source.twists

    @property
    def num_generators(self) -> int:
        return self.presentation.target.rank

    @property
    def num_relations(self) -> int:
        return self.presentation.source.rank

    @property
    def cover(self) -> FreeModule:
        return self.presentation.target

    def relation_vectors(self) -> List[Vector]:
        return self.presentation.column_vectors()

    def describe(self) -> str:
        label = self.name or "M"
        return f"{label} = coker {self.num_generators}x{self.num_relations} over {self.ring.describe()}"

    def __repr__(self) -> str:
        return f"FPModule({self.describe()}, twists={self.generator_twists})"


@dataclass(eq=False)
class ModuleHomomorphism:
    """FPModule 之間的映射，以生成元上的矩陣給出（目標生成元數 × 來源生成元數）"""
    source: FPModule
    target: FPModule
    matrix: Tuple[Tuple[Polynomial, ...], ...]
    degree: int = 0

    def __post_init__(self):
        self.matrix = tuple(tuple(row) for row in self.matrix)
        if len(self.matrix) != self.target.num_generators or any(
            len(row) != self.source.num_generators for row in self.matrix
        ):
            raise ValidationError("映射矩陣形狀與生成元數不符", "bad_matrix_shape")

    @property
    def ring(self) -> QuotientRing:
        return self.source.ring

    def column(self, j: int) -> List[Polynomial]:
        return [row[j] for row in self.matrix]

    def column_vector(self, j: int) -> Vector:
        return column_to_vector(self.column(j))

    def column_vectors(self) -> List[Vector]:
        return [self.column_vector(j) for j in range(self.source.num_generators)]

    def validate_degrees(self) -> None:
        for k, row in enumerate(self.matrix):
            for j, entry in enumerate(row):
                if entry.is_zero():
                    continue
                expected = self.source.generator_twists[j] - self.target.generator_twists[k] + self.degree
                if entry.homogeneous_degree != expected:
                    raise ValidationError(
                        f"映射第 ({k + 1},{j + 1}) 項 {entry} 應為 {expected} 次齊次", "inhomogeneous_entry"
                    )


@dataclass
class Resolution:
    """自由分解 F_L → … → F_1 → F_0 → M；maps[i] 為 d_{i+1}: F_{i+1} → F_i"""
    module: FPModule
    maps: List[ModuleMap] = field(default_factory=list)
    minimal: bool = True

    @property
    def length(self) -> int:
        return len(self.maps)

    @property
    def free_modules(self) -> List[FreeModule]:
        if not self.maps:
            return [self.module.cover]
        return [self.maps[0].target] + [d.source for d in self.maps]

    @property
    def betti_numbers(self) -> List[int]:
        return [F.rank for F in self.free_modules]

    def differential(self, i: int) -> Optional[ModuleMap]:
        """d_i: F_i → F_{i-1}（i ≥ 1）；超出長度回傳 None"""
        if 1 <= i <= len(self.maps):
            return self.maps[i - 1]
        return None

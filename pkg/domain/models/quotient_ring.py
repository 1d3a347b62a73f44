"""
商環數據模型：R = F_p[x_1..x_n] / I，I 為齊次理想
"""
from typing import Any, Dict, List, Optional, Sequence, Tuple

from domain.models.polynomial import Monomial, Polynomial, PolynomialRing


class QuotientRing:
    """分次商環；Gröbner 基與 Krull 維數由 GroebnerService 計算後傳入"""

    def __init__(
        self,
        ambient: PolynomialRing,
        ideal_gens: Sequence[Polynomial],
        gb: Sequence[Polynomial],
        dim: int,
        name: Optional[str] = None,
    ):
        self.ambient = ambient
        self.ideal_gens: Tuple[Polynomial, ...] = tuple(g for g in ideal_gens if not g.is_zero())
        self.gb: Tuple[Polynomial, ...] = tuple(gb)
        self.dim = dim
        self.name = name
        self.leading_monomials: Tuple[Monomial, ...] = tuple(g.leading_term()[0] for g in self.gb)
        # 一次填入的快取（depth、殘餘域、標準單項式等）
        self.cache: Dict[Any, Any] = {}

    # ---- 基本屬性 ------------------------------------------------------

    @property
    def p(self) -> int:
        return self.ambient.p

    @property
    def n(self) -> int:
        return self.ambient.n

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.ambient.weights

    @property
    def names(self) -> Tuple[str, ...]:
        return self.ambient.names

    @property
    def is_artinian(self) -> bool:
        return self.dim == 0

    @property
    def is_polynomial_ring(self) -> bool:
        return not self.gb

    @property
    def depth_t(self) -> Optional[int]:
        """環的 depth；尚未計算時為 None（由 HomologyService.ring_depth 填入）"""
        return self.cache.get("depth")

    # ---- 便利建構 ------------------------------------------------------

    def zero(self) -> Polynomial:
        return self.ambient.zero()

    def one(self) -> Polynomial:
        return self.ambient.one()

    def variable(self, name) -> Polynomial:
        return self.ambient.variable(name)

    @property
    def gens(self) -> List[Polynomial]:
        return self.ambient.gens

    def parse(self, text: str) -> Polynomial:
        return self.ambient.parse(text)

    # ---- 比較與輸出 ----------------------------------------------------

    def signature(self) -> Tuple:
        gb_key = tuple(sorted(tuple(sorted(g.terms.items())) for g in self.gb))
        return (self.ambient.signature(), gb_key)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuotientRing) and other.signature() == self.signature()

    def __hash__(self) -> int:
        return hash(self.signature())

    def describe(self) -> str:
        base = self.ambient.describe()
        if not self.ideal_gens:
            return base
        return base + "/(" + ", ".join(str(g) for g in self.ideal_gens) + ")"

    def __repr__(self) -> str:
        label = f"{self.name}=" if self.name else ""
        return f"QuotientRing({label}{self.describe()})"

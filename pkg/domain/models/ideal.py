"""
理想與不變量記錄的數據模型
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from domain.models.polynomial import Polynomial
from domain.models.quotient_ring import QuotientRing


@dataclass(eq=False)
class Ideal:
    """R 中的齊次理想；generators 已化為正規形且非零"""
    ring: QuotientRing
    generators: Tuple[Polynomial, ...]
    cache: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.generators = tuple(g for g in self.generators if not g.is_zero())

    def is_zero(self) -> bool:
        return not self.generators

    def describe(self) -> str:
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def to_list(self) -> List[str]:
        return [str(g) for g in self.generators]

    def __repr__(self) -> str:
        return f"Ideal{self.describe()}"


@dataclass
class InvariantRecord:
    """模組的不變量摘要"""
    mu: int
    depth: Optional[int]
    krull_dim: int
    hilbert_prefix: List[int]
    betti_prefix: List[int]
    socle_dim: Optional[int]
    type: Optional[int]
    annihilator: List[str]
    length: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mu": self.mu,
            "depth": self.depth,
            "krull_dim": self.krull_dim,
            "hilbert_prefix": list(self.hilbert_prefix),
            "betti_prefix": list(self.betti_prefix),
            "socle_dim": self.socle_dim,
            "type": self.type,
            "annihilator": list(self.annihilator),
            "length": self.length,
        }

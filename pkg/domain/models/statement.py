"""
定理敘述的註冊資料模型
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


@dataclass(frozen=True)
class Statement:
    """一條可執行的定理敘述；predicate 為 TheoremService 的方法名"""
    id: str
    label: str
    predicate: str
    sampler: str
    rings: Tuple[str, ...] = ()
    kind: str = "theorem"
    suites: Tuple[str, ...] = ()
    params: Dict[str, Any] = field(default_factory=dict, hash=False, compare=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Statement":
        return cls(
            id=data["id"],
            label=data.get("label", data["id"]),
            predicate=data["predicate"],
            sampler=data.get("sampler", "fixed"),
            rings=tuple(data.get("rings", [])),
            kind=data.get("kind", "theorem"),
            suites=tuple(data.get("suites", [])),
            params=dict(data.get("params", {})),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "label": self.label,
            "predicate": self.predicate,
            "sampler": self.sampler,
            "rings": list(self.rings),
            "kind": self.kind,
            "suites": list(self.suites),
            "params": dict(self.params),
        }

    def param(self, name: str, default: Optional[Any] = None) -> Any:
        return self.params.get(name, default)

    @property
    def is_regression(self) -> bool:
        return self.kind == "regression"


def suite_members(statements: List[Statement], suite: str) -> List[Statement]:
    return [s for s in statements if suite == s.id or suite in s.suites]

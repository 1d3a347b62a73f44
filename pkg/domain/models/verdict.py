"""
定理檢驗結果的數據模型
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional


class Conclusion(Enum):
    """結論狀態"""
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


class IsoStatus(Enum):
    """三值同構判定"""
    TRUE = "true"
    FALSE = "false"
    INCONCLUSIVE = "inconclusive"


@dataclass
class HypothesisSlot:
    """單一假設：value 為 None 表示無法判定"""
    name: str
    value: Optional[bool]
    detail: str = ""
    witness: Any = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name, "value": self.value}
        if self.detail:
            data["detail"] = self.detail
        if self.witness is not None:
            data["witness"] = self.witness
        return data


@dataclass
class Hypotheses:
    """有序的假設清單"""
    slots: List[HypothesisSlot] = field(default_factory=list)

    def add(self, name: str, value: Optional[bool], detail: str = "", witness: Any = None) -> Optional[bool]:
        self.slots.append(HypothesisSlot(name, value, detail, witness))
        return value

    def get(self, name: str) -> Optional[HypothesisSlot]:
        for slot in self.slots:
            if slot.name == name:
                return slot
        return None

    @property
    def all_true(self) -> bool:
        return all(slot.value is True for slot in self.slots)

    def first_failure(self) -> Optional[HypothesisSlot]:
        """第一個不成立或無法判定的假設"""
        for slot in self.slots:
            if slot.value is not True:
                return slot
        return None

    def to_list(self) -> List[Dict[str, Any]]:
        return [slot.to_dict() for slot in self.slots]


@dataclass
class Verdict:
    """定理謂詞的判決"""
    statement_id: str
    hypotheses: Hypotheses
    conclusion: Conclusion
    payload: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    reason: str = ""
    instance: str = ""
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.conclusion == Conclusion.HOLDS

    @property
    def fails(self) -> bool:
        return self.conclusion == Conclusion.FAILS

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "statement": self.statement_id,
            "instance": self.instance,
            "seed": self.seed,
            "conclusion": self.conclusion.value,
            "reason": self.reason,
            "hypotheses": self.hypotheses.to_list(),
            "payload": self.payload,
        }
        if include_timing:
            data["timings"] = dict(self.timings)
        return data


@dataclass
class CampaignSummary:
    """驗證活動摘要；merge 為可交換的么半群運算"""
    statement_id: str
    seed: int
    holds: int = 0
    fails: int = 0
    inconclusive: int = 0
    discarded_reasons: Dict[str, int] = field(default_factory=dict)
    budget_exhausted: bool = False
    sampled: bool = False

    @property
    def total(self) -> int:
        return self.holds + self.fails + self.inconclusive

    def record(self, verdict: Verdict) -> None:
        if verdict.conclusion == Conclusion.HOLDS:
            self.holds += 1
        elif verdict.conclusion == Conclusion.FAILS:
            self.fails += 1
        else:
            self.inconclusive += 1
            key = verdict.reason or "unspecified"
            self.discarded_reasons[key] = self.discarded_reasons.get(key, 0) + 1

    def merge(self, other: "CampaignSummary") -> "CampaignSummary":
        reasons = dict(self.discarded_reasons)
        for key, count in other.discarded_reasons.items():
            reasons[key] = reasons.get(key, 0) + count
        return CampaignSummary(
            statement_id=self.statement_id,
            seed=self.seed,
            holds=self.holds + other.holds,
            fails=self.fails + other.fails,
            inconclusive=self.inconclusive + other.inconclusive,
            discarded_reasons=reasons,
            budget_exhausted=self.budget_exhausted or other.budget_exhausted,
            sampled=self.sampled or other.sampled,
        )

    @classmethod
    def from_verdicts(cls, statement_id: str, seed: int, verdicts: Iterable[Verdict]) -> "CampaignSummary":
        summary = cls(statement_id=statement_id, seed=seed)
        for verdict in verdicts:
            summary.record(verdict)
        return summary

    def to_dict(self) -> Dict[str, Any]:
        return {
            "statement": self.statement_id,
            "seed": self.seed,
            "total": self.total,
            "holds": self.holds,
            "fails": self.fails,
            "inconclusive": self.inconclusive,
            "discarded_reasons": dict(sorted(self.discarded_reasons.items())),
            "budget_exhausted": self.budget_exhausted,
            "sampled": self.sampled,
        }


@dataclass
class IsoResult:
    """同構判定結果；witness 為生成元上的矩陣（字串形式）"""
    status: IsoStatus
    reason: str = ""
    witness: Optional[List[List[str]]] = None
    shift: int = 0
    candidates_checked: int = 0
    exhaustive: bool = True

    @property
    def is_true(self) -> bool:
        return self.status == IsoStatus.TRUE

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "status": self.status.value,
            "reason": self.reason,
            "shift": self.shift,
            "candidates_checked": self.candidates_checked,
            "exhaustive": self.exhaustive,
        }
        if self.witness is not None:
            data["witness"] = self.witness
        return data

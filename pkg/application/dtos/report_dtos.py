"""
驗證活動與報告相關的數據傳輸對象 (DTOs)
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from domain.models.verdict import CampaignSummary, Verdict


@dataclass
class CampaignRequestDTO:
    """驗證活動請求；None 的欄位沿用 CampaignConfig"""
    statement_id: str
    seed: int
    rings: Optional[List[str]] = None
    samples: Optional[int] = None
    jobs: Optional[int] = None
    oracle_mode: Optional[str] = None
    exhaustive: bool = False
    max_dim: Optional[int] = None
    budget: Optional[int] = None


@dataclass
class CounterexampleDTO:
    """通過反例協定的判決，附完整實例"""
    verdict: Verdict
    instance: Dict[str, Any]
    protocol: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.to_dict(include_timing),
            "instance": self.instance,
            "protocol": self.protocol,
        }


@dataclass
class CampaignResultDTO:
    """單一敘述的驗證結果"""
    statement_id: str
    seed: int
    oracle_mode: str
    summary: CampaignSummary
    verdicts: List[Verdict] = field(default_factory=list)
    counterexamples: List[CounterexampleDTO] = field(default_factory=list)
    expectation: Optional[str] = None
    expectation_met: Optional[bool] = None
    exhaustive: bool = False

    @property
    def has_verified_fail(self) -> bool:
        return bool(self.counterexamples)

    def to_dict(self, include_timing: bool = True, include_verdicts: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "statement": self.statement_id,
            "seed": self.seed,
            "oracle_mode": self.oracle_mode,
            "exhaustive": self.exhaustive,
            "summary": self.summary.to_dict(),
            "counterexamples": [c.to_dict(include_timing) for c in self.counterexamples],
        }
        if self.expectation is not None:
            data["expectation"] = self.expectation
            data["expectation_met"] = self.expectation_met
        if include_verdicts:
            data["verdicts"] = [v.to_dict(include_timing) for v in self.verdicts]
        return data


@dataclass
class OracleCheckRowDTO:
    """一組 (M, N) 的 Ext 維數比對"""
    ring: str
    index: int
    seed: int
    engine: List[int]
    oracle: List[int]

    @property
    def agree(self) -> bool:
        return self.engine == self.oracle

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ring": self.ring,
            "index": self.index,
            "seed": self.seed,
            "engine": self.engine,
            "oracle": self.oracle,
            "agree": self.agree,
        }


@dataclass
class OracleCheckResultDTO:
    """引擎與判定器的一致性表"""
    seed: int
    upto: int
    rows: List[OracleCheckRowDTO] = field(default_factory=list)

    @property
    def disagreements(self) -> List[OracleCheckRowDTO]:
        return [row for row in self.rows if not row.agree]

    def table(self) -> Dict[str, Dict[str, int]]:
        """每個環的比對數與一致數"""
        counts: Dict[str, Dict[str, int]] = {}
        for row in self.rows:
            entry = counts.setdefault(row.ring, {"pairs": 0, "agree": 0})
            entry["pairs"] += 1
            entry["agree"] += int(row.agree)
        return counts

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "upto": self.upto,
            "table": self.table(),
            "disagreements": [row.to_dict() for row in self.disagreements],
        }


@dataclass
class RunOptionsDTO:
    """單次執行的旗標；None 的欄位沿用配置或腳本內的旗標"""
    seed: int = 0
    samples: Optional[int] = None
    jobs: Optional[int] = None
    oracle_mode: Optional[str] = None
    budget: Optional[int] = None
    max_dim: Optional[int] = None
    exhaustive: bool = False
    rings: Optional[List[str]] = None


@dataclass
class CommandResultDTO:
    """腳本中一個指令的結果"""
    command: str
    label: str
    value: Any = None
    campaigns: List[CampaignResultDTO] = field(default_factory=list)
    oracle_check: Optional[OracleCheckResultDTO] = None
    elapsed_ms: Optional[float] = None

    def to_dict(self, include_timing: bool = True, include_verdicts: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {"command": self.command, "label": self.label}
        if self.command == "compute":
            data["value"] = self.value
        if self.campaigns:
            data["campaigns"] = [c.to_dict(include_timing, include_verdicts) for c in self.campaigns]
        if self.oracle_check is not None:
            data["oracle_check"] = self.oracle_check.to_dict()
        if include_timing and self.elapsed_ms is not None:
            data["elapsed_ms"] = self.elapsed_ms
        return data


@dataclass
class ScriptRunDTO:
    """一次腳本執行的全部結果"""
    seed: int
    oracle_mode: str
    rings: Dict[str, str] = field(default_factory=dict)
    results: List[CommandResultDTO] = field(default_factory=list)
    error: Optional[Dict[str, Any]] = None

    @property
    def campaigns(self) -> List[CampaignResultDTO]:
        return [c for r in self.results for c in r.campaigns]

    @property
    def has_verified_fail(self) -> bool:
        return any(c.has_verified_fail for c in self.campaigns)

    @property
    def unmet_expectations(self) -> List[str]:
        return [c.statement_id for c in self.campaigns if c.expectation_met is False]

    @property
    def oracle_disagreements(self) -> int:
        return sum(len(r.oracle_check.disagreements) for r in self.results if r.oracle_check is not None)

    @property
    def exit_code(self) -> int:
        """2：已確認的反例；1：錯誤、回歸未達預期或判定器不一致；0：其他"""
        if self.has_verified_fail:
            return 2
        if self.error is not None or self.unmet_expectations or self.oracle_disagreements:
            return 1
        return 0

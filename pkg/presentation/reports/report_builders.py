"""
報告建構器
把 ScriptRunDTO 組成固定欄位順序的 JSON 報告，以及給人看的文字摘要
"""
import json
import platform
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import sympy

from application.dtos.report_dtos import CampaignResultDTO, ScriptRunDTO
from config.settings import HOMLAB_VERSION, ReportConfig
from domain.models.verdict import CampaignSummary
from shared.utils.helpers import get_report_time, truncate_text

REPORT_SCHEMA = "homlab-report/1"
SCHEMA_PATH = Path(__file__).with_name("report_schema.json")


def load_report_schema() -> Dict[str, Any]:
    with open(SCHEMA_PATH, "r", encoding="utf-8") as f:
        return json.load(f)


class ReportBuilder:
    """報告建構器；同一種子重跑時，除時間欄位外輸出逐位元組相同"""

    def __init__(self, config: ReportConfig):
        self.config = config

    def build(self, run: ScriptRunDTO, include_verdicts: bool = False) -> Dict[str, Any]:
        timing = self.config.include_timing
        return {
            "schema": REPORT_SCHEMA,
            "environment": self.environment(run),
            "results": [r.to_dict(timing, include_verdicts) for r in run.results],
            "summaries": self.summaries(run.campaigns),
            "error": run.error,
            "exit_code": run.exit_code,
        }

    def environment(self, run: ScriptRunDTO) -> Dict[str, Any]:
        env: Dict[str, Any] = {
            "version": HOMLAB_VERSION,
            "seed": run.seed,
            "oracle_mode": run.oracle_mode,
            "rings": dict(run.rings),
            "engines": {
                "python": platform.python_version(),
                "numpy": np.__version__,
                "sympy": sympy.__version__,
            },
        }
        if self.config.include_timing:
            env["generated_at"] = get_report_time(self.config.timezone).isoformat()
        return env

    @staticmethod
    def summaries(campaigns: List[CampaignResultDTO]) -> List[Dict[str, Any]]:
        """同一敘述的多次活動合併為一列，依首次出現排序"""
        merged: Dict[str, CampaignSummary] = {}
        for campaign in campaigns:
            key = campaign.statement_id
            merged[key] = merged[key].merge(campaign.summary) if key in merged else campaign.summary
        return [summary.to_dict() for summary in merged.values()]

    def dumps(self, report: Dict[str, Any]) -> str:
        return json.dumps(report, indent=self.config.json_indent, ensure_ascii=False, default=str)


class TextReportRenderer:
    """文字報告"""

    def render(self, report: Dict[str, Any]) -> str:
        env = report["environment"]
        lines = [f"HomLab {env['version']}  seed={env['seed']}  oracle={env['oracle_mode']}"]
        for name, ring in env["rings"].items():
            lines.append(f"  ring {name} = {ring}")

        for result in report["results"]:
            lines.extend(self._result_lines(result))

        if report["summaries"]:
            lines.append("")
            lines.append(f"{'statement':<24}{'holds':>8}{'fails':>8}{'inconcl.':>10}  notes")
            for s in report["summaries"]:
                notes = ", ".join(f"{k}×{v}" for k, v in s["discarded_reasons"].items())
                if s["budget_exhausted"]:
                    notes = ("budget_exhausted " + notes).strip()
                lines.append(f"{s['statement']:<24}{s['holds']:>8}{s['fails']:>8}{s['inconclusive']:>10}  {notes}")

        if report.get("error"):
            error = report["error"]
            lines.append("")
            lines.append(f"error [{error['code']}] {error['message']}")
        lines.append(f"exit code {report['exit_code']}")
        return "\n".join(lines)

    def _result_lines(self, result: Dict[str, Any]) -> List[str]:
        command = result["command"]
        if command == "compute":
            return [f"{result['label']} = {truncate_text(self._value(result['value']), 400)}"]
        if command == "oracle-check":
            check = result["oracle_check"]
            lines = [f"oracle-check Ext^0..{check['upto']} seed={check['seed']}"]
            for ring, counts in check["table"].items():
                lines.append(f"  {ring:<16}{counts['agree']}/{counts['pairs']} agree")
            return lines
        lines = [f"{command} {result['label']}"]
        for campaign in result.get("campaigns", []):
            s = campaign["summary"]
            mode = "exhaustive" if campaign["exhaustive"] else "sampled"
            line = f"  {campaign['statement']:<22}{mode:<11}holds={s['holds']} fails={s['fails']} inconclusive={s['inconclusive']}"
            if "expectation" in campaign:
                line += f" expect={campaign['expectation']}:{'ok' if campaign['expectation_met'] else 'UNMET'}"
            lines.append(line)
            for cx in campaign["counterexamples"]:
                lines.append(f"    counterexample {cx['verdict']['instance']} seed={cx['verdict']['seed']}")
                lines.append("      " + json.dumps(cx["instance"], ensure_ascii=False, default=str))
        return lines

    @staticmethod
    def _value(value: Any) -> str:
        if isinstance(value, (dict, list)):
            return json.dumps(value, ensure_ascii=False, default=str)
        return str(value)

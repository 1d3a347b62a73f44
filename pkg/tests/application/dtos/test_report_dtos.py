import pytest

from application.dtos.report_dtos import (
    CampaignResultDTO,
    CommandResultDTO,
    CounterexampleDTO,
    OracleCheckResultDTO,
    OracleCheckRowDTO,
    ScriptRunDTO,
)
from domain.models.verdict import CampaignSummary, Conclusion, Hypotheses, Verdict


def _campaign(statement_id="s", expectation=None, met=None, fail=False):
    verdict = Verdict(statement_id, Hypotheses(), Conclusion.FAILS if fail else Conclusion.HOLDS, seed=1,
                      timings={"evaluate_ms": 1.5})
    counterexamples = [CounterexampleDTO(verdict, {"ring": "node"})] if fail else []
    return CampaignResultDTO(
        statement_id,
        seed=1,
        oracle_mode="on",
        summary=CampaignSummary.from_verdicts(statement_id, 1, [verdict]),
        verdicts=[verdict],
        counterexamples=counterexamples,
        expectation=expectation,
        expectation_met=met,
    )


def _oracle(*pairs):
    rows = [OracleCheckRowDTO("cubic", i, 10 + i, engine, oracle) for i, (engine, oracle) in enumerate(pairs)]
    return OracleCheckResultDTO(seed=10, upto=2, rows=rows)


class TestExitCode:
    @pytest.mark.parametrize(
        "results, error, expected",
        [
            ([], None, 0),
            ([CommandResultDTO("verify", "s", campaigns=[_campaign()])], None, 0),
            ([], {"code": "parse_error"}, 1),
            ([CommandResultDTO("verify", "s", campaigns=[_campaign(expectation="holds", met=False)])], None, 1),
            ([CommandResultDTO("oracle-check", "oc", oracle_check=_oracle(([1, 2], [1, 3])))], None, 1),
            ([CommandResultDTO("verify", "s", campaigns=[_campaign(fail=True)])], {"code": "late"}, 2),
        ],
    )
    def test_exit_code(self, results, error, expected):
        assert ScriptRunDTO(seed=0, oracle_mode="on", results=results, error=error).exit_code == expected

    def test_unmet_expectations_are_listed(self):
        run = ScriptRunDTO(
            seed=0,
            oracle_mode="on",
            results=[CommandResultDTO("verify", "regression", campaigns=[
                _campaign("a", "holds", True),
                _campaign("b", "inconclusive", False),
            ])],
        )
        assert run.unmet_expectations == ["b"]


class TestOracleCheckResult:
    def test_table_counts_pairs_per_ring(self):
        result = _oracle(([1, 2], [1, 2]), ([1, 0], [1, 1]))
        assert result.table() == {"cubic": {"pairs": 2, "agree": 1}}
        assert [row.index for row in result.disagreements] == [1]
        assert result.to_dict()["disagreements"][0]["agree"] is False


class TestSerialization:
    def test_campaign_omits_verdicts_by_default(self):
        data = _campaign().to_dict()
        assert "verdicts" not in data
        assert "expectation" not in data
        assert data["summary"]["holds"] == 1

    def test_timing_toggle_reaches_verdicts(self):
        data = _campaign(fail=True).to_dict(include_timing=False, include_verdicts=True)
        assert "timings" not in data["verdicts"][0]
        assert "timings" not in data["counterexamples"][0]["verdict"]

    def test_command_value_only_for_compute(self):
        assert CommandResultDTO("compute", "betti", value=[1, 2]).to_dict()["value"] == [1, 2]
        assert "value" not in CommandResultDTO("module", "M", value=object()).to_dict()

    def test_elapsed_time_is_optional(self):
        command = CommandResultDTO("compute", "depth", value=0, elapsed_ms=3.0)
        assert command.to_dict()["elapsed_ms"] == 3.0
        assert "elapsed_ms" not in command.to_dict(include_timing=False)

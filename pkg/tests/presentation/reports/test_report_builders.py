import json

import pytest
from jsonschema import Draft202012Validator

from application.dtos.report_dtos import CampaignResultDTO, CommandResultDTO, RunOptionsDTO, ScriptRunDTO
from application.handlers.command_handler import CommandHandler
from config.settings import ReportConfig
from domain.models.verdict import CampaignSummary
from presentation.cli.script_parser import parse_script
from presentation.reports import REPORT_SCHEMA, ReportBuilder, TextReportRenderer, load_report_schema

SCRIPT = """
ring A = F2[x:1, y:1]/(x^2, x*y, y^2);
module k = residue A;
compute betti k 2 as betti_k;
compute iso k k;
verify regression --oracle off --samples 2;
oracle-check --ring artin_m2 --samples 1 --upto 1;
"""


@pytest.fixture(scope="module")
def validator():
    schema = load_report_schema()
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema)


@pytest.fixture(scope="module")
def script_run(container):
    return container.get(CommandHandler).run(parse_script(SCRIPT), RunOptionsDTO(seed=4))


@pytest.fixture(scope="module")
def builder(container):
    return container.get(ReportBuilder)


class TestReportBuilder:
    def test_report_matches_schema(self, builder, validator, script_run):
        report = builder.build(script_run, include_verdicts=True)
        validator.validate(report)
        assert report["schema"] == REPORT_SCHEMA
        assert report["exit_code"] == 0
        assert report["environment"]["rings"] == {"A": script_run.rings["A"]}

    def test_error_report_matches_schema(self, builder, validator, container):
        run = container.get(CommandHandler).run(parse_script("compute depth Q;"), RunOptionsDTO(seed=1))
        report = builder.build(run)
        validator.validate(report)
        assert report["error"]["code"] == "unknown_identifier"
        assert report["exit_code"] == 1

    def test_stable_without_timing(self, builder, container, script_run):
        again = container.get(CommandHandler).run(parse_script(SCRIPT), RunOptionsDTO(seed=4))
        assert builder.dumps(builder.build(script_run)) == builder.dumps(builder.build(again))
        assert "generated_at" not in builder.build(script_run)["environment"]

    def test_timing_fields(self, validator, script_run):
        builder = ReportBuilder(ReportConfig(include_timing=True, timezone="Asia/Taipei"))
        report = builder.build(script_run)
        validator.validate(report)
        assert report["environment"]["generated_at"].endswith("+08:00")
        assert "elapsed_ms" in report["results"][0]

    def test_summaries_merge_per_statement(self):
        first = CampaignSummary("s", 1, holds=2, sampled=False)
        second = CampaignSummary("s", 1, holds=1, inconclusive=1, discarded_reasons={"hypothesis:x": 1}, sampled=True)
        campaigns = [
            CampaignResultDTO("s", 1, "on", first, exhaustive=True),
            CampaignResultDTO("s", 1, "on", second),
        ]
        (row,) = ReportBuilder.summaries(campaigns)
        assert (row["total"], row["holds"], row["inconclusive"]) == (4, 3, 1)
        assert row["sampled"] is True

    def test_dumps_is_valid_json(self, builder):
        run = ScriptRunDTO(seed=0, oracle_mode="off", results=[CommandResultDTO("compute", "depth", value="inf")])
        data = json.loads(builder.dumps(builder.build(run)))
        assert data["results"][0]["label"] == "depth"


class TestTextReportRenderer:
    def test_render(self, builder, script_run):
        text = TextReportRenderer().render(builder.build(script_run))
        lines = text.splitlines()
        assert lines[0].startswith("HomLab ")
        assert "betti_k = [1, 2, 4]" in lines
        assert any(line.strip().startswith("artin_m2") and line.endswith("1/1 agree") for line in lines)
        assert lines[-1] == "exit code 0"

    def test_render_error(self, builder):
        run = ScriptRunDTO(seed=0, oracle_mode="on", error={"code": "parse_error", "message": "1:1: 預期敘述"})
        text = TextReportRenderer().render(builder.build(run))
        assert "error [parse_error] 1:1: 預期敘述" in text
        assert text.endswith("exit code 1")

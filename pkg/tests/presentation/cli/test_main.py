import io
import json
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator

from presentation.cli.main import build_parser, main, run_options
from presentation.reports import load_report_schema

SCRIPTS = Path(__file__).resolve().parents[3] / "scripts"


def _report(capsys):
    return json.loads(capsys.readouterr().out)


class TestParser:
    def test_ring_flags_are_split(self, config_factory):
        args = build_parser().parse_args(["verify", "--suite", "core", "--ring", "node,cusp", "--ring", "cubic"])
        options = run_options(args, config_factory())
        assert options.rings == ["node", "cusp", "cubic"]
        assert options.seed == 7

    def test_usage_error_exits_with_one(self, container):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"], container=container)
        assert exc.value.code == 1

    def test_bad_oracle_choice(self, container):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--suite", "regression", "--oracle", "maybe"], container=container)
        assert exc.value.code == 1


class TestMain:
    def test_compute_script_json(self, container, capsys, tmp_path):
        path = tmp_path / "small.hl"
        path.write_text("ring A = catalog artin_m2;\nmodule k = residue A;\ncompute socle_dim k as s;\n", encoding="utf-8")
        assert main(["compute", str(path), "--json", "--seed", "2"], container=container) == 0
        report = _report(capsys)
        Draft202012Validator(load_report_schema()).validate(report)
        assert report["environment"]["seed"] == 2
        assert report["results"] == [{"command": "compute", "label": "s", "value": 1}]

    def test_script_from_stdin(self, container, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("ring C = catalog cubic;\ncompute gorenstein C;\n"))
        assert main(["compute", "-", "--json"], container=container) == 0
        assert _report(capsys)["results"][0]["value"] is True

    def test_missing_file(self, container, capsys, tmp_path):
        assert main(["compute", str(tmp_path / "absent.hl")], container=container) == 1
        assert "homlab:" in capsys.readouterr().err

    def test_parse_error_is_reported(self, container, capsys, tmp_path):
        path = tmp_path / "broken.hl"
        path.write_text("ring A = catalog artin_m2\nmodule k = residue A;", encoding="utf-8")
        assert main(["compute", str(path), "--json"], container=container) == 1
        assert "homlab:" in capsys.readouterr().err

    def test_unknown_statement(self, container, capsys):
        assert main(["search", "--statement", "no_such_statement", "--json"], container=container) == 1
        captured = capsys.readouterr()
        assert json.loads(captured.out)["error"]["code"] == "statement_not_found"
        assert "homlab:" in captured.err

    def test_verify_regression_text(self, container, capsys):
        code = main(["verify", "--suite", "regression", "--samples", "2", "--oracle", "off"], container=container)
        assert code == 0
        out = capsys.readouterr().out
        assert "conditions_needed" in out
        assert out.rstrip().endswith("exit code 0")

    def test_builds_container_from_config(self, capsys, config_factory):
        assert main(["oracle-check", "--ring", "cubic", "--samples", "1", "--upto", "1", "--json"], config=config_factory()) == 0
        table = _report(capsys)["results"][0]["oracle_check"]["table"]
        assert table == {"cubic": {"pairs": 1, "agree": 1}}


@pytest.mark.slow
class TestBundledScripts:
    @pytest.mark.parametrize("name", ["tour.hl", "conditionsneeded.hl"])
    def test_script_runs_clean(self, container, capsys, name):
        assert main(["compute", str(SCRIPTS / name), "--json", "--seed", "42"], container=container) == 0
        report = _report(capsys)
        Draft202012Validator(load_report_schema()).validate(report)
        assert report["error"] is None
        assert all(
            check["oracle_check"]["disagreements"] == []
            for check in report["results"]
            if check["command"] == "oracle-check"
        )

    def test_full_regression_suite(self, container, capsys):
        assert main(["verify", "--suite", "regression", "--json"], container=container) == 0
        summaries = _report(capsys)["summaries"]
        assert {row["statement"] for row in summaries} == {
            "fitting_sharp",
            "conditions_needed",
            "dualfree_sum_with_residue",
        }
        assert all(row["fails"] == 0 for row in summaries)

import sys

import pytest


def test_import_app():
    """Verify the app module can be imported without errors."""
    import app
    assert callable(app.run)


def test_run_reports_version(monkeypatch, capsys):
    import app

    monkeypatch.setattr(sys, "argv", ["homlab", "--version"])
    with pytest.raises(SystemExit) as exc:
        app.run()
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("homlab ")

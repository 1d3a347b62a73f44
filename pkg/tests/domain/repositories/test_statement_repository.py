import json

import pytest

from domain.models.statement import Statement
from domain.repositories.statement_repository import InMemoryStatementRepository
from shared.exceptions import RepositoryError, StatementNotFoundError


@pytest.fixture
def repository():
    return InMemoryStatementRepository(
        [
            Statement("a", "A", "minsyz", "first_syzygy", ("artin_m2",), suites=("core",)),
            Statement("b", "B", "fitting", "finite_pair", ("cubic",), suites=("core", "fitting")),
            Statement("c", "C", "conditions_needed", "fixed", ("node",), kind="regression", suites=("regression",)),
        ]
    )


class TestInMemoryStatementRepository:
    def test_get_and_find(self, repository):
        assert repository.get("a").predicate == "minsyz"
        assert repository.find("missing") is None
        with pytest.raises(StatementNotFoundError) as exc:
            repository.get("missing")
        assert exc.value.error_code == "statement_not_found"

    def test_suites(self, repository):
        assert [s.id for s in repository.suite("core")] == ["a", "b"]
        assert [s.id for s in repository.suite("c")] == ["c"]
        assert repository.suite("regression")[0].is_regression
        with pytest.raises(StatementNotFoundError):
            repository.suite("nothing")

    def test_register_overwrites(self, repository):
        repository.register(Statement("a", "A2", "cyclic", "cyclic"))
        assert repository.get("a").label == "A2"
        assert len(repository.list_all()) == 3

    def test_from_json_file(self, tmp_path):
        path = tmp_path / "statements.json"
        path.write_text(json.dumps({"statements": [{"id": "x", "predicate": "cyclic"}]}), encoding="utf-8")
        repo = InMemoryStatementRepository.from_json_file(str(path))
        statement = repo.get("x")
        assert statement.sampler == "fixed"
        assert statement.label == "x"

    def test_bad_json_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(RepositoryError):
            InMemoryStatementRepository.from_json_file(str(path))
        with pytest.raises(RepositoryError):
            InMemoryStatementRepository.from_json_file(str(tmp_path / "absent.json"))

    def test_missing_predicate(self, tmp_path):
        path = tmp_path / "partial.json"
        path.write_text(json.dumps({"statements": [{"id": "x"}]}), encoding="utf-8")
        with pytest.raises(RepositoryError):
            InMemoryStatementRepository.from_json_file(str(path))


class TestRegisteredStatements:
    def test_bundled_registry(self, statements):
        ids = [s.id for s in statements.list_all()]
        assert len(ids) == len(set(ids))
        assert {"minsyz", "fitting", "conditions_needed", "fitting_sharp"} <= set(ids)
        assert {s.id for s in statements.suite("regression")} == {
            "fitting_sharp",
            "conditions_needed",
            "dualfree_sum_with_residue",
        }

    def test_regression_expectation(self, statements):
        assert statements.get("dualfree_sum_with_residue").param("expect") == "inconclusive"

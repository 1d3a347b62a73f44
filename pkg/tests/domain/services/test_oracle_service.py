import numpy as np
import pytest

from domain.models.lin_module import lin_direct_sum
from shared.exceptions import ValidationError


@pytest.fixture(scope="module")
def realized(oracle, modules, artin):
    return {
        "k": oracle.realize(modules.residue_field(artin)),
        "R": oracle.realize(modules.ring_module(artin)),
    }


class TestRealize:
    def test_dimensions_and_degrees(self, realized):
        assert realized["k"].dim == 1
        assert realized["R"].degrees == (0, 1, 1)

    def test_basic_invariants(self, oracle, realized):
        assert oracle.lin_mu(realized["R"]) == 1
        assert oracle.lin_socle_dim(realized["R"]) == 2
        assert oracle.is_valid_module(realized["R"])

    def test_back_to_presentation(self, oracle, iso, modules, artin, realized):
        back = oracle.lin_to_fp(realized["R"])
        assert iso.is_isomorphic(back, modules.ring_module(artin)).is_true


class TestHomAndExt:
    def test_hom_from_residue_field_lands_in_socle(self, oracle, realized):
        maps = oracle.lin_hom(realized["k"], realized["R"])
        assert len(maps) == 2
        assert all(f.commutes() for f in maps)
        assert oracle.lin_hom(realized["k"], realized["R"], 0) == []
        assert len(oracle.lin_hom(realized["k"], realized["R"], 1)) == 2

    def test_ext_agrees_with_engine(self, oracle, realized):
        assert oracle.lin_ext_dims(realized["k"], realized["k"], 2) == [1, 2, 4]

    def test_matlis_dual(self, oracle, realized):
        dual = oracle.lin_matlis_dual(realized["R"])
        assert dual.degrees == (0, -1, -1)
        assert oracle.lin_mu(dual) == 2
        assert oracle.lin_socle_dim(dual) == 1


class TestEnumeration:
    def test_dual_numbers(self, oracle, rings):
        result = oracle.enumerate_modules(rings.catalog("dual_numbers"), 2)
        assert len(result.modules) == 3
        assert result.raw_tuples == 4
        assert not result.sampled

    def test_budget_switches_to_sampling(self, oracle, artin):
        result = oracle.enumerate_modules(artin, 3, budget=10, rng=np.random.default_rng(1))
        assert result.sampled
        assert all(oracle.is_valid_module(X) for X in result.modules)

    def test_requires_artinian_ring(self, oracle, node):
        with pytest.raises(ValidationError) as exc:
            oracle.enumerate_modules(node, 1)
        assert exc.value.error_code == "not_artinian"

    def test_fingerprint_ignores_grading(self, oracle, realized, modules, artin):
        k = realized["k"]
        shifted = oracle.realize(modules.twist(modules.residue_field(artin), 1))
        assert oracle.fingerprint(lin_direct_sum([k, k])) == oracle.fingerprint(lin_direct_sum([k, shifted]))


class TestRandomModule:
    @pytest.mark.parametrize("seed", [0, 4, 9])
    def test_valid_and_reproducible(self, oracle, artin, seed):
        X = oracle.random_module(artin, 3, np.random.default_rng(seed))
        Y = oracle.random_module(artin, 3, np.random.default_rng(seed))
        assert oracle.is_valid_module(X)
        assert X.degrees == Y.degrees
        assert all(np.array_equal(a, b) for a, b in zip(X.actions, Y.actions))

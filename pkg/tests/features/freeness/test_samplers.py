import pytest

from domain.models.statement import Statement
from shared.exceptions import ValidationError


class TestSample:
    def test_reproducible_from_seed(self, sampler, iso, statements, artin):
        statement = statements.get("minsyz")
        first = sampler.sample(statement, artin, seed=5)
        second = sampler.sample(statement, artin, seed=5)
        assert first.label == "minsyz#0@artin_m2"
        assert iso.is_isomorphic(first.modules["M"], second.modules["M"]).is_true

    def test_syzygy_samples_need_artinian_ring(self, sampler, statements, node):
        with pytest.raises(ValidationError) as exc:
            sampler.sample(statements.get("minsyz"), node, seed=1)
        assert exc.value.error_code == "not_artinian"

    def test_catalog_module_label(self, sampler, statements, node):
        instance = sampler.sample(statements.get("dualfree_sum_with_residue"), node, seed=2, index=3)
        assert instance.label == "dualfree_sum_with_residue#3@node:R+k"
        assert instance.params == {"expect": "inconclusive"}

    def test_finite_pair_parameters(self, sampler, statements, cubic):
        instance = sampler.sample(statements.get("fitting"), cubic, seed=8, max_dim=2)
        assert set(instance.modules) == {"M", "N"}
        assert instance.params["r"] >= 1
        assert instance.params["s"] in (0, 1, 2)

    def test_unknown_family_member(self, sampler, node):
        statement = Statement("x", "x", "dualfree", "catalog_module", ("node",), params={"modules": ["nope"]})
        with pytest.raises(ValidationError) as exc:
            sampler.sample(statement, node, seed=0)
        assert exc.value.error_code == "unknown_module"

    @pytest.mark.parametrize(
        "index, suffix", [(0, ":X,omega"), (1, ":R,free"), (2, ":X,R+omega"), (3, ":R,R+omega"), (4, ":R+X,free"), (6, ":R,free")]
    )
    def test_syzygy_pair_shapes_cycle_with_index(self, sampler, statements, artin, index, suffix):
        instance = sampler.sample(statements.get("hom_free_free"), artin, seed=9, index=index, max_dim=2)
        assert instance.label.endswith(suffix)

    def test_syzygy_pair_free_target(self, sampler, modules, homology, statements, artin):
        instance = sampler.sample(statements.get("hom_free_summand"), artin, seed=4, index=1, max_dim=2)
        assert modules.is_free(instance.modules["M"])
        assert modules.is_free(instance.modules["N"])
        faithful = sampler.sample(statements.get("hom_free_summand"), artin, seed=4, index=3, max_dim=2)
        assert homology.has_free_summand(faithful.modules["N"])[0]

    @pytest.mark.parametrize("index, name", [(0, "X"), (1, "R+X"), (2, "R^2+X"), (4, "R+X")])
    def test_summand_module_adds_free_copies(self, sampler, homology, statements, cubic, index, name):
        M = sampler.sample(statements.get("dualfree"), cubic, seed=7, index=index, max_dim=2).modules["M"]
        assert M.name == name
        if index % 3:
            assert homology.has_free_summand(M)[0]


class TestFamily:
    def test_members(self, sampler, node):
        assert set(sampler.family(node)) == {"R", "k", "m", "R/(x)", "R/(y)", "R+k", "omega"}

    def test_with_free_summand(self, sampler, modules, homology, artin):
        syzygy = modules.syzygy_module(homology.residue_field(artin), 1)
        bigger = sampler.with_free_summand(syzygy)
        assert modules.mu(bigger) == 3
        assert homology.has_free_summand(bigger)[0]

    def test_ideal_instance(self, sampler, node):
        I = sampler.ideal_instance(node, ["x", "y"])
        assert I.name == "(x, y)"
        assert len(I.cache["ideal_generators"]) == 2


class TestExhaustive:
    def test_enumerability(self, sampler, statements, artin, node):
        assert sampler.is_enumerable(statements.get("minsyz"), artin)
        assert not sampler.is_enumerable(statements.get("minsyz"), node)
        assert sampler.is_enumerable(statements.get("conditions_needed"), node)

    def test_fixed_statement(self, sampler, statements, node):
        instances = list(sampler.exhaustive(statements.get("conditions_needed"), node))
        assert [i.label for i in instances] == ["conditions_needed@node"]

    def test_first_syzygies_of_small_modules(self, sampler, statements, artin):
        instances = list(sampler.exhaustive(statements.get("minsyz"), artin, max_dim=1))
        assert len(instances) == 2
        assert instances[1].label.startswith("minsyz@artin_m2:R+")
        assert not instances[0].sampled

    def test_catalog_pairs(self, sampler, node):
        statement = Statement("p", "p", "nu_multiplicativity", "catalog_pair", ("node",), params={"modules": ["R", "k"]})
        assert len(list(sampler.exhaustive(statement, node))) == 4

    def test_non_artinian_enumeration(self, sampler, statements, node):
        with pytest.raises(ValidationError):
            list(sampler.exhaustive(statements.get("minsyz"), node))

    def test_syzygy_pairs_include_free_and_split_targets(self, sampler, statements, artin):
        instances = list(sampler.exhaustive(statements.get("hom_free_free"), artin, max_dim=1))
        labels = [i.label.split(":", 1)[1] for i in instances]
        assert len(instances) == 6
        assert "R,R" in labels
        assert any(label.startswith("R,R+Ω(") for label in labels)

    def test_summand_modules(self, sampler, statements, artin):
        instances = list(sampler.exhaustive(statements.get("dualfree"), artin, max_dim=1))
        assert len(instances) == 2
        assert instances[1].modules["M"].name.startswith("R+")

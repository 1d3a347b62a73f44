import pytest

from domain.models.polynomial import PolynomialRing
from domain.models.statement import Statement
from domain.models.verdict import Conclusion
from features.freeness import Instance
from shared.exceptions import ValidationError


@pytest.fixture(scope="module")
def syzygy_of_k(modules, homology, artin):
    return modules.syzygy_module(homology.residue_field(artin), 1)


class TestMinimalSyzygy:
    def test_all_conditions_fail_together(self, theorems, syzygy_of_k):
        verdict = theorems.check_minsyz(syzygy_of_k)
        assert verdict.holds
        assert set(verdict.payload["conditions"].values()) == {False}

    def test_all_conditions_hold_together(self, theorems, sampler, syzygy_of_k):
        verdict = theorems.check_minsyz(sampler.with_free_summand(syzygy_of_k))
        assert verdict.holds
        assert set(verdict.payload["conditions"].values()) == {True}
        assert "summand_witness" in verdict.payload

    def test_requires_artinian_ring(self, theorems, modules, node):
        with pytest.raises(ValidationError) as exc:
            theorems.check_minsyz(modules.ring_module(node))
        assert exc.value.error_code == "not_artinian"


class TestFitting:
    @pytest.mark.parametrize("r", [1, 2])
    def test_residue_field(self, theorems, homology, artin, r):
        k = homology.residue_field(artin)
        verdict = theorems.check_fitting(k, k, r)
        assert verdict.holds
        assert verdict.payload["hom_iso_to_Nr"] is (r == 1)

    def test_positive_dimensional_target(self, theorems, modules, node):
        R = modules.ring_module(node)
        with pytest.raises(ValidationError):
            theorems.check_fitting(R, R, 1)

    def test_sharpness_on_node(self, theorems, node):
        verdict = theorems.check_fitting_sharp(node)
        assert verdict.holds
        assert verdict.payload["fitting_kills_N"]
        assert verdict.payload["hom_iso_to_Nr"] is False


class TestRegressions:
    def test_conditions_needed(self, theorems, node):
        verdict = theorems.check_conditions_needed(node)
        assert verdict.holds
        assert verdict.payload["gap"] == "faithfulness"
        assert verdict.payload["ext1_dim"] == 0
        assert verdict.payload["ext2_dim"] == 1

    def test_sum_with_residue_is_inconclusive(self, theorems, sampler, statements, node):
        statement = statements.get("dualfree_sum_with_residue")
        verdict = theorems.evaluate(statement, sampler.sample(statement, node, seed=1))
        assert verdict.conclusion == Conclusion.INCONCLUSIVE
        assert verdict.reason == "hypothesis:ext_vanishing_M_R"


class TestDualAndHomFreeness:
    def test_free_summand_passes_to_the_dual(self, theorems, sampler, homology, artin):
        verdict = theorems.check_dualfree(sampler.free_plus(homology.residue_field(artin), 1))
        assert verdict.holds
        assert verdict.payload["mode"] == "dual_summand"

    def test_residue_field_dual_has_no_free_summand(self, theorems, homology, artin):
        verdict = theorems.check_dualfree(homology.residue_field(artin))
        assert verdict.reason == "hypothesis:dual_has_free_summand"

    @pytest.mark.parametrize("mode", ["free", "extt"])
    def test_homs_into_free_module(self, theorems, modules, artin, mode):
        R = modules.ring_module(artin)
        verdict = theorems.check_hom_free(R, modules.free_module(artin, (0, 0)), mode)
        assert verdict.holds

    def test_faithful_hom_forces_free_summand(self, theorems, modules, sampler, syzygy_of_k, artin):
        N = sampler.with_free_summand(syzygy_of_k)
        verdict = theorems.check_hom_free(modules.ring_module(artin), N, "summand")
        assert verdict.holds
        assert verdict.payload["summand_witness"] is not None

    def test_syzygy_target_is_never_faithful(self, theorems, modules, syzygy_of_k, artin):
        verdict = theorems.check_hom_free(modules.ring_module(artin), syzygy_of_k, "summand")
        assert verdict.reason == "hypothesis:df_witness_hom"


def _cyclic(modules, ring, *gens):
    polys = tuple(ring.parse(g) for g in gens)
    M = modules.quotient_by_ideal(ring, polys, "R/(" + ", ".join(gens) + ")" if gens else "R")
    M.cache["ideal_generators"] = polys
    return M


class TestCyclic:
    def test_ring_itself_is_free(self, theorems, modules, node):
        verdict = theorems.check_cyclic(_cyclic(modules, node))
        assert verdict.holds

    @pytest.mark.parametrize("gens, detail", [(("x + y",), "dim R/I < dim R"), (("x",), "x 不是冪零元"), (("x^2",), "x^2 不是冪零元")])
    def test_node_quotients_fail_the_associated_primes_slot(self, theorems, modules, node, gens, detail):
        verdict = theorems.check_cyclic(_cyclic(modules, node, *gens))
        slot = verdict.hypotheses.get("ass_fragment")
        assert slot.value is False
        assert slot.detail == detail
        assert verdict.reason == "hypothesis:ass_fragment"

    def test_nilpotent_ideal_stays_undecided(self, theorems, modules, groebner):
        ambient = PolynomialRing(2, ["x", "y"])
        ring = groebner.make_quotient_ring(ambient, [ambient.parse("y^2")])
        slot = theorems.check_cyclic(_cyclic(modules, ring, "y")).hypotheses.get("ass_fragment")
        assert slot.value is None


class TestNuMultiplicativity:
    def test_depth_zero(self, theorems, modules, homology, artin):
        verdict = theorems.check_nu_multiplicativity(modules.ring_module(artin), homology.residue_field(artin))
        assert verdict.holds
        assert verdict.payload["nu_hom"] == 1


class TestEvaluate:
    def test_fills_instance_fields(self, theorems, statements, node):
        verdict = theorems.evaluate(statements.get("conditions_needed"), Instance("cn@node", node, seed=4))
        assert verdict.statement_id == "conditions_needed"
        assert verdict.seed == 4
        assert verdict.instance == "cn@node"
        assert "evaluate_ms" in verdict.timings

    def test_unknown_predicate(self, theorems, node):
        with pytest.raises(ValidationError) as exc:
            theorems.evaluate(Statement("z", "z", "no_such_check", "fixed"), Instance("z", node))
        assert exc.value.error_code == "unknown_predicate"

    def test_missing_module(self, theorems, statements, artin):
        with pytest.raises(ValidationError) as exc:
            theorems.evaluate(statements.get("minsyz"), Instance("empty", artin))
        assert exc.value.error_code == "missing_module"

    def test_false_hypothesis_is_inconclusive(self, theorems, modules, artin):
        verdict = theorems.check_hom_cutdown(modules.ring_module(artin), modules.ring_module(artin))
        assert verdict.conclusion == Conclusion.INCONCLUSIVE
        assert verdict.reason == "hypothesis:positive_depth"

    def test_non_cohen_macaulay_ring(self, theorems, modules, groebner):
        ambient = PolynomialRing(2, ["x", "y"])
        ring = groebner.make_quotient_ring(ambient, [ambient.parse("x^2"), ambient.parse("x*y")])
        verdict = theorems.check_testgor(modules.ring_module(ring))
        assert verdict.reason == "hypothesis:cohen_macaulay_ring"

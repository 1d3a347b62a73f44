import pytest

from application.services.application_service import WorkbenchService
from shared.exceptions import ValidationError


@pytest.fixture(scope="module")
def artin_k(modules, artin):
    return modules.residue_field(artin)


class TestCheckArguments:
    def test_optional_and_variadic(self, modules, artin, artin_k):
        x, y = artin.gens
        assert WorkbenchService.check_arguments("syzygy", ("module", "int?"), [artin_k]) == [artin_k, None]
        assert WorkbenchService.check_arguments("quotient", ("ring", "poly+"), [artin, x, y]) == [artin, [x, y]]

    @pytest.mark.parametrize(
        "signature, args",
        [
            (("int",), [True]),
            (("int",), []),
            (("int",), [1, 2]),
            (("poly+",), []),
        ],
    )
    def test_rejected(self, signature, args):
        with pytest.raises(ValidationError) as exc:
            WorkbenchService.check_arguments("op", signature, args)
        assert exc.value.error_code == "bad_arguments"


class TestConstruct:
    def test_free_module(self, workbench, modules, artin):
        F = workbench.construct("free", [artin, 2], "F")
        assert F.name == "F"
        assert modules.mu(F) == 2
        assert modules.is_free(F)

    def test_negative_rank(self, workbench, artin):
        with pytest.raises(ValidationError) as exc:
            workbench.construct("free", [artin, -1])
        assert exc.value.error_code == "bad_rank"

    def test_unknown_constructor(self, workbench, artin):
        with pytest.raises(ValidationError) as exc:
            workbench.construct("blowup", [artin])
        assert exc.value.error_code == "unknown_constructor"

    def test_modules_must_share_a_ring(self, workbench, modules, artin, node):
        with pytest.raises(ValidationError) as exc:
            workbench.construct("sum", [modules.ring_module(artin), modules.ring_module(node)])
        assert exc.value.error_code == "ring_mismatch"

    def test_coker(self, workbench, modules, artin):
        x, y = artin.gens
        assert modules.length(workbench.coker(artin, [[x, y]], name="C")) == 1


class TestCompute:
    def test_unknown_operation(self, workbench, artin_k):
        with pytest.raises(ValidationError) as exc:
            workbench.compute("sheafify", [artin_k])
        assert exc.value.error_code == "unknown_operation"

    def test_mixed_rings(self, workbench, modules, artin_k, cubic):
        with pytest.raises(ValidationError) as exc:
            workbench.compute("hom", [artin_k, modules.ring_module(cubic)])
        assert exc.value.error_code == "ring_mismatch"

    def test_ext_dimensions(self, workbench, artin_k):
        assert workbench.compute("ext_dim", [1, artin_k, artin_k]) == 2
        assert workbench.compute("oracle_ext", [2, artin_k, artin_k]) == [1, 2, 4]

    def test_infinite_ext_dimension(self, workbench, modules, node):
        R = modules.ring_module(node)
        assert workbench.compute("ext_dim", [0, R, R]) == "inf"

    def test_betti_and_fitting(self, workbench, artin_k):
        assert workbench.compute("betti", [artin_k, 3]) == [1, 2, 4, 8]
        assert workbench.compute("fitting", [artin_k, 0]) == ["x", "y"]

    def test_iso_value(self, workbench, modules, artin, artin_k):
        shifted = modules.twist(artin_k, 1)
        value = workbench.compute("iso", [modules.maximal_ideal(artin), modules.direct_sum([shifted, shifted])], seed=5)
        assert value["status"] == "true"

    def test_free_summand_value(self, workbench, modules, artin, artin_k):
        value = workbench.compute("has_free_summand", [modules.direct_sum([modules.ring_module(artin), artin_k])])
        assert value["value"] is True
        assert value["witness"] is not None

    def test_depth_of_zero_module(self, workbench, modules, node):
        assert workbench.compute("depth", [modules.zero_module(node)]) == "inf"
        assert workbench.compute("ring_depth", [node]) == 1

    def test_ring_operations(self, workbench, node, cubic):
        assert workbench.compute("hilbert_series", [node, 3]) == [1, 2, 2, 2]
        assert workbench.compute("gorenstein", [cubic]) is True

    def test_module_summary(self, workbench, artin_k):
        summary = workbench.compute("minimal", [artin_k])
        assert summary["mu"] == 1
        assert summary["length"] == 1
        assert sorted(summary["presentation"][0]) == ["x", "y"]

    def test_invariants(self, workbench, artin_k):
        assert workbench.compute("invariants", [artin_k])["socle_dim"] == 1

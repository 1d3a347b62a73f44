import pytest

from domain.models.polynomial import PolynomialRing
from shared.exceptions import ValidationError


@pytest.fixture
def ambient():
    return PolynomialRing(5, ["x", "y"])


class TestGroebnerBasis:
    def test_s_polynomial_adds_cubic(self, groebner, ambient):
        gb = groebner.groebner_basis([ambient.parse("x^2 - y^2"), ambient.parse("x*y")])
        assert len(gb) == 3
        ring = groebner.make_quotient_ring(ambient, [ambient.parse("x^2 - y^2"), ambient.parse("x*y")])
        assert groebner.normal_form(ambient.parse("y^3"), ring).is_zero()
        assert groebner.normal_form(ambient.parse("x^2"), ring) == ambient.parse("y^2")

    def test_inhomogeneous_generator(self, groebner, ambient):
        with pytest.raises(ValidationError) as exc:
            groebner.groebner_basis([ambient.parse("x + y^2")])
        assert exc.value.error_code == "inhomogeneous_generator"

    def test_unit_ideal(self, groebner, ambient):
        with pytest.raises(ValidationError) as exc:
            groebner.make_quotient_ring(ambient, [ambient.one()])
        assert exc.value.error_code == "unit_ideal"

    def test_zero_ideal(self, groebner, ambient):
        assert groebner.groebner_basis([ambient.zero()]) == []


class TestNormalForm:
    def test_normal_form_cusp_reduces_y_squared(self, groebner, cusp):
        assert groebner.normal_form(cusp.parse("y^2"), cusp) == cusp.parse("x^3")
        assert groebner.normal_form(cusp.parse("x^3"), cusp) == cusp.parse("x^3")

    def test_normal_form_node_kills_generator_multiples(self, groebner, node):
        assert groebner.normal_form(node.parse("x*y"), node).is_zero()
        assert groebner.normal_form(node.parse("x^2*y"), node).is_zero()

    def test_normal_form_is_idempotent(self, groebner, cusp):
        f = groebner.normal_form(cusp.parse("x^3 + 2*y^2"), cusp)
        assert f == cusp.parse("3*x^3")
        assert groebner.normal_form(f, cusp) == f


class TestKrullDimension:
    def test_catalog_dimensions(self, artin, cubic, node, cusp, plane):
        assert (artin.dim, cubic.dim, node.dim, cusp.dim, plane.dim) == (0, 0, 1, 1, 2)
        assert artin.is_artinian and not node.is_artinian

    def test_mixed_dimension(self, groebner):
        ambient = PolynomialRing(2, ["x", "y"])
        ring = groebner.make_quotient_ring(ambient, [ambient.parse("x^2"), ambient.parse("x*y")])
        assert ring.dim == 1


class TestHilbert:
    def test_complete_intersection(self, rings, groebner, ambient):
        ring = groebner.make_quotient_ring(ambient, [ambient.parse("x^2 - y^2"), ambient.parse("x*y")])
        assert rings.hilbert_series_prefix(ring, 4) == [1, 2, 1, 0, 0]

    def test_weighted_cusp(self, rings, cusp):
        assert rings.hilbert_series_prefix(cusp, 6) == [1, 0, 1, 1, 1, 1, 1]

    def test_node(self, rings, node):
        assert rings.hilbert_series_prefix(node, 3) == [1, 2, 2, 2]

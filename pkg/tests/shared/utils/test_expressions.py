import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shared.exceptions import ParseError
from shared.utils.expressions import (
    BinOp,
    Neg,
    Num,
    Pow,
    Var,
    evaluate_expression,
    expression_variables,
    parse_expression_text,
    render_expression,
    tokenize,
)


def expressions():
    leaves = st.one_of(
        st.integers(0, 20).map(Num),
        st.sampled_from(["x", "y", "z"]).map(Var),
    )

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from("+-*"), children, children).map(lambda t: BinOp(*t)),
            children.map(Neg),
            st.tuples(children, st.integers(0, 4)).map(lambda t: Pow(*t)),
        )

    return st.recursive(leaves, extend, max_leaves=8)


class TestTokenize:
    def test_positions_are_one_based(self):
        tokens = tokenize("ring R\n  = F5;")
        eq = [t for t in tokens if t.text == "="][0]
        assert (eq.line, eq.column) == (2, 3)

    def test_comments_and_flags(self):
        kinds = [t.kind for t in tokenize("verify core --max-dim 3 # note")]
        assert kinds == ["NAME", "NAME", "FLAG", "INT", "EOF"]

    def test_unknown_character(self):
        with pytest.raises(ParseError) as exc:
            tokenize("x & y")
        assert (exc.value.line, exc.value.column) == (1, 3)


class TestParseExpression:
    def test_precedence(self):
        node = parse_expression_text("y^2 - x^3")
        assert node == BinOp("-", Pow(Var("y"), 2), Pow(Var("x"), 3))

    def test_unary_minus_binds_tighter_than_product(self):
        assert parse_expression_text("-x*y") == BinOp("*", Neg(Var("x")), Var("y"))

    def test_trailing_input(self):
        with pytest.raises(ParseError):
            parse_expression_text("x y")

    def test_missing_exponent(self):
        with pytest.raises(ParseError):
            parse_expression_text("x^")

    @settings(max_examples=80, deadline=None)
    @given(expressions())
    def test_render_reparses_to_same_tree(self, node):
        assert parse_expression_text(render_expression(node)) == node


class TestEvaluate:
    def test_integers(self):
        node = parse_expression_text("(2 + 3) * 4 - 1")
        assert evaluate_expression(node, {}, int) == 19

    def test_unknown_identifier_position(self):
        node = parse_expression_text("x + w")
        with pytest.raises(ParseError) as exc:
            evaluate_expression(node, {"x": 1}, int)
        assert exc.value.error_code == "unknown_identifier"
        assert exc.value.column == 5

    def test_variables(self):
        assert expression_variables(parse_expression_text("x*y + x^2")) == {"x", "y"}

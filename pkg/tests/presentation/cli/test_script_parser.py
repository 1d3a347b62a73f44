from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from application.dtos.script_dtos import (
    ByArg,
    Compute,
    ExprList,
    IntArg,
    MatrixArg,
    ModuleDecl,
    OracleCheck,
    Ref,
    RingDecl,
    Script,
    Search,
    TwistsArg,
    Verify,
    flag_value,
)
from presentation.cli.script_parser import format_script, format_statement, parse_script
from shared.exceptions import ParseError
from shared.utils.expressions import BinOp, Num, Pow, Var


TOUR = Path(__file__).resolve().parents[3] / "scripts" / "tour.hl"


# ---- 語法樹產生器 ----

def expressions():
    leaves = st.one_of(st.integers(0, 9).map(Num), st.sampled_from(["x", "y", "z"]).map(Var))

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from("+-*"), children, children).map(lambda t: BinOp(*t)),
            st.tuples(children, st.integers(1, 3)).map(lambda t: Pow(*t)),
        )

    return st.recursive(leaves, extend, max_leaves=5)


names = st.sampled_from(["M", "N", "A", "k", "S2", "om"])
refs = names.map(Ref)
ints = st.integers(-3, 5).map(IntArg)
expr_lists = st.lists(expressions(), min_size=1, max_size=3).map(lambda items: ExprList(tuple(items)))
flag_values = st.one_of(st.none(), st.sampled_from(["3", "off", "artin_m2,cubic", "2,4"]))
flags = st.lists(
    st.tuples(st.sampled_from(["samples", "ring", "exhaustive", "oracle", "max-dim"]), flag_values),
    max_size=3,
).map(tuple)


def ring_decls():
    explicit = st.builds(
        RingDecl,
        names,
        st.sampled_from([2, 3, 5, 32003]),
        st.lists(st.tuples(st.sampled_from(["x", "y", "z"]), st.integers(1, 3)), min_size=1, max_size=3).map(tuple),
        st.lists(expressions(), max_size=2).map(tuple),
    )
    catalog = st.builds(lambda n, c: RingDecl(n, catalog=c), names, st.sampled_from(["node", "cusp", "artin_m2"]))
    return st.one_of(explicit, catalog)


def module_decls():
    matrices = st.lists(st.lists(expressions(), min_size=1, max_size=2).map(tuple), min_size=1, max_size=2)
    twists = st.lists(st.integers(-2, 3), min_size=1, max_size=2).map(lambda v: TwistsArg(tuple(v)))
    coker = st.tuples(refs, matrices.map(lambda rows: MatrixArg(tuple(rows)))).flatmap(
        lambda head: st.one_of(st.just(head), twists.map(lambda t: head + (t,)))
    )
    args = st.one_of(
        st.tuples(st.just("coker"), coker),
        st.tuples(st.just("free"), st.tuples(refs, ints)),
        st.tuples(st.just("quotient"), st.tuples(refs, expr_lists)),
        st.tuples(st.just("syzygy"), st.one_of(st.tuples(refs), st.tuples(refs, ints))),
        st.tuples(st.just("sum"), st.lists(refs, min_size=1, max_size=3).map(tuple)),
        st.tuples(st.just("ext"), st.tuples(ints, refs, refs)),
        st.tuples(st.just("cut"), st.tuples(refs, expressions().map(ByArg))),
    )
    return st.builds(lambda n, ca: ModuleDecl(n, ca[0], ca[1]), names, args)


def computes():
    return st.builds(
        lambda op, args, label: Compute(op, tuple(args), label),
        st.sampled_from(["ext_dim", "betti", "fitting", "iso"]),
        st.lists(st.one_of(refs, ints, expr_lists), max_size=3),
        st.one_of(st.none(), st.sampled_from(["e1", "label_2"])),
    )


def scripts():
    statements = st.one_of(
        ring_decls(),
        module_decls(),
        computes(),
        st.builds(Verify, st.sampled_from(["regression", "core", "all"]), flags),
        st.builds(Search, st.sampled_from(["fitting", "minsyz"]), flags),
        st.builds(OracleCheck, flags),
    )
    return st.lists(statements, max_size=6).map(lambda items: Script(tuple(items)))


class TestRoundTrip:
    @given(scripts())
    @settings(max_examples=150, deadline=None)
    def test_format_then_parse(self, script):
        assert parse_script(format_script(script)) == script

    def test_tour_script_is_stable(self):
        with open(TOUR, "r", encoding="utf-8") as f:
            script = parse_script(f.read())
        text = format_script(script)
        assert format_script(parse_script(text)) == text


class TestParse:
    def test_ring_declaration(self):
        (ring,) = parse_script("ring R = F5[x:1, y:2]/(x*y);").statements
        assert ring.p == 5
        assert ring.variables == (("x", 1), ("y", 2))
        assert ring.ideal == (BinOp("*", Var("x"), Var("y")),)

    def test_weight_defaults_to_one(self):
        (ring,) = parse_script("ring R = F3[t];").statements
        assert ring.variables == (("t", 1),)
        assert ring.ideal == ()

    def test_catalog_ring(self):
        assert parse_script("ring C = catalog cusp;").statements == (RingDecl("C", catalog="cusp"),)

    def test_positions(self):
        script = parse_script("# header\nring C = catalog cusp;\n  compute depth C as d;")
        ring, compute = script.statements
        assert (ring.line, ring.column) == (2, 1)
        assert (compute.line, compute.column) == (3, 3)
        assert (compute.args[0].line, compute.args[0].column) == (3, 17)

    def test_compute_arguments(self):
        (node,) = parse_script("compute multiplicity M (x, y - 1) -2 as e;").statements
        assert [type(a) for a in node.args] == [Ref, ExprList, IntArg]
        assert node.args[2] == IntArg(-2)
        assert node.label == "e"

    def test_constructor_arguments(self):
        script = parse_script("module T = coker R [[x, y], [0, x^2]] twists (0, 1);\nmodule D = cut M by x + y;")
        coker, cut = script.statements
        assert len(coker.args[1].rows) == 2
        assert coker.args[2] == TwistsArg((0, 1))
        assert cut.args[1] == ByArg(BinOp("+", Var("x"), Var("y")))

    def test_optional_syzygy_index(self):
        script = parse_script("module A = syzygy k;\nmodule B = syzygy k 2;")
        assert [len(node.args) for node in script.statements] == [1, 2]

    def test_oracle_check_and_flags(self):
        (node,) = parse_script("oracle-check --ring artin_m2,cubic --samples 10 --upto 2;").statements
        assert isinstance(node, OracleCheck)
        assert flag_value(node.flags, "ring") == "artin_m2,cubic"
        assert flag_value(node.flags, "upto") == "2"

    def test_bare_flag(self):
        (node,) = parse_script("verify fitting --exhaustive --max-dim 3;").statements
        assert node.flags == (("exhaustive", None), ("max-dim", "3"))
        assert flag_value(node.flags, "exhaustive") == "true"
        assert flag_value(node.flags, "samples") is None

    def test_empty_script(self):
        assert parse_script("  # nothing\n") == Script()
        assert format_script(Script()) == ""


class TestParseErrors:
    @pytest.mark.parametrize(
        "text, position",
        [
            ("ring R = F5[x];\nmodule M = blowup R;", (2, 12)),
            ("ring R = G5[x];", (1, 10)),
            ("compute depth M", (1, 16)),
            ("frobnicate R;", (1, 1)),
            ("ring R = F5[x]/(x +);", (1, 20)),
            ("verify core --samples 3 @;", (1, 25)),
        ],
    )
    def test_error_positions(self, text, position):
        with pytest.raises(ParseError) as exc:
            parse_script(text)
        assert (exc.value.line, exc.value.column) == position

    def test_unknown_constructor_code(self):
        with pytest.raises(ParseError) as exc:
            parse_script("module M = blowup R;")
        assert exc.value.error_code == "unknown_constructor"


class TestFormat:
    def test_statements(self):
        assert format_statement(RingDecl("R", 5, (("x", 1), ("y", 1)), (Pow(Var("x"), 2),))) == "ring R = F5[x:1, y:1]/(x^2);"
        assert format_statement(Compute("betti", (Ref("k"), IntArg(3)), "b")) == "compute betti k 3 as b;"
        assert format_statement(OracleCheck((("samples", "5"),))) == "oracle-check --samples 5;"

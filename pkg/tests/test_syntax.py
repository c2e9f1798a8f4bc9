import pytest
from hypothesis import given, strategies as st

from procverify.calc import materialize_name
from procverify.equiv import equivalent
from procverify.errors import InvariantViolation, ParseError, UndefinedName, VpTypeError
from procverify.models import example_files, packaged_files
from procverify.syntax import (format_ccs, format_cert, lts_to_recdef, parse_cert, parse_ccs,
                               parse_ccs_expr, parse_expr, parse_formula, parse_type, parse_vpm,
                               format_vpm)
from procverify.vp.expr import to_text
from laws import SMALL


def test_ccs_precedence():
    e = parse_ccs_expr("a?.b?.0 + c?.0 | d?.0")
    assert str(e) == "a?.b?.0 + c?.0 | d?.0"
    rd = parse_ccs("agent A = a?.0 + b!.0 | c?.0 \\ {c};  # comment\n")
    assert format_ccs(parse_ccs(format_ccs(rd))) == format_ccs(rd)


def test_ccs_errors_have_positions():
    with pytest.raises(ParseError) as err:
        parse_ccs("agent A = a?.0;\nagent B = a?.;")
    assert err.value.line == 2 and err.value.col == 14
    with pytest.raises(UndefinedName):
        parse_ccs("agent A = B;")
    with pytest.raises(ParseError):
        parse_ccs("agent A = a?.0; agent A = 0;")


def test_agent_nil():
    p = materialize_name("A", parse_ccs("agent A = 0;"))
    assert len(p.states) == 1 and not p.transitions


@given(SMALL)
def test_lts_text_round_trip(p):
    rd, top = lts_to_recdef(p)
    assert equivalent(materialize_name(top, parse_ccs(format_ccs(rd))), p, "strong")


def test_shipped_files_round_trip():
    files = example_files()
    shipped = {p.name: p.read_text() for p in packaged_files()}
    assert shipped == files
    for name, text in files.items():
        if name.endswith(".ccs"):
            rd = parse_ccs(text)
            assert parse_ccs(format_ccs(rd)) == rd
        elif name.endswith(".vpm"):
            p = parse_vpm(text)
            assert parse_vpm(format_vpm(p)) == p
        else:
            c = parse_cert(text)
            assert parse_cert(format_cert(c)) == c


def test_vpm_guard_shape():
    with pytest.raises(InvariantViolation):
        parse_vpm("var x : 0..1\nstate A init\ntrans A -> A : [x == 0] ; [x == 1]\n")


def test_vpm_type_errors():
    with pytest.raises(VpTypeError):
        parse_vpm("var x : 0..1\nstate A init\ntrans A -> A : x := true\n")
    with pytest.raises(VpTypeError):
        parse_vpm("var x : 0..1\nstate A init\ntrans A -> A : [x] ; x := 1\n")
    with pytest.raises(VpTypeError):
        parse_vpm("var x : 0..1\nstate A init\ntrans A -> A : y := 1\n")


def test_vpm_guard_inserted():
    p = parse_vpm("var x : 0..1\nstate A init\ntrans A -> A : x := 1 - x\n")
    (t,) = p.transitions
    assert str(t.op.ops[0]) == "[true]"


def test_vpm_parse_errors():
    with pytest.raises(ParseError):
        parse_vpm("var x : 0..1\nstate A init\ntrans A -> B : x := 1\n")
    with pytest.raises(ParseError):
        parse_vpm("var x 0..1\n")


def test_types():
    for text in ["0..3", "{a, b}", "bool", "list(0..1, 2)", "array(bool, 3)", "(0..1, {x, y})",
                 "distorted(0..1)"]:
        t = parse_type(text)
        assert parse_type(str(t)) == t


@pytest.mark.parametrize("text", ["a + b * c", "!(x < 3) && y == [1, 2]", "hd(q ++ [f])",
                                  "between(a, b, c) -> x != '*'", "addm(b, 1, 4)", "(1, x)"])
def test_expr_round_trip(text):
    e = parse_expr(text)
    assert parse_expr(to_text(e)) == e


def test_formula_errors():
    with pytest.raises(ParseError):
        parse_formula("<a?>")
    with pytest.raises(ParseError):
        parse_formula("<a>T")


def test_cert_parsing():
    c = parse_cert("left a.vpm\nright b.vpm\nmu A B : x == 1\nct 1 A B t1 = t2 t3 | -\nmaxlen 3\n")
    assert c.left == "a.vpm" and c.max_ct_len == 3
    assert c.ct_sets[(1, "A", "B", "t1")] == [("t2", "t3"), ()]
    with pytest.raises(ParseError):
        parse_cert("left a.vpm\n")
    with pytest.raises(ParseError):
        parse_cert("left a\nright b\nmu A : x\n")

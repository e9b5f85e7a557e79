import pytest
from hypothesis import given, strategies as st

from dgdual.dsl import (
    Command, Decl, MapDecl, NameErrorDSL, SyntaxErrorDSL, TypeErrorDSL, parse_session,
    parse_window, render,
)

HEADER = "field F = Fp(5)\nring A0 = poly(F; x)\ndgring A = koszul(A0; x)\n"


def error_of(text):
    with pytest.raises(Exception) as info:
        parse_session(text)
    return info.value


def test_three_declarations():
    ast = parse_session(HEADER)
    assert len(ast.declarations) == 3 and not ast.commands
    assert [d.kind for d in ast.declarations] == ["field", "ring", "dgring"]
    assert ast.kinds["A"] == "dgring"


def test_undeclared_field():
    err = error_of("ring A0 = poly(F; x)")
    assert isinstance(err, NameErrorDSL)
    assert (err.line, err.col) == (1, 16)
    assert err.to_json()["type"] == "NameError"


def test_semifree_degree_violation():
    err = error_of(HEADER + "module M = semifree(A; gens=[(m,0)], d={m -> m})")
    assert isinstance(err, TypeErrorDSL)
    assert "differential must raise degree" in err.message
    assert err.line == 4


def test_redeclaration():
    err = error_of("field F = Fp(5)\nfield F = QQ()")
    assert isinstance(err, NameErrorDSL) and err.line == 2


def test_wrong_kind():
    text = HEADER + "map f : A0 -> A { x -> x }\nmodule M = free(A)\nrhom f M"
    err = error_of(text)
    assert isinstance(err, TypeErrorDSL)
    assert (err.line, err.col) == (6, 6)


def test_syntax_error_lists_expected_tokens():
    err = error_of("field F = Fp(5")
    assert isinstance(err, SyntaxErrorDSL)
    assert err.expected
    err2 = error_of("frobnicate F")
    assert isinstance(err2, SyntaxErrorDSL)
    assert "field" in err2.expected and "verify" in err2.expected
    assert (err2.line, err2.col) == (1, 1)


def test_unknown_identifier_in_polynomial():
    err = error_of("field F = QQ()\nring A = poly(F; x)\nring B = quotient(A; y^2)")
    assert isinstance(err, NameErrorDSL) and err.line == 3


def test_map_must_commute_with_d():
    text = HEADER + "ring P = poly(F; x)\ndgring K = koszul(P; x^2)\nmap f : K -> A { x -> x, e -> e }"
    err = error_of(text)
    assert isinstance(err, TypeErrorDSL)


def test_comments_and_blank_lines():
    ast = parse_session("# header\n\n" + HEADER.replace("\n", "   # trailing\n", 1))
    assert len(ast.items) == 3
    assert ast.items[0].span.line == 3


def test_commands_and_options():
    ast = parse_session(HEADER + "module k = cyclic(A0; x)\ncohomology k 0 window=-2..2\nresolve k floor=-3")
    c1, c2 = ast.commands
    assert isinstance(c1, Command) and c1.args == ["k", "0"] and c1.options == {"window": "-2..2"}
    assert c2.text == "resolve k floor=-3"


def test_shapes():
    text = HEADER + (
        "ring P = poly(F; x, y; order=lex)\n"
        "module M = semifree(A; gens=[(m0, 0), (m1, -1)], d={m1 -> x*m0})\n"
        "module N = presented(A0; gens=2, rels=[(x, -x)])\n"
        "module S = shift(M, 2)\n"
        "map g : A0 -> P { x -> x + y^2 }\n"
    )
    ast = parse_session(text)
    kinds = [type(d) for d in ast.declarations]
    assert kinds.count(MapDecl) == 1 and kinds.count(Decl) == 7


def test_window_parsing():
    assert parse_window("-6..6") == (-6, 6)
    assert parse_window(" 0..0 ") == (0, 0)
    for bad in ("6..-6", "1-2", "a..b"):
        with pytest.raises(ValueError):
            parse_window(bad)


def test_round_trip_on_corpus():
    from dgdual.cli import default_corpus
    for path in sorted(default_corpus().glob("*.dgd")):
        ast = parse_session(path.read_text(), elaborate=False)
        again = parse_session(render(ast), elaborate=False)
        assert again == ast, path.name


# ------------------------------------------------------------ generated sessions

ws = st.sampled_from(["", " ", "  "])
poly_text = st.sampled_from(["x", "x^2", "x*y - 1", "y^3 + 2*x", "(x + y)^2", "1/2*x"])


@st.composite
def sessions(draw):
    s = draw(ws)
    field = draw(st.sampled_from(["Fp(5)", "Fp(32003)", "QQ()"]))
    lines = [f"field F{s}={s}{field}", f"ring P = poly(F;{s}x, y)"]
    ideal = draw(st.lists(poly_text, min_size=1, max_size=3))
    lines.append(f"ring Q = quotient(P; {(',' + s).join(ideal)})")
    lines.append(f"dgring K = koszul(P; {draw(poly_text)}{s})")
    lines.append(f"module M = free(K; deg={draw(st.integers(-3, 3))})")
    lines.append(f"map f : P -> P {{ x -> {draw(poly_text)}, y -> y }}")
    cmds = draw(st.lists(st.sampled_from(
        ["rhom M M", "tensor M M window=-2..2", "resolve M floor=-2", "gb Q order=lex",
         "cohomology M 0", "verify unit K M"]), max_size=4))
    lines += cmds
    if draw(st.booleans()):
        lines.insert(draw(st.integers(0, len(lines))), "# note")
    return "\n".join(line + draw(ws) for line in lines)


@given(sessions())
def test_render_round_trip(text):
    ast = parse_session(text)
    rendered = render(ast)
    again = parse_session(rendered)
    assert again == ast
    assert render(again) == rendered

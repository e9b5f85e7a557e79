"""Session language: a line-oriented parser with source spans, and its renderer.

A session file holds declarations and commands, one per line, ``#`` starts a
comment::

    field F = Fp(32003)
    ring A0 = poly(F; x, y)
    dgring A = koszul(A0; x)
    map f : A -> B { x -> x }
    module M = semifree(A; gens=[(m0, 0), (m1, -1)], d={m1 -> x*m0})
    rhom M M window=-6..6

Parsing also elaborates: every declaration is built, so name, kind and
degree errors surface with the position of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .derived import Derived, exact
from .dg.modules import SemiFreeModule, cyclic_module, free_module, presented_module, shift
from .dg.rings import DGElem, DGRing, DGRingMap, koszul, tensor_dgrings, trivial
from .field import make_field
from .poly.modules import QuotientRing
from .poly.ring import ExprSyntaxError, Poly, parse_expr, poly_ring

__all__ = [
    "Arg", "Call", "Command", "Decl", "DSLError", "MapDecl", "NameErrorDSL", "SessionAST",
    "Span", "SyntaxErrorDSL", "TypeErrorDSL", "parse_session", "render",
]

DECL_KEYWORDS = ("field", "ring", "ideal", "dgring", "map", "module")
COMMANDS = ("gb", "resolve", "cohomology", "rhom", "tensor", "hochschild", "rigid", "omega",
            "shriek", "verify")
VERIFY_SIGNATURES = {
    "finite": ("map", "module"),
    "smooth": ("map", "module"),
    "reduction": ("dgring", "module", "module"),
    "tensor_dualizing": ("dgring", "dgring"),
    "unit": ("dgring", "module*"),
    "base_change": ("map", "map", "module"),
    "box_hom": ("dgring", "dgring", "module", "module", "module", "module"),
    "duality_swap": ("dgring", "module", "module"),
    "diagonal_tensor": ("dgring", "module", "module"),
    "compose": ("map", "map", "module"),
}
COMMAND_SIGNATURES = {
    "gb": ("ring|ideal",),
    "resolve": ("module",),
    "cohomology": ("module", "int?"),
    "rhom": ("module", "module"),
    "tensor": ("module", "module"),
    "hochschild": ("dgring", "module", "module"),
    "rigid": ("dgring",),
    "omega": ("map",),
    "shriek": ("map", "module"),
}
OPTIONS = {"window", "floor", "order", "depth"}


# ------------------------------------------------------------ errors

class DSLError(Exception):
    kind = "DSLError"

    def __init__(self, message: str, line: int, col: int, expected=()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = sorted(set(expected))
        where = f"line {line}, column {col}"
        extra = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}: {message}{extra}")

    def to_json(self) -> dict:
        return {"type": self.kind, "message": self.message, "line": self.line,
                "column": self.col, "expected": self.expected}


class SyntaxErrorDSL(DSLError):
    kind = "SyntaxError"


class NameErrorDSL(DSLError):
    kind = "NameError"


class TypeErrorDSL(DSLError):
    kind = "TypeErrorDSL"


# ------------------------------------------------------------ AST

@dataclass(frozen=True)
class Span:
    line: int
    col: int


@dataclass
class Arg:
    """``value`` is a str (name or expression), a list, a tuple or a list of pairs tagged dict."""

    key: str | None
    value: object
    span: Span = dc_field(compare=False, default=None)


@dataclass
class Call:
    ctor: str
    groups: list                      # groups of Args, separated by ';'
    span: Span = dc_field(compare=False, default=None)


@dataclass
class Decl:
    kind: str
    name: str
    call: Call
    span: Span = dc_field(compare=False, default=None)


@dataclass
class MapDecl:
    name: str
    source: str
    target: str
    images: list                      # [(name, expr)]
    span: Span = dc_field(compare=False, default=None)
    kind: str = "map"


@dataclass
class Command:
    name: str
    args: list
    options: dict
    span: Span = dc_field(compare=False, default=None)

    @property
    def text(self) -> str:
        return render_item(self)


@dataclass
class SessionAST:
    items: list = dc_field(default_factory=list)
    env: dict = dc_field(default_factory=dict, compare=False, repr=False)
    kinds: dict = dc_field(default_factory=dict, compare=False, repr=False)

    @property
    def declarations(self) -> list:
        return [it for it in self.items if not isinstance(it, Command)]

    @property
    def commands(self) -> list:
        return [it for it in self.items if isinstance(it, Command)]


class DictLit(list):
    """``{k -> v, ...}`` as a list of (key, value) pairs."""


# ------------------------------------------------------------ lexing

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_INT = re.compile(r"[+-]?\d+")
_WINDOW = re.compile(r"([+-]?\d+)\.\.([+-]?\d+)$")
_CLOSERS = {"(": ")", "[": "]", "{": "}"}


class _Cursor:
    def __init__(self, text: str, line: int):
        self.text = text
        self.line = line
        self.pos = 0

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    @property
    def col(self) -> int:
        return self.pos + 1

    def span(self) -> Span:
        return Span(self.line, self.col)

    def at_end(self) -> bool:
        self.ws()
        return self.pos >= len(self.text)

    def peek(self, s: str) -> bool:
        self.ws()
        return self.text.startswith(s, self.pos)

    def fail(self, msg, expected=()):
        raise SyntaxErrorDSL(msg, self.line, self.col, expected)

    def found(self) -> str:
        self.ws()
        if self.pos >= len(self.text):
            return "end of line"
        return repr(self.text[self.pos])

    def expect(self, s: str):
        if not self.peek(s):
            self.fail(f"found {self.found()}", [repr(s)])
        self.pos += len(s)

    def accept(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def ident(self, what="identifier") -> str:
        self.ws()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            self.fail(f"found {self.found()}", [what])
        self.pos = m.end()
        return m.group()

    def word(self) -> str:
        """A whitespace-delimited token (command arguments)."""
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in " \t":
            self.pos += 1
        return self.text[start:self.pos]

    def expr(self) -> str:
        """Raw text up to a depth-0 delimiter, whitespace-normalized."""
        self.ws()
        start = self.pos
        stack = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if not stack and (ch in ",;)]}" or self.text.startswith("->", self.pos)):
                break
            if ch in _CLOSERS:
                stack.append(_CLOSERS[ch])
            elif ch in ")]}":
                if stack.pop() != ch:
                    self.fail(f"unbalanced {ch!r}")
            self.pos += 1
        if stack:
            self.fail("unbalanced brackets", [repr(stack[-1])])
        text = " ".join(self.text[start:self.pos].split())
        if not text:
            self.pos = start
            self.fail(f"found {self.found()}", ["expression"])
        return text

    def value(self):
        self.ws()
        if self.accept("["):
            items = self._seq("]")
            return list(items)
        if self.peek("(") and not self._is_expr_paren():
            self.expect("(")
            return tuple(self._seq(")"))
        if self.accept("{"):
            pairs = DictLit()
            if not self.accept("}"):
                while True:
                    k = self.ident("generator name")
                    self.expect("->")
                    pairs.append((k, self.expr()))
                    if self.accept("}"):
                        break
                    self.expect(",")
            return pairs
        return self.expr()

    def _is_expr_paren(self) -> bool:
        """A parenthesized group is a tuple iff it contains a depth-1 comma."""
        depth = 0
        for ch in self.text[self.pos:]:
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth -= 1
                if depth == 0:
                    return True
            elif ch == "," and depth == 1:
                return False
        return True

    def _seq(self, close: str) -> list:
        out = []
        if self.accept(close):
            return out
        while True:
            out.append(self.value())
            if self.accept(close):
                return out
            if not self.peek(","):
                self.fail(f"found {self.found()}", [repr(","), repr(close)])
            self.expect(",")

    def call(self) -> Call:
        span = self.span()
        ctor = self.ident("constructor")
        self.expect("(")
        groups = [[]]
        if self.accept(")"):
            return Call(ctor, [], span)
        while True:
            self.ws()
            aspan = self.span()
            key = None
            m = re.compile(r"([A-Za-z_]\w*)\s*=(?!=)").match(self.text, self.pos)
            if m:
                key = m.group(1)
                self.pos = m.end()
            groups[-1].append(Arg(key, self.value(), aspan))
            if self.accept(")"):
                break
            if self.accept(";"):
                groups.append([])
                if self.accept(")"):
                    break
                continue
            if not self.peek(","):
                self.fail(f"found {self.found()}", [repr(","), repr(";"), repr(")")])
            self.expect(",")
        return Call(ctor, groups, span)


# ------------------------------------------------------------ parsing lines

def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _parse_line(text: str, lineno: int):
    cur = _Cursor(text, lineno)
    span = cur.span()
    cur.ws()
    span = cur.span()
    head = cur.ident("keyword")
    if head in DECL_KEYWORDS and head != "map":
        name = cur.ident("name")
        cur.expect("=")
        m = _IDENT.fullmatch(cur.text[cur.pos:].strip())
        if m:
            # a bare constructor such as ``QQ``
            call = Call(m.group(), [], cur.span())
            cur.pos = len(cur.text)
        else:
            call = cur.call()
        if not cur.at_end():
            cur.fail(f"found {cur.found()}", ["end of line"])
        return Decl(head, name, call, span)
    if head == "map":
        name = cur.ident("name")
        cur.expect(":")
        src = cur.ident("ring name")
        cur.expect("->")
        tgt = cur.ident("ring name")
        cur.expect("{")
        images = []
        if not cur.accept("}"):
            while True:
                k = cur.ident("variable")
                cur.expect("->")
                images.append((k, cur.expr()))
                if cur.accept("}"):
                    break
                if not cur.peek(","):
                    cur.fail(f"found {cur.found()}", [repr(","), repr("}")])
                cur.expect(",")
        if not cur.at_end():
            cur.fail(f"found {cur.found()}", ["end of line"])
        return MapDecl(name, src, tgt, images, span)
    if head in COMMANDS:
        args, options, spans = [], {}, []
        while not cur.at_end():
            sp = cur.span()
            w = cur.word()
            if "=" in w:
                k, _, v = w.partition("=")
                if k not in OPTIONS:
                    raise SyntaxErrorDSL(f"unknown option {k!r}", lineno, sp.col, sorted(OPTIONS))
                if not v:
                    raise SyntaxErrorDSL(f"option {k!r} needs a value", lineno, sp.col + len(k) + 1,
                                         ["value"])
                if k == "window" and not _WINDOW.match(v):
                    raise SyntaxErrorDSL(f"bad window {v!r}", lineno, sp.col + len(k) + 1, ["a..b"])
                if k in ("floor", "depth") and not _INT.fullmatch(v):
                    raise SyntaxErrorDSL(f"option {k!r} needs an integer", lineno,
                                         sp.col + len(k) + 1, ["integer"])
                options[k] = v
            else:
                if not (_IDENT.fullmatch(w) or _INT.fullmatch(w)):
                    raise SyntaxErrorDSL(f"bad argument {w!r}", lineno, sp.col, ["name", "integer"])
                args.append(w)
                spans.append(sp)
        cmd = Command(head, args, options, span)
        cmd._arg_spans = spans
        return cmd
    raise SyntaxErrorDSL(f"unknown keyword {head!r}", lineno, span.col,
                         list(DECL_KEYWORDS) + list(COMMANDS))


def parse_window(text: str) -> tuple:
    m = _WINDOW.match(text.strip())
    if not m:
        raise ValueError(f"bad window {text!r}; expected a..b")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise ValueError(f"empty window {text!r}")
    return a, b


def parse_session(text: str, elaborate: bool = True, into: SessionAST | None = None,
                  first_line: int = 1) -> SessionAST:
    """Parse (and by default elaborate) a session; raises the first DSLError.

    With ``into``, the lines are appended to an existing elaborated session.
    """
    ast = into if into is not None else SessionAST()
    for lineno, raw in enumerate(text.splitlines(), start=first_line):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        item = _parse_line(line, lineno)
        ast.items.append(item)
        if elaborate:
            _Elaborator(ast).item(item)
    return ast


# ------------------------------------------------------------ rendering

def _render_value(v) -> str:
    if isinstance(v, DictLit):
        return "{" + ", ".join(f"{k} -> {x}" for k, x in v) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_render_value(x) for x in v) + "]"
    if isinstance(v, tuple):
        return "(" + ", ".join(_render_value(x) for x in v) + ")"
    return str(v)


def _render_arg(a: Arg) -> str:
    return (f"{a.key}=" if a.key else "") + _render_value(a.value)


def render_item(it) -> str:
    if isinstance(it, Decl):
        groups = "; ".join(", ".join(_render_arg(a) for a in g) for g in it.call.groups)
        return f"{it.kind} {it.name} = {it.call.ctor}({groups})"
    if isinstance(it, MapDecl):
        body = ", ".join(f"{k} -> {v}" for k, v in it.images)
        return f"map {it.name} : {it.source} -> {it.target} {{ {body} }}"
    parts = [it.name] + list(it.args) + [f"{k}={v}" for k, v in it.options.items()]
    return " ".join(parts)


def render(ast: SessionAST) -> str:
    return "".join(render_item(it) + "\n" for it in ast.items)


# ------------------------------------------------------------ elaboration

class _Lin:
    """Linear combination sum_j c_j g_j of module generators, plus a ring part."""

    def __init__(self, ring: DGRing, const=None, vec=None):
        self.ring = ring
        self.const = const if const is not None else ring.zero()
        self.vec = vec or {}

    def _lift(self, o):
        if isinstance(o, _Lin):
            return o
        return _Lin(self.ring, self.ring(o) if not isinstance(o, DGElem) else o)

    def __add__(self, o):
        o = self._lift(o)
        vec = dict(self.vec)
        for j, c in o.vec.items():
            vec[j] = vec.get(j, self.ring.zero()) + c
        return _Lin(self.ring, self.const + o.const, vec)

    __radd__ = __add__

    def __neg__(self):
        return _Lin(self.ring, -self.const, {j: -c for j, c in self.vec.items()})

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __mul__(self, o):
        o = self._lift(o)
        if self.vec and (o.vec or o.const):
            raise TypeError("write ring coefficients to the left of module generators")
        if self.vec:
            return _Lin(self.ring)
        return _Lin(self.ring, self.const * o.const, {j: self.const * c for j, c in o.vec.items()})

    def __rmul__(self, o):
        return self._lift(o) * self

    def __pow__(self, n):
        if self.vec:
            raise TypeError("powers of module generators are not allowed")
        return _Lin(self.ring, self.const ** n if n else self.ring.one())


class _Elaborator:
    def __init__(self, ast: SessionAST):
        self.ast = ast
        self.env = ast.env
        self.kinds = ast.kinds

    # -- helpers
    def err(self, cls, msg, span: Span, expected=()):
        raise cls(msg, span.line, span.col, expected)

    def lookup(self, name: str, want: str, span: Span):
        """``want`` is a '|'-separated list of kinds; 'dgring' also accepts a ring."""
        if name not in self.kinds:
            self.err(NameErrorDSL, f"undeclared name {name!r}", span)
        kind = self.kinds[name]
        allowed = want.split("|")
        if kind in allowed:
            return self.env[name]
        if kind == "ring" and "dgring" in allowed:
            key = ("__trivial__", name)
            if key not in self.env:
                A = trivial(self.env[name])
                A.name = name
                self.env[key] = A
            return self.env[key]
        self.err(TypeErrorDSL, f"{name!r} is a {kind}, expected a {' or '.join(allowed)}", span)

    def declare(self, name, kind, obj, span):
        if name in self.kinds:
            self.err(NameErrorDSL, f"{name!r} is already declared", span)
        self.kinds[name] = kind
        self.env[name] = obj

    def poly(self, text: str, ring, span: Span):
        """Parse an expression over a QuotientRing or DGRing."""
        try:
            if isinstance(ring, DGRing):
                v = parse_expr(text, ring.namespace(), ring.field)
                return v if isinstance(v, DGElem) else ring.scalar(ring.base.poly(v.value))
            P = ring.poly if isinstance(ring, QuotientRing) else ring
            ns = {n: P.gen(i) for i, n in enumerate(P.names)}
            v = parse_expr(text, ns, P.field)
            return v if isinstance(v, Poly) else P(v.value)
        except ExprSyntaxError as e:
            msg = str(e).rsplit(" at offset", 1)[0]
            if msg.startswith("unknown identifier"):
                self.err(NameErrorDSL, msg, Span(span.line, span.col + e.pos))
            self.err(SyntaxErrorDSL, msg, Span(span.line, span.col + e.pos))
        except (TypeError, ValueError) as e:
            self.err(TypeErrorDSL, str(e), span)

    def groups(self, call: Call, n_min: int, n_max: int):
        g = call.groups
        if not (n_min <= len(g) <= n_max):
            self.err(SyntaxErrorDSL, f"{call.ctor} takes {n_min}..{n_max} ';'-separated groups",
                     call.span)
        return g + [[] for _ in range(n_max - len(g))]

    def single(self, arg: Arg, what: str) -> str:
        if not isinstance(arg.value, str) or not _IDENT.fullmatch(arg.value):
            self.err(SyntaxErrorDSL, f"expected a {what}", arg.span, [what])
        return arg.value

    def keywords(self, args, allowed) -> tuple:
        pos, kw = [], {}
        for a in args:
            if a.key is None:
                pos.append(a)
            elif a.key not in allowed:
                self.err(SyntaxErrorDSL, f"unknown keyword {a.key!r}", a.span, allowed)
            else:
                kw[a.key] = a
        return pos, kw

    def integer(self, arg: Arg) -> int:
        if not isinstance(arg.value, str) or not _INT.fullmatch(arg.value.replace(" ", "")):
            self.err(TypeErrorDSL, "expected an integer", arg.span, ["integer"])
        return int(arg.value.replace(" ", ""))

    # -- items
    def item(self, it):
        if isinstance(it, Command):
            return self.command(it)
        if isinstance(it, MapDecl):
            return self.map_decl(it)
        handler = getattr(self, f"decl_{it.kind}")
        obj = handler(it)
        if isinstance(obj, (DGRing, Derived)):
            obj.name = it.name
        self.declare(it.name, it.kind, obj, it.span)

    def decl_field(self, d: Decl):
        c = d.call
        if c.ctor == "QQ" and not c.groups:
            return make_field("QQ")
        if c.ctor == "Fp":
            g = self.groups(c, 1, 1)[0]
            if len(g) != 1:
                self.err(SyntaxErrorDSL, "Fp takes one argument", c.span, ["prime"])
            p = self.integer(g[0])
            try:
                return make_field(p)
            except ValueError as e:
                self.err(TypeErrorDSL, str(e), g[0].span)
        self.err(SyntaxErrorDSL, f"unknown field constructor {c.ctor!r}", c.span, ["Fp", "QQ"])

    def decl_ring(self, d: Decl):
        c = d.call
        if c.ctor == "poly":
            head, names, opts = self.groups(c, 2, 3)
            if len(head) != 1:
                self.err(SyntaxErrorDSL, "poly takes a field first", c.span, ["field"])
            F = self.lookup(self.single(head[0], "field"), "field", head[0].span)
            vars_ = [self.single(a, "variable") for a in names]
            if len(set(vars_)) != len(vars_):
                self.err(NameErrorDSL, "repeated variable name", c.span)
            _, kw = self.keywords(opts, ["order"])
            order = kw["order"].value if "order" in kw else "grevlex"
            try:
                return QuotientRing(poly_ring(vars_, F, order))
            except (ValueError, KeyError) as e:
                self.err(TypeErrorDSL, str(e), kw["order"].span if "order" in kw else c.span)
        if c.ctor == "quotient":
            head, gens = self.groups(c, 2, 2)
            base = self.lookup(self.single(head[0], "ring"), "ring", head[0].span)
            polys = self.ideal_gens(base, gens)
            return QuotientRing(base.poly, list(base.ideal_gb) + polys)
        self.err(SyntaxErrorDSL, f"unknown ring constructor {c.ctor!r}", c.span, ["poly", "quotient"])

    def ideal_gens(self, base: QuotientRing, args) -> list:
        out = []
        for a in args:
            if isinstance(a.value, str) and self.kinds.get(a.value) == "ideal":
                ring, gens = self.env[a.value]
                if ring.poly != base.poly:
                    self.err(TypeErrorDSL, f"ideal {a.value!r} lives in another ring", a.span)
                out += gens
            else:
                out.append(self.poly(self._text(a), base, a.span))
        return out

    def _text(self, a: Arg) -> str:
        if a.key is not None or not isinstance(a.value, str):
            self.err(SyntaxErrorDSL, "expected an expression", a.span, ["expression"])
        return a.value

    def decl_ideal(self, d: Decl):
        c = d.call
        if c.ctor != "ideal":
            self.err(SyntaxErrorDSL, f"unknown ideal constructor {c.ctor!r}", c.span, ["ideal"])
        head, gens = self.groups(c, 2, 2)
        base = self.lookup(self.single(head[0], "ring"), "ring", head[0].span)
        return (base, self.ideal_gens(base, gens))

    def decl_dgring(self, d: Decl):
        c = d.call
        if c.ctor == "koszul":
            head, elems, opts = self.groups(c, 2, 3)
            base = self.lookup(self.single(head[0], "ring"), "ring", head[0].span)
            _, kw = self.keywords(opts, ["names"])
            names = None
            if "names" in kw:
                v = kw["names"].value
                if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
                    self.err(SyntaxErrorDSL, "names must be a list", kw["names"].span, ["[e1, ...]"])
                names = v
                if len(names) != len(elems):
                    self.err(TypeErrorDSL, "one name per Koszul element", kw["names"].span)
            polys = [base.reduce(self.poly(self._text(a), base, a.span)) for a in elems]
            try:
                return koszul(base, polys, names)
            except ValueError as e:
                self.err(TypeErrorDSL, str(e), c.span)
        if c.ctor == "trivial":
            head, = self.groups(c, 1, 1)
            return trivial(self.lookup(self.single(head[0], "ring"), "ring", head[0].span))
        if c.ctor == "tensor":
            head, = self.groups(c, 1, 1)
            if len(head) != 2:
                self.err(SyntaxErrorDSL, "tensor takes two DG rings", c.span)
            A = self.lookup(self.single(head[0], "dgring"), "dgring", head[0].span)
            B = self.lookup(self.single(head[1], "dgring"), "dgring", head[1].span)
            try:
                return tensor_dgrings(A, B)[0]
            except ValueError as e:
                self.err(TypeErrorDSL, str(e), c.span)
        if c.ctor == "dg":
            head, body = self.groups(c, 2, 2)
            base = self.lookup(self.single(head[0], "ring"), "ring", head[0].span)
            _, kw = self.keywords(body, ["gens", "d"])
            gens = self.gen_list(kw.get("gens"), c.span)
            try:
                A = DGRing(base, gens)
            except ValueError as e:
                self.err(TypeErrorDSL, str(e), kw["gens"].span)
            diffs = {}
            if "d" in kw:
                dv = kw["d"]
                if not isinstance(dv.value, DictLit):
                    self.err(SyntaxErrorDSL, "d must be a map {e -> ...}", dv.span, ["{"])
                for k, expr in dv.value:
                    if k not in A.ext_names:
                        self.err(NameErrorDSL, f"{k!r} is not a generator", dv.span)
                    diffs[k] = self.poly(expr, A, dv.span)
            A.set_differentials({n: diffs.get(n, A.zero()) for n in A.ext_names})
            rep = A.validate()
            if not rep.ok:
                kind, msg = rep.violations[0]
                self.err(TypeErrorDSL, f"{kind}: {msg}", c.span)
            return A
        self.err(SyntaxErrorDSL, f"unknown dgring constructor {c.ctor!r}", c.span,
                 ["dg", "koszul", "tensor", "trivial"])

    def gen_list(self, arg: Arg | None, span: Span) -> list:
        if arg is None:
            self.err(SyntaxErrorDSL, "missing gens=[...]", span, ["gens"])
        v = arg.value
        if not isinstance(v, list):
            self.err(SyntaxErrorDSL, "gens must be a list of (name, degree)", arg.span, ["["])
        out = []
        for t in v:
            if not (isinstance(t, tuple) and len(t) == 2 and isinstance(t[0], str)
                    and _IDENT.fullmatch(t[0]) and isinstance(t[1], str)
                    and _INT.fullmatch(t[1].replace(" ", ""))):
                self.err(SyntaxErrorDSL, "each generator is (name, degree)", arg.span, ["(name, int)"])
            out.append((t[0], int(t[1].replace(" ", ""))))
        names = [n for n, _ in out]
        if len(set(names)) != len(names):
            self.err(NameErrorDSL, "repeated generator name", arg.span)
        return out

    def map_decl(self, m: MapDecl):
        A = self.lookup(m.source, "dgring", m.span)
        B = self.lookup(m.target, "dgring", m.span)
        given = dict(m.images)
        for k in given:
            if k not in A.base.names and k not in A.ext_names:
                self.err(NameErrorDSL, f"{k!r} is not a generator of {m.source}", m.span)
        var_images = []
        for i, n in enumerate(A.base.names):
            if n in given:
                var_images.append(B.base.reduce(self.poly(given[n], B.base, m.span)))
            elif n in B.base.names:
                var_images.append(B.base.reduce(B.base.poly.gen(B.base.names.index(n))))
            else:
                self.err(TypeErrorDSL, f"no image given for {n!r}", m.span)
        ext_images = {}
        for n in A.ext_names:
            if n in given:
                ext_images[n] = self.poly(given[n], B, m.span)
            elif n in B.ext_names:
                ext_images[n] = B.ext_gen(n)
        try:
            f = DGRingMap(A, B, var_images, ext_images, name=m.name)
        except (ValueError, TypeError) as e:
            self.err(TypeErrorDSL, str(e), m.span)
        problems = f.check()
        if problems:
            self.err(TypeErrorDSL, f"not a DG ring map: {problems[0]}", m.span)
        self.declare(m.name, "map", f, m.span)

    def decl_module(self, d: Decl):
        c = d.call
        ctor = c.ctor
        if ctor == "semifree":
            head, body = self.groups(c, 2, 2)
            A = self.lookup(self.single(head[0], "dgring"), "dgring", head[0].span)
            _, kw = self.keywords(body, ["gens", "d"])
            gens = self.gen_list(kw.get("gens"), c.span)
            clash = {n for n, _ in gens} & (set(A.base.names) | set(A.ext_names))
            if clash:
                self.err(NameErrorDSL, f"generator name {sorted(clash)[0]!r} clashes with the ring",
                         kw["gens"].span)
            diff = [{} for _ in gens]
            if "d" in kw:
                dv = kw["d"]
                if not isinstance(dv.value, DictLit):
                    self.err(SyntaxErrorDSL, "d must be a map {m -> ...}", dv.span, ["{"])
                names = [n for n, _ in gens]
                for k, expr in dv.value:
                    if k not in names:
                        self.err(NameErrorDSL, f"{k!r} is not a generator", dv.span)
                    diff[names.index(k)] = self.linear(expr, A, names, dv.span)
            M = SemiFreeModule(A, gens, diff)
            problems = M.degree_problems()
            if problems:
                self.err(TypeErrorDSL, f"differential must raise degree by 1: {problems[0]}",
                         kw["d"].span)
            problems = M.check()
            if problems:
                self.err(TypeErrorDSL, problems[0], kw["d"].span)
            return exact(M)
        if ctor == "free":
            head, opts = self.groups(c, 1, 2)
            A = self.lookup(self.single(head[0], "dgring"), "dgring", head[0].span)
            _, kw = self.keywords(opts + head[1:], ["deg"])
            deg = self.integer(kw["deg"]) if "deg" in kw else 0
            return exact(free_module(A, deg))
        if ctor in ("cyclic", "presented"):
            head, body, opts = self.groups(c, 2, 3)
            A = self.lookup(self.single(head[0], "dgring"), "dgring", head[0].span)
            _, kw = self.keywords(opts, ["deg"])
            deg = self.integer(kw["deg"]) if "deg" in kw else 0
            if ctor == "cyclic":
                polys = self.ideal_gens(A.base, body)
                return exact(cyclic_module(A, polys, deg))
            pos, kw2 = self.keywords(body, ["gens", "rels"])
            if "gens" not in kw2:
                self.err(SyntaxErrorDSL, "missing gens=N", c.span, ["gens"])
            n = self.integer(kw2["gens"])
            rels = []
            if "rels" in kw2:
                rv = kw2["rels"].value
                if not isinstance(rv, list):
                    self.err(SyntaxErrorDSL, "rels must be a list of tuples", kw2["rels"].span, ["["])
                for t in rv:
                    t = t if isinstance(t, tuple) else (t,)
                    if len(t) != n:
                        self.err(TypeErrorDSL, f"each relation needs {n} entries", kw2["rels"].span)
                    vec = {}
                    for j, x in enumerate(t):
                        p = A.base.reduce(self.poly(x, A.base, kw2["rels"].span))
                        for e, cf in p.terms.items():
                            vec[(j, e)] = cf
                    rels.append(vec)
            return exact(presented_module(A, n, rels, deg))
        if ctor == "shift":
            head, = self.groups(c, 1, 1)
            if len(head) != 2:
                self.err(SyntaxErrorDSL, "shift takes a module and an integer", c.span)
            M = self.lookup(self.single(head[0], "module"), "module", head[0].span)
            k = self.integer(head[1])
            if not M.exact:
                self.err(TypeErrorDSL, "only exact modules can be shifted", head[0].span)
            return exact(shift(M.module, k))
        if ctor == "rigid":
            head, = self.groups(c, 1, 1)
            A = self.lookup(self.single(head[0], "dgring"), "dgring", head[0].span)
            from .duality import rigid_dualizing
            from .errors import DGError
            try:
                R = rigid_dualizing(A).R
            except DGError as e:
                self.err(TypeErrorDSL, str(e), head[0].span)
            return Derived(R.ring, R.module, dualizing=True, provenance=list(R.provenance))
        self.err(SyntaxErrorDSL, f"unknown module constructor {ctor!r}", c.span,
                 ["cyclic", "free", "presented", "rigid", "semifree", "shift"])

    def linear(self, text: str, A: DGRing, names: list, span: Span) -> dict:
        ns = {k: _Lin(A, v) for k, v in A.namespace().items()}
        for j, n in enumerate(names):
            ns[n] = _Lin(A, None, {j: A.one()})
        try:
            v = parse_expr(text, ns, A.field)
        except ExprSyntaxError as e:
            msg = str(e).rsplit(" at offset", 1)[0]
            cls = NameErrorDSL if msg.startswith("unknown identifier") else SyntaxErrorDSL
            self.err(cls, msg, span)
        except TypeError as e:
            self.err(TypeErrorDSL, str(e), span)
        if not isinstance(v, _Lin) or v.const:
            self.err(TypeErrorDSL, f"{text!r} is not a combination of generators", span)
        return {j: c for j, c in v.vec.items() if c}

    # -- commands
    def command(self, cmd: Command):
        spans = getattr(cmd, "_arg_spans", None) or [cmd.span] * len(cmd.args)
        if cmd.name == "verify":
            if not cmd.args:
                self.err(SyntaxErrorDSL, "verify needs a family", cmd.span, list(VERIFY_SIGNATURES))
            fam = cmd.args[0]
            if fam not in VERIFY_SIGNATURES:
                self.err(SyntaxErrorDSL, f"unknown verify family {fam!r}", spans[0],
                         list(VERIFY_SIGNATURES))
            sig, args, aspans = VERIFY_SIGNATURES[fam], cmd.args[1:], spans[1:]
        else:
            sig, args, aspans = COMMAND_SIGNATURES[cmd.name], cmd.args, spans
        objs = []
        i = 0
        for want in sig:
            if want.endswith("*"):
                while i < len(args):
                    objs.append(self.lookup(args[i], want[:-1], aspans[i]))
                    i += 1
                break
            if want.endswith("?"):
                if i < len(args):
                    if not _INT.fullmatch(args[i]):
                        self.err(TypeErrorDSL, "expected an integer degree", aspans[i], ["integer"])
                    objs.append(int(args[i]))
                    i += 1
                continue
            if i >= len(args):
                self.err(SyntaxErrorDSL, f"{cmd.name} needs more arguments", cmd.span, [want])
            if _INT.fullmatch(args[i]):
                self.err(TypeErrorDSL, f"expected a {want}, found an integer", aspans[i])
            objs.append(self.lookup(args[i], want, aspans[i]))
            i += 1
        if i < len(args):
            self.err(SyntaxErrorDSL, f"too many arguments to {cmd.name}", aspans[i], ["end of line"])
        cmd._objects = objs

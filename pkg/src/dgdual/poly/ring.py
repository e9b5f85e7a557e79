"""Polynomial rings, monomial orders and the polynomial text syntax."""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from ..field import Field, make_field

MAX_VARS = 16


class RingMismatch(TypeError):
    pass


class MonomialOrder:
    """A term order given by a sort key on exponent tuples (bigger key = bigger monomial).

    ``kind`` is one of ``lex``, ``grevlex``, ``deglex`` or ``block:k``; a block
    order compares the first ``k`` variables by grevlex and breaks ties by
    grevlex on the rest, so it eliminates the first block.
    """

    def __init__(self, kind: str = "grevlex"):
        self.kind = kind
        if kind == "lex":
            self.key = lru_cache(maxsize=None)(lambda e: e)
        elif kind == "deglex":
            self.key = lru_cache(maxsize=None)(lambda e: (sum(e), e))
        elif kind == "grevlex":
            self.key = lru_cache(maxsize=None)(_grevlex)
        elif kind.startswith("block:"):
            k = int(kind.split(":")[1])
            self.key = lru_cache(maxsize=None)(
                lambda e: (_grevlex(e[:k]), _grevlex(e[k:])))
        else:
            raise ValueError(f"unknown monomial order {kind!r}")

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.kind == self.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return self.kind


def _grevlex(e):
    return (sum(e), tuple(-a for a in reversed(e)))


class PolyRing:
    def __init__(self, field: Field, names, order: str | MonomialOrder = "grevlex"):
        names = tuple(names)
        if len(names) > MAX_VARS:
            raise ValueError(f"at most {MAX_VARS} variables supported")
        if len(set(names)) != len(names):
            raise ValueError(f"repeated variable names in {names}")
        self.field = field
        self.names = names
        self.nvars = len(names)
        self.order = order if isinstance(order, MonomialOrder) else MonomialOrder(order)
        self.one_exp = (0,) * self.nvars

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.field == other.field
                and self.names == other.names and self.order == other.order)

    def __hash__(self):
        return hash((self.field, self.names, self.order))

    def __repr__(self):
        return f"{self.field}[{','.join(self.names)}]"

    def with_order(self, order) -> PolyRing:
        return PolyRing(self.field, self.names, order)

    def __call__(self, value) -> Poly:
        if isinstance(value, Poly):
            if value.ring != self:
                if value.ring.names == self.names and value.ring.field == self.field:
                    return Poly(self, value.terms)
                raise RingMismatch(f"{value.ring} vs {self}")
            return value
        if isinstance(value, str):
            return parse_poly(value, self)
        c = self.field.convert(value)
        return Poly(self, {self.one_exp: c} if c != 0 else {})

    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return Poly(self, {self.one_exp: self.field.one})

    def gen(self, i) -> Poly:
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exp, coeff=None) -> Poly:
        c = self.field.one if coeff is None else coeff
        return Poly(self, {tuple(exp): c} if c != 0 else {})


class Poly:
    """Sparse polynomial: ``terms`` maps exponent tuples to nonzero raw field values."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        return self.ring(other)

    def __add__(self, other):
        if not isinstance(other, _COERCIBLE):
            return NotImplemented
        other = self._coerce(other)
        return Poly(self.ring, add_terms(self.terms, other.terms, self.ring.field))

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Poly(self.ring, {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, _COERCIBLE):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, _COERCIBLE):
            return NotImplemented
        other = self._coerce(other)
        return Poly(self.ring, mul_terms(self.terms, other.terms, self.ring.field))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring(other).terms
        except (TypeError, ValueError):
            return False

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def sorted_terms(self):
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def lead_exp(self):
        return max(self.terms, key=self.ring.order.key)

    def lead_coeff(self):
        return self.terms[self.lead_exp()]

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def monic(self) -> Poly:
        if not self.terms:
            return self
        f = self.ring.field
        inv = f.inv(self.lead_coeff())
        return Poly(self.ring, {e: f.mul(c, inv) for e, c in self.terms.items()})

    def scale(self, c) -> Poly:
        if c == 0:
            return self.ring.zero()
        mul = self.ring.field.mul
        return Poly(self.ring, {e: mul(v, c) for e, v in self.terms.items()})

    def constant_term(self):
        return self.terms.get(self.ring.one_exp, self.ring.field.zero)

    def diff(self, i: int) -> Poly:
        f = self.ring.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                v = f.mul(c, f.convert(e[i]))
                if v != 0:
                    out[ne] = v
        return Poly(self.ring, out)

    def substitute(self, images, target: PolyRing) -> Poly:
        """Evaluate with variable i replaced by ``images[i]`` (Polys of ``target``)."""
        result = target.zero()
        powers = [dict() for _ in images]
        for e, c in self.terms.items():
            term = target(c)
            for i, a in enumerate(e):
                if a:
                    p = powers[i].get(a)
                    if p is None:
                        p = powers[i][a] = images[i] ** a
                    term = term * p
            result = result + term
        return result

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({self})"


_COERCIBLE = (Poly, int, Fraction)


def add_terms(a: dict, b: dict, field) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    add = field.add
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = c
        else:
            v = add(v, c)
            if v == 0:
                del out[e]
            else:
                out[e] = v
    return out


def mul_terms(a: dict, b: dict, field) -> dict:
    out: dict = {}
    add, mul = field.add, field.mul
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e)
            c = mul(c1, c2)
            if v is None:
                out[e] = c
            else:
                v = add(v, c)
                if v == 0:
                    del out[e]
                else:
                    out[e] = v
    return {e: c for e, c in out.items() if c != 0}


def format_monomial(e, names) -> str:
    parts = []
    for n, a in zip(names, e):
        if a == 1:
            parts.append(n)
        elif a > 1:
            parts.append(f"{n}^{a}")
    return "*".join(parts)


def format_terms(sorted_terms, names, field) -> str:
    if not sorted_terms:
        return "0"
    out = []
    for e, c in sorted_terms:
        s = field.to_str(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        mono = format_monomial(e, names)
        if mono:
            body = mono if s == "1" else f"{s}*{mono}"
        else:
            body = s
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def format_poly(p: Poly) -> str:
    return format_terms(p.sorted_terms(), p.ring.names, p.ring.field)


# ---------------------------------------------------------------- text syntax

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9']*)|(\*\*|[-+*^()]))")


class ExprSyntaxError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos


def tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("num", num, start))
        elif name is not None:
            tokens.append(("name", name, start))
        else:
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    return tokens


def parse_expr(text: str, namespace: dict, field: Field, unknown=None):
    """Evaluate an arithmetic expression over objects in ``namespace``.

    Grammar: sums of products of powers of atoms; atoms are numbers (field
    literals, ``a/b`` allowed), identifiers, or parenthesized expressions.
    Objects only need ``+``, ``-``, ``*`` and ``**`` with field scalars.
    """
    tokens = tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("end", None, len(text))

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def atom():
        kind, val, at = take()
        if kind == "num":
            return _Scalar(field.from_literal(val))
        if kind == "name":
            if val in namespace:
                return namespace[val]
            if unknown is not None:
                return unknown(val, at)
            raise ExprSyntaxError(f"unknown identifier {val!r}", at)
        if val == "(":
            v = expr()
            k2, v2, at2 = take()
            if v2 != ")":
                raise ExprSyntaxError("expected ')'", at2)
            return v
        if val == "-":
            return _neg(power(), field)
        raise ExprSyntaxError(f"unexpected token {val!r}", at)

    def power():
        base = atom()
        if peek()[1] == "^":
            take()
            kind, val, at = take()
            if kind != "num" or "/" in val:
                raise ExprSyntaxError("exponent must be a non-negative integer", at)
            n = int(val)
            if isinstance(base, _Scalar):
                v = field.one
                for _ in range(n):
                    v = field.mul(v, base.value)
                return _Scalar(v)
            return base ** n
        return base

    def product():
        v = power()
        while peek()[1] == "*" or peek()[0] in ("name", "num") or peek()[1] == "(":
            if peek()[1] == "*":
                take()
            v = _mul(v, power(), field)
        return v

    def expr():
        if peek()[1] in ("-", "+"):
            sign = take()[1]
            v = product()
            if sign == "-":
                v = _neg(v, field)
        else:
            v = product()
        while peek()[1] in ("+", "-"):
            op = take()[1]
            rhs = product()
            v = _add(v, rhs, field) if op == "+" else _add(v, _neg(rhs, field), field)
        return v

    result = expr()
    kind, val, at = peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected token {val!r}", at)
    return result


class _Scalar:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


def _neg(a, field):
    if isinstance(a, _Scalar):
        return _Scalar(field.neg(a.value))
    return -a


def _add(a, b, field):
    if isinstance(a, _Scalar) and isinstance(b, _Scalar):
        return _Scalar(field.add(a.value, b.value))
    if isinstance(a, _Scalar):
        a, b = b, a
    if isinstance(b, _Scalar):
        return a + b.value
    return a + b


def _mul(a, b, field):
    if isinstance(a, _Scalar) and isinstance(b, _Scalar):
        return _Scalar(field.mul(a.value, b.value))
    if isinstance(a, _Scalar):
        a, b = b, a
    if isinstance(b, _Scalar):
        return a * b.value
    return a * b


def parse_poly(text: str, ring: PolyRing) -> Poly:
    ns = {n: ring.gen(i) for i, n in enumerate(ring.names)}
    v = parse_expr(text, ns, ring.field)
    if isinstance(v, _Scalar):
        return ring(v.value)
    return v


def poly_ring(names, field=None, order="grevlex") -> PolyRing:
    if isinstance(names, str):
        names = [n.strip() for n in names.split(",") if n.strip()]
    return PolyRing(field if isinstance(field, Field) else make_field(field), names, order)

"""Exact base fields: prime fields F_p and the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DEFAULT_PRIME = 32003

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class DivisionByZero(ZeroDivisionError):
    pass


class FieldMismatch(TypeError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Raw-value arithmetic shared by polynomial code.

    Values handed around internally are plain ints (F_p) or Fractions (QQ);
    :class:`FieldElem` wraps them for the public API.
    """

    characteristic: int
    name: str

    def __call__(self, value) -> FieldElem:
        return FieldElem(self.convert(value), self)

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class PrimeField(Field):
    def __init__(self, p: int = DEFAULT_PRIME):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"Fp({p})"
        self.zero, self.one = 0, 1

    def convert(self, value):
        if isinstance(value, Fraction):
            return self.div(value.numerator % self.p, value.denominator % self.p)
        return int(value) % self.p

    def from_literal(self, text: str):
        if "/" in text:
            num, den = text.split("/")
            return self.div(int(num) % self.p, int(den) % self.p)
        return int(text) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero(f"inverse of 0 in {self.name}")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def to_str(self, a) -> str:
        # symmetric representative reads better in printed polynomials
        return str(a - self.p) if a > self.p // 2 else str(a)


class RationalField(Field):
    def __init__(self):
        self.characteristic = 0
        self.name = "QQ"
        self.zero, self.one = Fraction(0), Fraction(1)

    def convert(self, value):
        return Fraction(value)

    def from_literal(self, text: str):
        return Fraction(text)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0 in QQ")
        return 1 / a

    def div(self, a, b):
        return a * self.inv(b)

    def to_str(self, a) -> str:
        return str(a)


QQ = RationalField()


@dataclass(frozen=True)
class FieldElem:
    value: object
    field: Field

    def _check(self, other) -> FieldElem:
        if not isinstance(other, FieldElem):
            return FieldElem(self.field.convert(other), self.field)
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElem(self.field.add(self.value, other.value), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return FieldElem(self.field.sub(self.value, other.value), self.field)

    def __mul__(self, other):
        other = self._check(other)
        return FieldElem(self.field.mul(self.value, other.value), self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(self.field.neg(self.value), self.field)

    def __truediv__(self, other):
        other = self._check(other)
        return FieldElem(self.field.div(self.value, other.value), self.field)

    def inverse(self) -> FieldElem:
        return FieldElem(self.field.inv(self.value), self.field)

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self):
        return self.field.to_str(self.value)


def field_inv(a: FieldElem) -> FieldElem:
    return a.inverse()


def field_arith(a: FieldElem, b: FieldElem | None, op: str) -> FieldElem:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown field operation {op!r}")


def make_field(spec: str | int | None = None) -> Field:
    """``None`` -> F_32003, an int p -> F_p, ``"QQ"`` -> rationals."""
    if spec is None:
        return PrimeField(DEFAULT_PRIME)
    if isinstance(spec, int):
        return PrimeField(spec)
    if spec.upper() in ("QQ", "Q"):
        return QQ
    return PrimeField(int(spec))

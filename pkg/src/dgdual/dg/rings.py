"""Non-positive commutative DG rings presented as A0[e_1..e_r] with odd exterior generators."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from ..field import Field
from ..poly.modules import QuotientRing, RingMap
from ..poly.ring import Poly, PolyRing, _COERCIBLE, format_terms, parse_expr


class DegreeMismatch(ValueError):
    pass


class BaseMismatch(ValueError):
    pass


class NotAChainMap(ValueError):
    pass


def popcount(n: int) -> int:
    return bin(n).count("1")


def ext_sign(S: int, T: int) -> int:
    """Sign of e_S * e_T rewritten as e_{S|T} (0 when they share a generator)."""
    if S & T:
        return 0
    inv = 0
    t = T
    while t:
        low = t & -t
        j = low.bit_length() - 1
        inv += popcount(S >> (j + 1))
        t ^= low
    return -1 if inv & 1 else 1


def bits(S: int):
    i = 0
    while S:
        if S & 1:
            yield i
        S >>= 1
        i += 1


class DGElem:
    """Element sum_S c_S e_S of a DG ring; ``terms`` maps bitmasks to nonzero Polys in NF."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: DGRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def _coerce(self, other) -> DGElem:
        if isinstance(other, DGElem):
            if other.ring is not self.ring and other.ring != self.ring:
                raise BaseMismatch(f"{other.ring} vs {self.ring}")
            return other
        if isinstance(other, Poly):
            return self.ring.scalar(other)
        return self.ring.scalar(self.ring.base.poly(other))

    def __add__(self, other):
        if not isinstance(other, (DGElem,) + _COERCIBLE):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self.terms)
        for S, c in other.terms.items():
            v = out.get(S)
            v = c if v is None else v + c
            if v.terms:
                out[S] = v
            else:
                out.pop(S, None)
        return DGElem(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return DGElem(self.ring, {S: -c for S, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (DGElem,) + _COERCIBLE):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (DGElem,) + _COERCIBLE):
            return NotImplemented
        other = self._coerce(other)
        out: dict = {}
        reduce = self.ring.base.reduce
        for S, a in self.terms.items():
            for T, b in other.terms.items():
                sg = ext_sign(S, T)
                if not sg:
                    continue
                c = a * b
                if sg < 0:
                    c = -c
                U = S | T
                out[U] = out[U] + c if U in out else c
        out = {U: reduce(c) for U, c in out.items()}
        return DGElem(self.ring, {U: c for U, c in out.items() if c.terms})

    def __rmul__(self, other):
        # scalars and degree-0 polynomials are central
        return self.__mul__(other)

    def __pow__(self, n: int):
        result = self.ring.one()
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c) -> DGElem:
        return self * c

    def __eq__(self, other):
        if not isinstance(other, DGElem):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return False
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {self.ring.mono_degree(S) for S in self.terms}

    def degree(self):
        """The degree if homogeneous (0 for the zero element), else None."""
        ds = self.degrees()
        if not ds:
            return 0
        return ds.pop() if len(ds) == 1 else None

    def component(self, deg: int) -> DGElem:
        md = self.ring.mono_degree
        return DGElem(self.ring, {S: c for S, c in self.terms.items() if md(S) == deg})

    def coeff(self, S: int) -> Poly:
        return self.terms.get(S, self.ring.base.poly.zero())

    def d(self) -> DGElem:
        return self.ring.d(self)

    def __str__(self):
        if not self.terms:
            return "0"
        base = self.ring.base.poly
        names = self.ring.ext_names
        parts = []
        for S in sorted(self.terms, key=lambda S: (popcount(S), S)):
            c = self.terms[S]
            mono = "*".join(names[i] for i in bits(S))
            if not mono:
                parts.append(format_terms(c.sorted_terms(), base.names, base.field))
                continue
            if len(c.terms) == 1:
                cs = format_terms(c.sorted_terms(), base.names, base.field)
                if cs == "1":
                    parts.append(mono)
                elif cs == "-1":
                    parts.append("-" + mono)
                else:
                    parts.append(f"{cs}*{mono}")
            else:
                parts.append(f"({format_terms(c.sorted_terms(), base.names, base.field)})*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"DGElem({self})"


@dataclass
class ValidationReport:
    ok: bool
    violations: list = dc_field(default_factory=list)   # (kind, message)

    def __bool__(self):
        return self.ok


class DGRing:
    """A0[e_1..e_r] with odd negative-degree exterior generators and a differential.

    ``diffs`` maps each exterior generator name to its differential, given as
    a DGElem or as text; set later with :meth:`set_differentials` if the
    differentials refer to the ring itself.
    """

    def __init__(self, base: QuotientRing, ext=(), diffs=None, name: str | None = None):
        self.base = base
        self.ext = [(n, int(d)) for n, d in ext]
        self.ext_names = [n for n, _ in self.ext]
        self.ext_degs = [d for _, d in self.ext]
        self.name = name
        if set(self.ext_names) & set(base.names):
            raise ValueError("exterior generator names clash with variables")
        self._d_cache: dict = {}
        self.diffs: list = [self.zero() for _ in self.ext]
        if diffs:
            self.set_differentials(diffs)

    # -- structure
    @property
    def field(self) -> Field:
        return self.base.field

    @property
    def nvars(self) -> int:
        return self.base.nvars

    @property
    def next(self) -> int:
        return len(self.ext)

    @cached_property
    def amplitude(self) -> int:
        """s with A^natural concentrated in degrees [-s, 0]."""
        return -sum(self.ext_degs)

    def mono_degree(self, S: int) -> int:
        return sum(self.ext_degs[i] for i in bits(S))

    @cached_property
    def monomials_by_degree(self) -> dict:
        out: dict = {}
        for S in range(1 << len(self.ext)):
            out.setdefault(self.mono_degree(S), []).append(S)
        return out

    def monomials_of_degree(self, deg: int):
        return self.monomials_by_degree.get(deg, [])

    def __eq__(self, other):
        return (isinstance(other, DGRing) and self.base == other.base and self.ext == other.ext
                and [d.terms for d in self.diffs] == [d.terms for d in other.diffs])

    def __hash__(self):
        return hash((self.base, tuple(self.ext)))

    def __repr__(self):
        if self.name:
            return self.name
        if not self.ext:
            return repr(self.base)
        gens = ", ".join(f"{n}:{d}" for n, d in self.ext)
        return f"{self.base}<{gens}>"

    def describe(self) -> str:
        lines = [f"base {self.base}"]
        for (n, deg), dn in zip(self.ext, self.diffs):
            lines.append(f"  {n} (deg {deg}), d{n} = {dn}")
        return "\n".join(lines)

    # -- elements
    def zero(self) -> DGElem:
        return DGElem(self, {})

    def one(self) -> DGElem:
        return self.scalar(self.base.poly.one())

    def scalar(self, p) -> DGElem:
        if not isinstance(p, Poly):
            p = self.base.poly(p)
        p = self.base.reduce(self.base.poly(p))
        return DGElem(self, {0: p} if p.terms else {})

    def ext_gen(self, i) -> DGElem:
        if isinstance(i, str):
            i = self.ext_names.index(i)
        return DGElem(self, {1 << i: self.base.poly.one()})

    def monomial(self, S: int, coeff: Poly | None = None) -> DGElem:
        c = self.base.poly.one() if coeff is None else self.base.reduce(coeff)
        return DGElem(self, {S: c} if c.terms else {})

    def namespace(self) -> dict:
        ns = {n: self.scalar(self.base.poly.gen(i)) for i, n in enumerate(self.base.names)}
        ns.update({n: self.ext_gen(i) for i, n in enumerate(self.ext_names)})
        return ns

    def __call__(self, value) -> DGElem:
        if isinstance(value, DGElem):
            return value
        if isinstance(value, str):
            v = parse_expr(value, self.namespace(), self.field)
            return v if isinstance(v, DGElem) else self.scalar(self.base.poly(v.value))
        return self.scalar(value)

    def set_differentials(self, diffs: dict):
        out = []
        for n in self.ext_names:
            v = diffs.get(n, self.zero())
            out.append(self(v) if not isinstance(v, DGElem) else DGElem(self, v.terms))
        self.diffs = out
        self._d_cache = {}

    # -- differential
    def d_mono(self, S: int) -> DGElem:
        """d(e_S) by the Leibniz rule, peeling the lowest generator."""
        if S == 0:
            return self.zero()
        hit = self._d_cache.get(S)
        if hit is not None:
            return hit
        low = S & -S
        i = low.bit_length() - 1
        rest = S ^ low
        ei = self.ext_gen(i)
        rest_e = self.monomial(rest)
        # ext generators are odd, so d(e_i * r) = d(e_i) r - e_i d(r)
        val = self.diffs[i] * rest_e - ei * self.d_mono(rest)
        self._d_cache[S] = val
        return val

    def d(self, a: DGElem) -> DGElem:
        out = self.zero()
        for S, c in a.terms.items():
            if S:
                out = out + self.d_mono(S) * c
        return out

    def validate(self) -> ValidationReport:
        violations = []
        for (n, deg), dn in zip(self.ext, self.diffs):
            if deg >= 0 or deg % 2 == 0:
                violations.append(("DegreeMismatch", f"{n} has degree {deg}; need odd and <= -1"))
                continue
            ds = dn.degrees()
            if ds and ds != {deg + 1}:
                violations.append(("DegreeMismatch",
                                   f"d({n}) = {dn} has degree(s) {sorted(ds)}, expected {deg + 1}"))
        if violations:
            return ValidationReport(False, violations)
        for i, n in enumerate(self.ext_names):
            dd = self.d(self.diffs[i])
            if dd:
                violations.append(("DSquareNonzero", f"d(d({n})) = {dd}"))
        for i in range(len(self.ext)):
            for j in range(i + 1, len(self.ext)):
                ei, ej = self.ext_gen(i), self.ext_gen(j)
                lhs = self.d(ei * ej)
                rhs = self.diffs[i] * ej - ei * self.diffs[j]
                if lhs != rhs:
                    violations.append(("LeibnizFailure",
                                       f"d({self.ext_names[i]}*{self.ext_names[j]})"))
                if self.d(ej * ei) != -lhs:
                    violations.append(("LeibnizFailure",
                                       f"graded commutativity of {self.ext_names[i]}, {self.ext_names[j]}"))
        for S in range(1, 1 << len(self.ext)):
            if self.d(self.d_mono(S)):
                violations.append(("DSquareNonzero", f"d^2 on monomial {S:b}"))
                break
        return ValidationReport(not violations, violations)

    # -- derived data
    def hbar_ideal(self) -> list:
        """Degree-0 parts of d(e) for degree -1 generators: A-bar = A0 / (these)."""
        return [dn.coeff(0) for (n, deg), dn in zip(self.ext, self.diffs) if deg == -1 and dn.coeff(0)]

    def hbar(self) -> QuotientRing:
        return QuotientRing(self.base.poly, list(self.base.ideal_gb) + self.hbar_ideal())


def validate_dg_ring(A: DGRing) -> ValidationReport:
    return A.validate()


def koszul(base: QuotientRing, elements, names=None) -> DGRing:
    """Koszul DG ring K(A0; f_1..f_r): generators e_i of degree -1 with d(e_i) = f_i."""
    elements = [base(f) if not isinstance(f, Poly) else base.reduce(f) for f in elements]
    if names is None:
        names = [f"e{i + 1}" for i in range(len(elements))] if len(elements) > 1 else ["e"]
    A = DGRing(base, [(n, -1) for n in names])
    A.set_differentials({n: A.scalar(f) for n, f in zip(names, elements)})
    return A


def trivial(base: QuotientRing) -> DGRing:
    return DGRing(base)


class DGRingMap:
    """DG ring map given on variables (degree-0 images) and exterior generators."""

    def __init__(self, source: DGRing, target: DGRing, var_images, ext_images=None, name=None):
        self.source = source
        self.target = target
        self.name = name
        self.var_images = [target.base(v) if not isinstance(v, Poly) else target.base.reduce(v)
                           for v in var_images]
        if len(self.var_images) != source.nvars:
            raise ValueError("need one image per source variable")
        ext_images = ext_images or {}
        if isinstance(ext_images, (list, tuple)):
            ext_images = dict(zip(source.ext_names, ext_images))
        self.ext_images = [target(ext_images.get(n, target.zero())) for n in source.ext_names]
        self.base_map = RingMap(source.base, target.base, self.var_images)
        self._mono_cache: dict = {}

    def __repr__(self):
        return self.name or f"{self.source} -> {self.target}"

    def map_poly(self, p: Poly) -> Poly:
        return self.base_map(p)

    def map_mono(self, S: int) -> DGElem:
        hit = self._mono_cache.get(S)
        if hit is None:
            hit = self.target.one()
            for i in bits(S):
                hit = hit * self.ext_images[i]
            self._mono_cache[S] = hit
        return hit

    def __call__(self, a: DGElem) -> DGElem:
        out = self.target.zero()
        for S, c in a.terms.items():
            out = out + self.map_mono(S) * self.target.scalar(self.map_poly(c))
        return out

    def check(self) -> list:
        problems = []
        for n, deg, im in zip(self.source.ext_names, self.source.ext_degs, self.ext_images):
            if im and im.degrees() != {deg}:
                problems.append(f"image of {n} has wrong degree")
        for i, n in enumerate(self.source.ext_names):
            lhs = self.target.d(self.ext_images[i])
            rhs = self(self.source.diffs[i])
            if lhs != rhs:
                problems.append(f"map does not commute with d on {n}")
        return problems

    def is_identity(self) -> bool:
        return (self.source == self.target
                and all(str(v) == n for v, n in zip(self.var_images, self.source.base.names))
                and all(im == self.target.ext_gen(i) for i, im in enumerate(self.ext_images)))

    def variable_section(self):
        """For each target variable, a source variable mapping exactly onto it, or None."""
        out = []
        for j in range(self.target.nvars):
            yj = self.target.base.reduce(self.target.base.poly.gen(j))
            hit = next((i for i, v in enumerate(self.var_images) if v == yj), None)
            if hit is None:
                return None
            out.append(hit)
        return out

    def ext_section(self):
        """For each target exterior generator, a source generator mapping onto it, or None."""
        out = []
        for j in range(len(self.target.ext)):
            ej = self.target.ext_gen(j)
            hit = next((i for i, v in enumerate(self.ext_images) if v == ej), None)
            out.append(hit)
        return out

    @cached_property
    def is_cohomologically_finite(self) -> bool:
        """Whether H0 of the target is module-finite over H0 of the source."""
        from ..poly.groebner import buchberger
        A, B = self.source, self.target
        nb, na = B.nvars, A.nvars
        names = [f"_b{j}" for j in range(nb)] + [f"_a{i}" for i in range(na)]
        R = PolyRing(B.field, names, f"block:{nb}")
        ys = R.gens()[:nb]
        xs = R.gens()[nb:]
        gens = [g.substitute(ys, R) for g in B.hbar().ideal_gb]
        gens += [xs[i] - self.var_images[i].substitute(ys, R) for i in range(na)]
        gb = buchberger(gens)
        for j in range(nb):
            if not any(g.lead_exp()[j] > 0 and all(a == 0 for k, a in enumerate(g.lead_exp()[:nb]) if k != j)
                       for g in gb):
                return False
        return True

    @cached_property
    def is_supported_smooth(self) -> bool:
        """Target = source tensor a polynomial extension of the degree-0 part."""
        return smooth_extension_vars(self) is not None

    def compose(self, other: DGRingMap) -> DGRingMap:
        """self after other."""
        if other.target != self.source:
            raise BaseMismatch("maps are not composable")
        return DGRingMap(other.source, self.target,
                         [self.map_poly(v) for v in other.var_images],
                         [self(e) for e in other.ext_images])


def smooth_extension_vars(f: DGRingMap):
    """Indices of the adjoined target variables when f is a polynomial extension, else None."""
    A, B = f.source, f.target
    if A.ext_names != B.ext_names or A.ext_degs != B.ext_degs:
        return None
    if any(im != B.ext_gen(i) for i, im in enumerate(f.ext_images)):
        return None
    if not set(A.base.names) <= set(B.base.names):
        return None
    for n, v in zip(A.base.names, f.var_images):
        if v != B.base.poly.gen(n):
            return None
    extra = [j for j, n in enumerate(B.base.names) if n not in A.base.names]
    # ideals must agree: extend the source ideal and compare reduced bases
    images = [B.base.poly.gen(n) for n in A.base.names]
    extended = QuotientRing(B.base.poly, [g.substitute(images, B.base.poly) for g in A.base.ideal_gb])
    if extended.ideal_gb != B.base.ideal_gb:
        return None
    for i, dn in enumerate(B.diffs):
        if f(A.diffs[i]) != dn:
            return None
    return extra


def identity_map(A: DGRing) -> DGRingMap:
    return DGRingMap(A, A, A.base.poly.gens(), [A.ext_gen(i) for i in range(len(A.ext))])


def _fresh(name: str, taken: set) -> str:
    new = name + "'"
    while new in taken:
        new += "'"
    return new


def tensor_dgrings(A: DGRing, B: DGRing, rename_all: bool = False):
    """A tensor_k B with B's names renamed on clash; returns (C, iota_A, iota_B)."""
    if A.field != B.field:
        raise BaseMismatch(f"{A.field} vs {B.field}")
    taken = set(A.base.names) | set(A.ext_names)
    bvars, bext = [], []
    for n in B.base.names:
        m = _fresh(n, taken) if (rename_all or n in taken) else n
        taken.add(m)
        bvars.append(m)
    for n in B.ext_names:
        m = _fresh(n, taken) if (rename_all or n in taken) else n
        taken.add(m)
        bext.append(m)
    names = list(A.base.names) + bvars
    P = PolyRing(A.field, names, A.base.poly.order)
    na = A.nvars
    ax = P.gens()[:na]
    bx = P.gens()[na:]
    ideal = [g.substitute(ax, P) for g in A.base.ideal_gb] + [g.substitute(bx, P) for g in B.base.ideal_gb]
    C = DGRing(QuotientRing(P, ideal), list(A.ext) + [(m, d) for m, (_, d) in zip(bext, B.ext)])
    iA = DGRingMap(A, C, ax, [C.ext_gen(i) for i in range(len(A.ext))])
    iB = DGRingMap(B, C, bx, [C.ext_gen(len(A.ext) + i) for i in range(len(B.ext))])
    diffs = {}
    for i, n in enumerate(A.ext_names):
        diffs[n] = iA(A.diffs[i])
    for i, n in enumerate(bext):
        diffs[n] = iB(B.diffs[i])
    C.set_differentials(diffs)
    # maps were built before the differentials were known; rebuild for consistency
    iA = DGRingMap(A, C, ax, [C.ext_gen(i) for i in range(len(A.ext))])
    iB = DGRingMap(B, C, bx, [C.ext_gen(len(A.ext) + i) for i in range(len(B.ext))])
    return C, iA, iB


def enveloping(A: DGRing):
    """(A^e = A tensor_k A, mu: A^e -> A, iota_1, iota_2)."""
    Ae, i1, i2 = tensor_dgrings(A, A, rename_all=True)
    gens = A.base.poly.gens()
    mu = DGRingMap(Ae, A, gens + gens,
                   [A.ext_gen(i) for i in range(len(A.ext))] * 2)
    return Ae, mu, i1, i2


def pushout(f: DGRingMap, g: DGRingMap):
    """B tensor_A C for g: A -> C adjoining free variables and exterior generators.

    Returns (D, h: B -> D, f': C -> D). Raises NotKFlat unless C is A with
    new polynomial variables and new exterior generators and no new relations.
    """
    from ..errors import NotKFlat
    A, B, C = f.source, f.target, g.target
    if g.source != A:
        raise BaseMismatch("maps do not share a source")
    vsec = [None] * C.nvars
    for i, v in enumerate(g.var_images):
        hit = [j for j in range(C.nvars) if v == C.base.poly.gen(j)]
        if len(hit) != 1:
            raise NotKFlat("C must contain the variables of A unchanged")
        vsec[hit[0]] = i
    esec = [None] * len(C.ext)
    for i, v in enumerate(g.ext_images):
        hit = [j for j in range(len(C.ext)) if v == C.ext_gen(j)]
        if len(hit) != 1:
            raise NotKFlat("C must contain the exterior generators of A unchanged")
        esec[hit[0]] = i
    # no relations beyond those of A
    P_C = C.base.poly
    pulled = QuotientRing(P_C, [gg.substitute(g.var_images, P_C) for gg in A.base.ideal_gb])
    if pulled.ideal_gb != C.base.ideal_gb:
        raise NotKFlat("C has relations not coming from A; it is not semi-free over A")
    new_vars = [j for j in range(C.nvars) if vsec[j] is None]
    new_ext = [j for j in range(len(C.ext)) if esec[j] is None]
    taken = set(B.base.names) | set(B.ext_names)
    vnames, enames = [], []
    for j in new_vars:
        n = C.base.names[j]
        m = _fresh(n, taken) if n in taken else n
        taken.add(m)
        vnames.append(m)
    for j in new_ext:
        n = C.ext_names[j]
        m = _fresh(n, taken) if n in taken else n
        taken.add(m)
        enames.append(m)
    P = PolyRing(B.field, list(B.base.names) + vnames, B.base.poly.order)
    bx = P.gens()[:B.nvars]
    ideal = [gg.substitute(bx, P) for gg in B.base.ideal_gb]
    D = DGRing(QuotientRing(P, ideal),
               list(B.ext) + [(m, C.ext_degs[j]) for m, j in zip(enames, new_ext)])
    h = DGRingMap(B, D, bx, [D.ext_gen(i) for i in range(len(B.ext))])
    # f' on variables: old ones via f (then h), new ones to themselves
    cvar_images = []
    for j in range(C.nvars):
        if vsec[j] is not None:
            cvar_images.append(h.map_poly(f.var_images[vsec[j]]))
        else:
            cvar_images.append(P.gen(len(B.base.names) + new_vars.index(j)))
    cext_images = []
    for j in range(len(C.ext)):
        if esec[j] is not None:
            cext_images.append(h(f.ext_images[esec[j]]))
        else:
            cext_images.append(D.ext_gen(len(B.ext) + new_ext.index(j)))
    fp = DGRingMap(C, D, cvar_images, cext_images)
    diffs = {n: h(B.diffs[i]) for i, n in enumerate(B.ext_names)}
    for m, j in zip(enames, new_ext):
        diffs[m] = fp(C.diffs[j])
    D.set_differentials(diffs)
    h = DGRingMap(B, D, bx, [D.ext_gen(i) for i in range(len(B.ext))])
    fp = DGRingMap(C, D, cvar_images, [D.ext_gen(len(B.ext) + new_ext.index(j)) if esec[j] is None
                                       else h(f.ext_images[esec[j]]) for j in range(len(C.ext))])
    flat_amplitude = -sum(C.ext_degs[j] for j in new_ext)
    return D, h, fp, flat_amplitude

"""Quotient rings, finitely presented modules and syzygy computations."""

from __future__ import annotations

from functools import cached_property
from itertools import product

from .groebner import (
    Reducer, groebner_vecs, lead, module_key, poly_to_vec, vec_to_poly,
)
from .ring import Poly, PolyRing, RingMismatch, format_terms

INFINITE = "infinite"


class QuotientRing:
    """k[x1..xn]/I with the reduced Groebner basis of I in the ring's order."""

    def __init__(self, poly: PolyRing, ideal=()):
        self.poly = poly
        gens = [poly(g) for g in ideal]
        basis = groebner_vecs([poly_to_vec(g) for g in gens if g], poly)
        self.ideal_gb = [vec_to_poly(b, poly) for b in basis]
        self._red = Reducer(basis, poly)

    @property
    def field(self):
        return self.poly.field

    @property
    def names(self):
        return self.poly.names

    @property
    def nvars(self):
        return self.poly.nvars

    def __eq__(self, other):
        return (isinstance(other, QuotientRing) and self.poly == other.poly
                and self.ideal_gb == other.ideal_gb)

    def __hash__(self):
        return hash((self.poly, tuple(self.ideal_gb)))

    def __repr__(self):
        if not self.ideal_gb:
            return repr(self.poly)
        return f"{self.poly}/({', '.join(map(str, self.ideal_gb))})"

    def __call__(self, value) -> Poly:
        return self.reduce(self.poly(value))

    def reduce(self, p: Poly) -> Poly:
        if not self.ideal_gb or not p.terms:
            return p
        return vec_to_poly(self._red(poly_to_vec(p)), self.poly)

    def reduce_vec(self, v: dict) -> dict:
        """Reduce each component of a module element modulo the ideal."""
        if not self.ideal_gb or not v:
            return v
        by_pos = {}
        for (p, e), c in v.items():
            by_pos.setdefault(p, {})[(0, e)] = c
        out = {}
        for p, comp in by_pos.items():
            for (_, e), c in self._red(comp).items():
                out[(p, e)] = c
        return out

    def is_polynomial(self) -> bool:
        return not self.ideal_gb

    def ideal_vecs(self, rank: int, offset: int = 0) -> list:
        return [{(offset + j, e): c for e, c in g.terms.items()}
                for j in range(rank) for g in self.ideal_gb]

    def is_artinian(self) -> bool:
        return ModulePres(self, 1, []).k_dimension() != INFINITE


def as_quotient(ring) -> QuotientRing:
    return ring if isinstance(ring, QuotientRing) else QuotientRing(ring)


# ------------------------------------------------------------ free-module maps

def kernel(columns, target_rank: int, target_relations, ring: QuotientRing) -> list:
    """Generators (a Groebner basis) of ``{v in R^a : sum v_i col_i in U}``.

    ``columns`` are the images of the ``a`` source basis vectors in R^b, ``U``
    is spanned by ``target_relations`` and the ring ideal. Computed by the
    usual elimination trick on graph vectors (col_i, e_i).
    """
    b = target_rank
    a = len(columns)
    if a == 0:
        return []
    P = ring.poly
    one = P.field.one
    gens = []
    for i, col in enumerate(columns):
        g = dict(col)
        g[(b + i, P.one_exp)] = one
        gens.append(g)
    gens.extend(r for r in target_relations if r)
    gens.extend(ring.ideal_vecs(b))
    key = module_key(P, [0] * b + [1] * a)
    basis = groebner_vecs(gens, P, key)
    out = []
    for v in basis:
        if lead(v, key)[0] >= b:
            out.append({(p - b, e): c for (p, e), c in v.items()})
    return out


def submodule_gb(gens, rank: int, ring: QuotientRing) -> list:
    return groebner_vecs(list(gens) + ring.ideal_vecs(rank), ring.poly)


def select_generators(candidates, known, rank: int, ring: QuotientRing) -> list:
    """Greedy choice of candidates not in the span of ``known`` and earlier picks.

    Ties are broken by the given order, which makes the choice deterministic.
    """
    picked = []
    current = list(known)
    basis = submodule_gb(current, rank, ring)
    for c in candidates:
        red = Reducer(basis, ring.poly)
        r = red(c)
        if not r:
            continue
        picked.append(r)
        current.append(r)
        basis = submodule_gb(current, rank, ring)
    return picked


def prune(n_gens: int, relations: list, field):
    """Drop generators killed by a relation with a constant coefficient.

    Returns the surviving generator indices and the rewritten relations.
    """
    rels = [dict(r) for r in relations if r]
    alive = list(range(n_gens))
    changed = True
    while changed:
        changed = False
        for idx, r in enumerate(rels):
            pivot = None
            for (p, e), c in r.items():
                if not any(e) and all(not any(e2) for (p2, e2) in r if p2 == p):
                    pivot = (p, e, c)
                    break
            if pivot is None:
                continue
            p, e0, c = pivot
            # e_p = -(1/c) * (r - c e_p)
            inv = field.neg(field.inv(c))
            rest = {t: v for t, v in r.items() if t[0] != p}
            new_rels = []
            for jdx, s in enumerate(rels):
                if jdx == idx:
                    continue
                s = dict(s)
                comp = {t[1]: v for t, v in s.items() if t[0] == p}
                for t in [t for t in s if t[0] == p]:
                    del s[t]
                for e1, v1 in comp.items():
                    for (q, e2), v2 in rest.items():
                        t = (q, tuple(x + y for x, y in zip(e1, e2)))
                        val = field.add(s.get(t, field.zero), field.mul(field.mul(v1, v2), inv))
                        if val == 0:
                            s.pop(t, None)
                        else:
                            s[t] = val
                if s:
                    new_rels.append(s)
            rels = new_rels
            alive.remove(p)
            changed = True
            break
    index = {p: i for i, p in enumerate(alive)}
    rels = [{(index[p], e): c for (p, e), c in r.items()} for r in rels]
    return alive, rels


class ModulePres:
    """Cokernel R^n / (relations + I R^n) over a quotient ring R = P/I."""

    def __init__(self, ring: QuotientRing, n_gens: int, relations=()):
        self.ring = ring
        self.n_gens = n_gens
        self.relations = [dict(r) for r in relations if r]

    def __repr__(self):
        return f"ModulePres({self.ring}, gens={self.n_gens}, rels={len(self.relations)})"

    @cached_property
    def gb(self) -> list:
        return submodule_gb(self.relations, self.n_gens, self.ring)

    def reducer(self) -> Reducer:
        return Reducer(self.gb, self.ring.poly)

    def is_zero(self) -> bool:
        zero = self.ring.poly.one_exp
        hit = {p for v in self.gb for (p, e) in [lead(v, module_key(self.ring.poly))] if e == zero}
        return len(hit) == self.n_gens

    def standard_monomials(self):
        """Per-position standard monomials, or None when some position is infinite."""
        P = self.ring.poly
        key = module_key(P)
        leads = {}
        for v in self.gb:
            p, e = lead(v, key)
            leads.setdefault(p, []).append(e)
        result = []
        for p in range(self.n_gens):
            ls = leads.get(p, [])
            if any(not any(e) for e in ls):
                continue
            bounds = []
            for i in range(P.nvars):
                pure = [e[i] for e in ls if all(e[j] == 0 for j in range(P.nvars) if j != i)]
                if not pure:
                    return None
                bounds.append(min(pure))
            for e in product(*[range(b) for b in bounds]):
                if not any(all(a >= b for a, b in zip(e, l)) for l in ls):
                    result.append((p, e))
        return result

    def k_dimension(self):
        mons = self.standard_monomials()
        return INFINITE if mons is None else len(mons)

    def min_generators(self) -> int:
        """dim_k M / mM at the origin m = (x1..xn)."""
        field = self.ring.field
        zero = self.ring.poly.one_exp
        rows = []
        for r in list(self.relations) + self.ring.ideal_vecs(self.n_gens):
            row = [field.zero] * self.n_gens
            for (p, e), c in r.items():
                if e == zero:
                    row[p] = c
            if any(x != 0 for x in row):
                rows.append(row)
        return self.n_gens - matrix_rank(rows, field)

    def annihilator(self) -> list:
        """Reduced Groebner basis (Polys of the ambient polynomial ring) of ann(M)."""
        P = self.ring.poly
        one = P.field.one
        current = None
        for j in range(self.n_gens):
            colon = kernel([{(j, P.one_exp): one}], self.n_gens, self.relations, self.ring)
            ideal = [vec_to_poly(v, P) for v in colon]
            current = ideal if current is None else intersect_ideals(current, ideal, P)
        if current is None:
            return [P.one()]
        return current

    def prune(self) -> ModulePres:
        alive, rels = prune(self.n_gens, self.relations, self.ring.field)
        rels = [self.ring.reduce_vec(r) for r in rels]
        return ModulePres(self.ring, len(alive), [r for r in rels if r])

    def is_free(self) -> bool:
        return all(not self.ring.reduce_vec(r) for r in self.relations)


def intersect_ideals(I, J, P: PolyRing) -> list:
    one = P.field.one
    col = {(0, P.one_exp): one, (1, P.one_exp): one}
    rels = [poly_to_vec(f, 0) for f in I] + [poly_to_vec(g, 1) for g in J]
    ker = kernel([col], 2, rels, QuotientRing(P))
    return [vec_to_poly(v, P) for v in ker]


def matrix_rank(rows, field) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.inv(rows[rank][c])
        rows[rank] = [field.mul(v, inv) for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def syzygies(gens, rank: int, ring: QuotientRing) -> ModulePres:
    """Presentation of the syzygy module of ``gens`` (elements of R^rank).

    The result is the submodule of R^len(gens) generated by the relations,
    returned as a ModulePres whose ``relations`` are its generators.
    """
    ker = kernel(list(gens), rank, [], ring)
    ker = [ring.reduce_vec(v) for v in ker]
    return ModulePres(ring, len(gens), [v for v in ker if v])


def format_vec(v: dict, ring: PolyRing, n: int) -> str:
    comps = []
    key = ring.order.key
    for p in range(n):
        terms = sorted(((e, c) for (q, e), c in v.items() if q == p),
                       key=lambda t: key(t[0]), reverse=True)
        comps.append(format_terms(terms, ring.names, ring.field))
    return "(" + ", ".join(comps) + ")"


class RingMap:
    """Map of quotient rings given by images of the source variables."""

    def __init__(self, source: QuotientRing, target: QuotientRing, images):
        if len(images) != source.nvars:
            raise ValueError("one image per source variable required")
        self.source = source
        self.target = target
        self.images = [target(im) for im in images]
        for g in source.ideal_gb:
            if self(g):
                raise ValueError(f"map does not respect the relation {g}")

    def __call__(self, p: Poly) -> Poly:
        if p.ring.names != self.source.names:
            raise RingMismatch(f"{p.ring} is not the source {self.source}")
        return self.target.reduce(p.substitute(self.images, self.target.poly))


def kaehler_presentation(f: RingMap) -> ModulePres:
    """Omega^1 of target over source: generators dy_j, relations dF and d(f(x_i))."""
    B = f.target
    m = B.nvars
    rels = []
    for F in list(B.ideal_gb) + list(f.images):
        v = {}
        for j in range(m):
            for e, c in B.reduce(F.diff(j)).terms.items():
                v[(j, e)] = c
        if v:
            rels.append(v)
    return ModulePres(B, m, rels)


def k_dimension(m: ModulePres):
    return m.k_dimension()

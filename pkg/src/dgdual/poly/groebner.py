"""Buchberger's algorithm for ideals and submodules of free modules.

Module elements are dicts ``{(position, exponent): coefficient}``; an ideal is
the rank-one case. Orders on terms come from :func:`module_key`.
"""

from __future__ import annotations

import heapq
from functools import lru_cache

from .ring import Poly, PolyRing


def module_key(ring: PolyRing, blocks=None):
    """Term order on ``(pos, exp)``.

    Without ``blocks`` this is term-over-position. ``blocks[pos]`` assigns a
    block number; lower block numbers dominate (an elimination order on
    positions), and inside a block the order is term-over-position.
    """
    mkey = ring.order.key
    if blocks is None:
        return lru_cache(maxsize=None)(lambda t: (mkey(t[1]), -t[0]))
    blocks = tuple(blocks)
    return lru_cache(maxsize=None)(lambda t: (-blocks[t[0]], mkey(t[1]), -t[0]))


def lead(v: dict, key):
    return max(v, key=key)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_multiple(v: dict, g: dict, q, shift, field):
    """v -= q * x^shift * g, in place."""
    sub, mul = field.sub, field.mul
    for (p, e), c in g.items():
        t = (p, tuple(a + b for a, b in zip(e, shift)))
        old = v.get(t)
        val = sub(old, mul(q, c)) if old is not None else field.neg(mul(q, c))
        if val == 0:
            if old is not None:
                del v[t]
        else:
            v[t] = val


class _Reducer:
    def __init__(self, field, key):
        self.field = field
        self.key = key
        self.elems = []       # (vec, lead term, inverse lead coefficient)
        self.by_pos = {}

    def add(self, v: dict):
        lt = lead(v, self.key)
        self.elems.append((v, lt, self.field.inv(v[lt])))
        self.by_pos.setdefault(lt[0], []).append(len(self.elems) - 1)
        return len(self.elems) - 1

    def find(self, term, skip=None):
        for i in self.by_pos.get(term[0], ()):
            if i == skip:
                continue
            g, lt, inv = self.elems[i]
            if _divides(lt[1], term[1]):
                return g, lt, inv
        return None

    def reduce(self, v: dict, skip=None) -> dict:
        v = dict(v)
        out = {}
        key, field = self.key, self.field
        while v:
            t = max(v, key=key)
            c = v[t]
            hit = self.find(t, skip)
            if hit is None:
                out[t] = c
                del v[t]
                continue
            g, lt, inv = hit
            shift = tuple(a - b for a, b in zip(t[1], lt[1]))
            _sub_multiple(v, g, field.mul(c, inv), shift, field)
        return out


def _monic(v: dict, key, field) -> dict:
    lt = lead(v, key)
    inv = field.inv(v[lt])
    return {t: field.mul(c, inv) for t, c in v.items()}


def _spoly(f, g, ltf, ltg, field):
    m = _lcm(ltf[1], ltg[1])
    sf = tuple(a - b for a, b in zip(m, ltf[1]))
    sg = tuple(a - b for a, b in zip(m, ltg[1]))
    out = {}
    _sub_multiple(out, f, field.neg(field.inv(f[ltf])), sf, field)
    _sub_multiple(out, g, field.inv(g[ltg]), sg, field)
    return out


def groebner_vecs(gens, ring: PolyRing, key=None) -> list:
    """Reduced Groebner basis of the submodule spanned by ``gens``.

    Pairs are processed in order of (sugar, lcm); Buchberger's product
    criterion (ideal case only) and chain criterion prune pairs. The output
    is monic, interreduced and sorted by decreasing leading term, so it
    depends only on the submodule and the order.
    """
    field = ring.field
    key = key or module_key(ring)
    polys = [dict(g) for g in gens if g]
    if not polys:
        return []
    is_ideal = all(t[0] == 0 for g in polys for t in g)
    red = _Reducer(field, key)
    sugar = []
    pairs = []
    pending = set()

    def deg(term):
        return sum(term[1])

    def push_pairs(k):
        ltk = red.elems[k][1]
        for i in range(k):
            lti = red.elems[i][1]
            if lti[0] != ltk[0]:
                continue
            m = _lcm(lti[1], ltk[1])
            if is_ideal and all(a == 0 or b == 0 for a, b in zip(lti[1], ltk[1])):
                continue
            s = max(sugar[i] + sum(m) - deg(lti), sugar[k] + sum(m) - deg(ltk))
            heapq.heappush(pairs, (s, key((ltk[0], m)), i, k))
            pending.add((i, k))

    for g in polys:
        r = red.reduce(g)
        if r:
            r = _monic(r, key, field)
            k = red.add(r)
            sugar.append(max(sum(e) for _, e in r))
            push_pairs(k)

    while pairs:
        s_sugar, _, i, j = heapq.heappop(pairs)
        pending.discard((i, j))
        fi, lti, _ = red.elems[i]
        fj, ltj, _ = red.elems[j]
        m = _lcm(lti[1], ltj[1])
        chain = False
        for k, (_, ltk, _) in enumerate(red.elems):
            if k in (i, j) or ltk[0] != lti[0] or not _divides(ltk[1], m):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                chain = True
                break
        if chain:
            continue
        s = _spoly(fi, fj, lti, ltj, field)
        r = red.reduce(s)
        if r:
            r = _monic(r, key, field)
            k = red.add(r)
            sugar.append(s_sugar)
            push_pairs(k)

    return interreduce([e[0] for e in red.elems], ring, key)


def interreduce(basis, ring: PolyRing, key) -> list:
    field = ring.field
    items = [(b, lead(b, key)) for b in basis if b]
    keep = []
    for idx, (b, lt) in enumerate(items):
        redundant = False
        for jdx, (c, ltc) in enumerate(items):
            if jdx == idx or ltc[0] != lt[0] or not _divides(ltc[1], lt[1]):
                continue
            # equal leading terms: keep the first occurrence only
            if ltc[1] != lt[1] or jdx < idx:
                redundant = True
                break
        if not redundant:
            keep.append(b)
    red = _Reducer(field, key)
    for b in keep:
        red.add(b)
    out = []
    for i, b in enumerate(keep):
        r = red.reduce(b, skip=i)
        out.append(_monic(r, key, field))
    out.sort(key=lambda v: key(lead(v, key)), reverse=True)
    return out


def reduce_vec(v: dict, basis, ring: PolyRing, key=None) -> dict:
    key = key or module_key(ring)
    red = _Reducer(ring.field, key)
    for b in basis:
        if b:
            red.add(b)
    return red.reduce(v)


class Reducer:
    """Reusable normal-form operator against a fixed Groebner basis."""

    def __init__(self, basis, ring: PolyRing, key=None):
        self.ring = ring
        self.key = key or module_key(ring)
        self._red = _Reducer(ring.field, self.key)
        self.basis = [b for b in basis if b]
        for b in self.basis:
            self._red.add(b)

    def __call__(self, v: dict) -> dict:
        return self._red.reduce(v)

    def member(self, v: dict) -> bool:
        return not self._red.reduce(v)


def s_polys_reduce_to_zero(basis, ring: PolyRing, key=None) -> bool:
    key = key or module_key(ring)
    red = Reducer(basis, ring, key)
    items = [(b, lead(b, key)) for b in basis]
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            (f, ltf), (g, ltg) = items[i], items[j]
            if ltf[0] != ltg[0]:
                continue
            if red(_spoly(f, g, ltf, ltg, ring.field)):
                return False
    return True


# ------------------------------------------------------------ polynomial API

def poly_to_vec(p: Poly, pos: int = 0) -> dict:
    return {(pos, e): c for e, c in p.terms.items()}


def vec_to_poly(v: dict, ring: PolyRing, pos: int = 0) -> Poly:
    return Poly(ring, {e: c for (p, e), c in v.items() if p == pos})


def buchberger(gens, order=None) -> list:
    """Reduced Groebner basis of an ideal, as monic Polys sorted by leading term."""
    gens = [g for g in gens]
    if not gens:
        return []
    ring = gens[0].ring
    if order is not None and order != ring.order.kind:
        ring = ring.with_order(order)
        gens = [ring(g) for g in gens]
    basis = groebner_vecs([poly_to_vec(g) for g in gens], ring)
    return [vec_to_poly(b, ring) for b in basis]


def normal_form(f, gb, order=None):
    """Remainder of ``f`` on division by the Groebner basis ``gb``.

    ``f`` is a Poly (``gb`` a list of Polys) or a module element dict with
    ``gb`` a list of dicts; in the latter case pass the ring as ``order``.
    """
    if isinstance(f, Poly):
        ring = f.ring
        if order is not None and order != ring.order.kind:
            ring = ring.with_order(order)
            f = ring(f)
            gb = [ring(g) for g in gb]
        for g in gb:
            if g.ring.names != ring.names or g.ring.field != ring.field:
                from .ring import RingMismatch
                raise RingMismatch(f"{g.ring} vs {ring}")
        r = reduce_vec(poly_to_vec(f), [poly_to_vec(g) for g in gb], ring)
        return vec_to_poly(r, ring)
    return reduce_vec(f, gb, order)

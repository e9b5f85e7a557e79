"""Semi-free resolutions by killing cycles, finite free resolutions, diagonal resolutions."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .dg.cohomology import homology
from .dg.modules import (
    DGModule, SemiFreeModule, as_dgmodule, free_module, restrict, unit, vadd, vneg,
)
from .dg.rings import DGRing, enveloping
from .errors import NotRegularRing, UnboundedAbove
from .poly.modules import ModulePres, QuotientRing, kernel, select_generators
from .poly.ring import Poly

DEFAULT_FLOOR_CAP = 40


@dataclass
class TruncatedComplex:
    """A semi-free P with a map P -> M that is a quasi-isomorphism in degrees > floor.

    ``exact`` means the map is a quasi-isomorphism in all degrees. ``top`` is
    the truncation degree: H^i(P) = 0 for i > top, matching H^i(M) for i <= top.
    """

    complex: SemiFreeModule
    floor: int
    top: int
    exact: bool
    images: list = dc_field(default_factory=list)      # pi(g_j) as vectors in M^{deg g_j}
    target: DGModule | None = None

    @property
    def cert_window(self) -> tuple:
        lo = None if self.exact else self.floor + 1
        return (lo, self.top)

    def counts(self) -> dict:
        out: dict = {}
        for _, d in self.complex.gens:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items(), reverse=True))

    def to_json(self) -> dict:
        lo, hi = self.cert_window
        return {"generators": {str(d): c for d, c in self.counts().items()},
                "floor": self.floor, "top": self.top, "exact": self.exact,
                "cert_window": [lo, hi]}


class _Cone:
    """Degreewise cone C^n = P^{n+1} + M^n of pi: P -> M, d(p, m) = (-dp, pi(p) + dm)."""

    def __init__(self, P: SemiFreeModule, images: list, M: DGModule):
        self.P, self.images, self.M = P, images, M
        self.A = M.ring
        self._pi = {}

    def pi_cols(self, n: int) -> list:
        hit = self._pi.get(n)
        if hit is None:
            hit = []
            for S, j in self.P.basis(n):
                hit.append(self.M.apply_elem(self.A.monomial(S), self.P.degs[j], self.images[j]))
            self._pi[n] = hit
        return hit

    def module(self, n: int) -> DGModule:
        """The cone restricted to degrees n-1, n, n+1."""
        P, M, A = self.P, self.M, self.A
        field = A.field
        ranks, rels, diff = {}, {}, {}
        for m in (n - 1, n, n + 1, n + 2):
            p = len(P.basis(m + 1))
            ranks[m] = p + M.rank(m)
            rels[m] = [{(q + p, e): c for (q, e), c in r.items()} for r in M.relations(m)]
        for m in (n - 1, n):
            p_tgt = len(P.basis(m + 2))
            cols = []
            pd = P.piece_d(m + 1) if P.basis(m + 1) else []
            for b, col in enumerate(pd):
                out = vneg(col, field)
                vadd(out, self.pi_cols(m + 1)[b], field, offset=p_tgt)
                cols.append(out)
            for a in range(M.rank(m)):
                out: dict = {}
                vadd(out, M.apply_d(m, unit(a, A.base)), field, offset=p_tgt)
                cols.append(out)
            diff[m] = cols
        return DGModule(A, {m: r for m, r in ranks.items() if m <= n + 1}, rels, diff, {})


def semifree_resolution(M, floor: int, top: int | None = None, prefix: str = "p",
                        cap: int = DEFAULT_FLOOR_CAP) -> TruncatedComplex:
    """Killing cycles from the top degree down to ``floor``.

    With ``top`` given, the result resolves the truncation of M to degrees
    <= top instead of M itself.
    """
    if isinstance(M, SemiFreeModule) and top is None:
        return _trivial_resolution(M, floor)
    M = as_dgmodule(M)
    A = M.ring
    if top is None:
        top = M.hi
    if top - floor > cap:
        from .errors import WindowInfeasible
        raise WindowInfeasible(f"resolution would span {top - floor} degrees (cap {cap})")
    gens, diff, images = [], [], []
    P = SemiFreeModule(A, [])
    for n in range(top, floor - 1, -1):
        H = homology(_Cone(P, images, M).module(n), n)
        if not H.reps:
            continue
        p_count = len(P.basis(n + 1))
        basis = P.basis(n + 1)
        for k, rep in enumerate(H.reps):
            col: dict = {}
            mv = {}
            for (q, e), c in rep.items():
                if q >= p_count:
                    mv[(q - p_count, e)] = c
                    continue
                S, j = basis[q]
                term = A.monomial(S, Poly(A.base.poly, {e: A.field.neg(c)}))
                col[j] = col.get(j, A.zero()) + term
            gens.append((f"{prefix}{_deg_tag(n)}_{k}", n))
            diff.append({j: v for j, v in col.items() if v})
            images.append(mv)
        P = SemiFreeModule(A, gens, diff)
    lowest = min(M.lo, P.gmin - A.amplitude - 1)
    cone = _Cone(P, images, M)
    exact = all(not homology(cone.module(m), m).reps for m in range(floor - 1, lowest - 1, -1))
    return TruncatedComplex(P, floor, top, exact, images, M)


def _deg_tag(n: int) -> str:
    return f"m{-n}" if n < 0 else str(n)


def _trivial_resolution(M: SemiFreeModule, floor: int) -> TruncatedComplex:
    images = []
    for j in range(M.ngens):
        idx = M.piece_basis(M.degs[j])[(0, j)]
        images.append(unit(idx, M.ring.base))
    top = M.gmax if M.gens else floor
    return TruncatedComplex(M, floor, top, True, images, M.expanded)


# ------------------------------------------------------------ finite free resolutions

@dataclass
class FreeResolution:
    """0 <- F_0 <- F_1 <- ... ; maps[k] has the columns of F_{k+1} -> F_k."""

    ring: QuotientRing
    ranks: list
    maps: list

    @property
    def length(self) -> int:
        return len(self.maps)

    def is_exact(self) -> bool:
        """Internal homology vanishes: ker(F_k -> F_{k-1}) = im(F_{k+1} -> F_k) for k >= 1."""
        for k in range(1, len(self.ranks)):
            ker = kernel(self.maps[k - 1], self.ranks[k - 1], [], self.ring)
            im = self.maps[k] if k < len(self.maps) else []
            if select_generators(ker, im, self.ranks[k], self.ring):
                return False
        return True


def finite_free_resolution(m: ModulePres, max_steps: int | None = None) -> FreeResolution:
    ring = m.ring
    if not ring.is_polynomial():
        raise NotRegularRing(f"{ring} is not a polynomial ring")
    n = ring.nvars
    max_steps = max_steps if max_steps is not None else 2 * n + 4
    ranks = [m.n_gens]
    maps = []
    current = select_generators(m.relations, [], m.n_gens, ring)
    for _ in range(max_steps):
        if not current:
            return FreeResolution(ring, ranks, maps)
        maps.append(current)
        ranks.append(len(current))
        syz = kernel(current, ranks[-2], [], ring)
        current = select_generators(syz, [], len(maps[-1]), ring)
    raise NotRegularRing("syzygies did not terminate")


# ------------------------------------------------------------ diagonal

def diagonal_resolution(A: DGRing, floor: int, cap: int = DEFAULT_FLOOR_CAP):
    """A resolved over A^e = A tensor_k A through the multiplication map."""
    Ae, mu, _, _ = enveloping(A)
    M = restrict(free_module(A), mu)
    res = semifree_resolution(M, floor, prefix="h", cap=cap)
    return res, Ae, mu


def check_bounded_above(M) -> None:
    M = as_dgmodule(M)
    if M.hi is None:
        raise UnboundedAbove("module is not bounded above")

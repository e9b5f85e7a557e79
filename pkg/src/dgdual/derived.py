"""Window-certified derived functors.

A :class:`Derived` is a computed complex together with bounds on how far it
may be from the object it stands for. Both are connected by a zigzag of maps
whose cones are built from a part in D^{<=low} and a part in D^{>=high}, so
H^i is certified exactly for ``low + 2 <= i <= high - 1``.

The rules used below (u = inf H of the target, t = resolution floor):

* resolving M down to t adds a low error t - 1;
* Hom(-, N) turns a low error c of the source into a high error u - c - 1,
  and a high error h of the source into a low error -h - 1 when N is
  dualizing;
* Hom(P, -) turns errors e, h of the target into e - min deg P and
  h - max deg P;
* P tensor - turns a low error c of P into c + sup N, and a low error e of
  the target into e + max deg P.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .dg.cohomology import CohFingerprint, degree_record, homology, pushdown
from .dg.modules import (
    DGModule, SemiFreeModule, as_dgmodule, base_change_module, external_tensor,
    hom_complex, restrict as restrict_module, tensor_complex,
)
from .dg.rings import DGRing, DGRingMap, enveloping, tensor_dgrings
from .errors import WindowInfeasible, WindowViolation
from .resolution import DEFAULT_FLOOR_CAP, diagonal_resolution, semifree_resolution

INF = float("inf")


def _max(*xs):
    xs = [x for x in xs if x is not None]
    return max(xs) if xs else None


def _min(*xs):
    xs = [x for x in xs if x is not None]
    return min(xs) if xs else None


@dataclass
class Settings:
    depth: int = 0                    # extra floor depth beyond the formula
    cap: int = DEFAULT_FLOOR_CAP       # max span (top - floor) of a resolution


DEFAULT = Settings()


@dataclass(eq=False)
class Derived:
    ring: DGRing
    module: object                    # DGModule or SemiFreeModule
    low: int | None = None
    high: int | None = None
    inf_bound: int | None = None      # known: inf H(true) >= inf_bound
    sup_bound: int | None = None      # known: sup H(true) <= sup_bound
    push: object = None               # annihilator map for fingerprints (A^e -> A)
    provenance: list = dc_field(default_factory=list)
    name: str | None = None
    dualizing: bool = False

    def __post_init__(self):
        self._h = {}

    def __repr__(self):
        return self.name or f"Derived({self.module}, low={self.low}, high={self.high})"

    @property
    def exact(self) -> bool:
        return self.low is None and self.high is None

    @property
    def dg(self) -> DGModule:
        return as_dgmodule(self.module)

    @property
    def cert(self) -> tuple:
        return (-INF if self.low is None else self.low + 2, INF if self.high is None else self.high - 1)

    def H(self, i: int):
        hit = self._h.get(i)
        if hit is None:
            hit = self._h[i] = homology(self.dg, i).module.prune()
        return hit

    def _nonzero(self, i: int) -> bool:
        return self.dg.rank(i) > 0 and self.H(i).n_gens > 0 and not self.H(i).is_zero()

    def computed_amplitude(self):
        M = self.dg
        nz = [i for i in range(M.lo, M.hi + 1) if self._nonzero(i)]
        return (min(nz), max(nz)) if nz else None

    def inf_lb(self):
        """A lower bound for inf H of the represented object (None: it is zero)."""
        lo, hi = self.cert
        M = self.dg
        found = None
        for i in range(M.lo, M.hi + 1):
            if lo <= i <= hi and self._nonzero(i):
                found = i
                break
        cands = [found]
        if self.low is not None:
            cands.append(self.low + 1)
        if self.high is not None and found is None:
            cands.append(self.high)
        val = _min(*cands)
        if val is not None and self.inf_bound is not None:
            val = max(val, self.inf_bound)
        if val is None and self.inf_bound is not None and not self.exact:
            val = self.inf_bound
        return val

    def sup_ub(self):
        """An upper bound for sup H of the represented object (None: unknown or zero)."""
        lo, hi = self.cert
        M = self.dg
        found = None
        for i in range(M.hi, M.lo - 1, -1):
            if lo <= i <= hi and self._nonzero(i):
                found = i
                break
        if self.high is not None:
            return self.sup_bound
        val = _max(found, None if self.low is None else self.low + 1)
        if val is not None and self.sup_bound is not None:
            val = min(val, self.sup_bound)
        return val

    def is_zero(self) -> bool:
        return self.exact and self.computed_amplitude() is None

    def fingerprint(self, window) -> CohFingerprint:
        a, b = window
        lo, hi = self.cert
        if a < lo or b > hi:
            raise WindowViolation(
                f"window {a}..{b} not inside the certified range {_fmt(lo)}..{_fmt(hi)}")
        out = {}
        for i in range(a, b + 1):
            out[i] = degree_record(self.H(i), self.push) if self.dg.rank(i) else {"dim": 0}
        return CohFingerprint((a, b), out)

    def cert_json(self):
        lo, hi = self.cert
        return [None if lo == -INF else lo, None if hi == INF else hi]


def _fmt(x):
    return "-inf" if x == -INF else "inf" if x == INF else str(x)


def exact(M, name=None, **kw) -> Derived:
    if isinstance(M, Derived):
        return M
    ring = M.ring
    return Derived(ring, M, name=name or getattr(M, "name", None), **kw)


def zero(ring: DGRing) -> Derived:
    return Derived(ring, DGModule(ring, {}), provenance=["zero"])


# ------------------------------------------------------------ resolving sources

@dataclass
class Source:
    P: SemiFreeModule
    low: int | None            # low error of P against the represented object
    high: int | None           # remaining high error
    trace: dict


def resolve_source(M: Derived, floor: int, settings: Settings = DEFAULT,
                   allow_high: bool = False, prefix: str = "p") -> Source:
    """A finite semi-free model of M above ``floor``.

    A high error of M is removed by truncating at a known bound for sup H;
    otherwise it is kept (only allowed when the caller can absorb it).
    """
    top = None
    high = M.high
    if M.high is not None:
        w = M.sup_ub()
        if w is not None and w <= M.high - 1:
            top, high = w, None
        elif not allow_high:
            raise WindowInfeasible(f"{M} has an uncertified top and no bound on its cohomology")
    if isinstance(M.module, SemiFreeModule) and top is None:
        return Source(M.module, M.low, high, {"resolution": "given semi-free", "floor": None})
    res = semifree_resolution(M.dg, floor, top=top, cap=settings.cap, prefix=prefix)
    low = None if res.exact else floor - 1
    return Source(res.complex, _max(low, M.low), high, {"resolution": res.to_json()})


# ------------------------------------------------------------ RHom

def rhom(M: Derived, N: Derived, window, settings: Settings = DEFAULT) -> Derived:
    """RHom_A(M, N) certified on ``window`` (a, b)."""
    M, N = exact(M), exact(N)
    a, b = window
    A = M.ring
    if N.is_zero():
        return zero(A)
    u = N.inf_lb()
    if u is None:
        return zero(A)
    floor = u - b - 1 - settings.depth
    if M.low is not None and M.low > u - b - 2:
        raise WindowInfeasible(f"source error {M.low} too high for window top {b}")
    src = resolve_source(M, floor, settings, allow_high=N.dualizing)
    P = src.P
    if not P.gens:
        return zero(A)
    highs, lows = [], []
    if src.low is not None:
        highs.append(u - src.low - 1)
    if src.high is not None:
        lows.append(-src.high - 1)
    if N.low is not None:
        lows.append(N.low - P.gmin)
    if N.high is not None:
        highs.append(N.high - P.gmax)
    C = hom_complex(P, N.module)
    res = Derived(A, C, _max(*lows), _min(*highs),
                  provenance=[{"op": "rhom", "floor": floor, **src.trace}])
    if N.dualizing:
        inf_m, sup_m = M.inf_lb(), M.sup_ub()
        if inf_m is not None:
            res.sup_bound = -inf_m
        if sup_m is not None:
            res.inf_bound = -sup_m - A.nvars
    _check_window(res, window, "rhom")
    return res


def _check_window(res: Derived, window, what: str):
    lo, hi = res.cert
    if window[0] < lo or window[1] > hi:
        raise WindowInfeasible(
            f"{what}: window {window[0]}..{window[1]} exceeds certified {_fmt(lo)}..{_fmt(hi)}")


# ------------------------------------------------------------ tensor

def derived_tensor(M: Derived, N: Derived, window, settings: Settings = DEFAULT) -> Derived:
    """M tensor^L_A N certified on ``window``."""
    M, N = exact(M), exact(N)
    a, b = window
    A = M.ring
    if M.is_zero() or N.is_zero():
        return zero(A)
    tr = {}
    if N.high is not None:
        # N needs a top truncation too; resolve it semi-freely
        v_m = M.sup_ub()
        floor_n = a - (v_m if v_m is not None else 0) - 1 - settings.depth
        srcN = resolve_source(N, floor_n, settings, prefix="q")
        N = Derived(A, srcN.P, srcN.low, None)
        tr["second"] = srcN.trace
    v = N.sup_ub()
    if v is None:
        return zero(A)
    floor = a - v - 1 - settings.depth
    src = resolve_source(M, floor, settings)
    P = src.P
    if not P.gens:
        return zero(A)
    lows = []
    if src.low is not None:
        lows.append(src.low + v)
    if N.low is not None:
        lows.append(N.low + P.gmax)
    C = tensor_complex(P, N.module)
    res = Derived(A, C, _max(*lows), None,
                  provenance=[{"op": "tensor", "floor": floor, **src.trace, **tr}])
    _check_window(res, window, "tensor")
    return res


# ------------------------------------------------------------ change of rings

def base_change(X: Derived, f: DGRingMap, max_low: int, settings: Settings = DEFAULT,
                flat_amplitude: int | None = None) -> Derived:
    """X tensor^L_A B along f, with low error at most ``max_low``."""
    X = exact(X)
    if X.is_zero():
        return zero(f.target)
    floor = max_low + 1 - settings.depth
    src = resolve_source(X, floor, settings, allow_high=flat_amplitude is not None)
    high = None
    if src.high is not None:
        high = src.high - flat_amplitude
    Y = base_change_module(src.P, f)
    sup = X.sup_ub()
    return Derived(f.target, Y, src.low, high, sup_bound=sup,
                   provenance=[{"op": "base_change", "floor": floor, **src.trace}])


def restrict(X: Derived, f: DGRingMap) -> Derived:
    X = exact(X)
    return Derived(f.source, restrict_module(X.module, f), X.low, X.high, X.inf_bound, X.sup_bound,
                   provenance=X.provenance + [{"op": "restrict"}])


def external(X: Derived, Y: Derived, C: DGRing) -> Derived:
    """X tensor_k Y over C = A tensor_k B."""
    X, Y = exact(X), exact(Y)
    lows, highs = [], []
    if X.low is not None or Y.low is not None:
        sx, sy = X.sup_ub(), Y.sup_ub()
        if X.low is not None:
            lows.append(X.low + (sy or 0))
        if Y.low is not None:
            lows.append(Y.low + (sx or 0))
    if X.high is not None or Y.high is not None:
        ix, iy = X.inf_lb(), Y.inf_lb()
        if X.high is not None:
            highs.append(X.high + (iy or 0))
        if Y.high is not None:
            highs.append(Y.high + (ix or 0))
    return Derived(C, external_tensor(X.module, Y.module, C), _max(*lows), _min(*highs),
                   provenance=[{"op": "external_tensor"}])


# ------------------------------------------------------------ Hochschild

def hochschild(A: DGRing, M: Derived, N: Derived, window, settings: Settings = DEFAULT) -> Derived:
    """RHom_{A tensor_k A}(A, M tensor_k N), fingerprinted over A through the multiplication map."""
    M, N = exact(M), exact(N)
    if not (M.exact and N.exact):
        raise WindowInfeasible("Hochschild cohomology needs exactly computed coefficients")
    a, b = window
    Ae, mu, _, _ = enveloping(A)
    X = Derived(Ae, external_tensor(M.module, N.module, Ae))
    if X.is_zero():
        return zero(A)
    u = X.inf_lb()
    floor = u - b - 1 - settings.depth
    res, _, _ = diagonal_resolution(A, floor, cap=settings.cap)
    P = res.complex
    low = None if res.exact else floor - 1
    high = None if low is None else u - low - 1
    C = hom_complex(P, X.module)
    out = Derived(Ae, C, None, high, push=pushdown(mu),
                  provenance=[{"op": "hochschild", "floor": floor, "resolution": res.to_json()}])
    _check_window(out, window, "hochschild")
    return out


# ------------------------------------------------------------ box product of Homs

def box_hom_check(A: DGRing, B: DGRing, P, M, Q, N, window, settings: Settings = DEFAULT) -> dict:
    """Compare RHom_A(P,M) tensor_k RHom_B(Q,N) with RHom_{A tensor B}(P tensor_k Q, M tensor_k N)."""
    P, M, Q, N = exact(P), exact(M), exact(Q), exact(N)
    C, _, _ = tensor_dgrings(A, B, rename_all=True)
    a, b = window
    # left: the two Homs need windows wide enough for the box product on [a, b]
    um, un = M.inf_lb(), N.inf_lb()
    sp, sq = P.sup_ub(), Q.sup_ub()
    if None in (um, un, sp, sq):
        left = zero(C)
    else:
        # H^i(X tensor_k Y) = sum H^p(X) H^q(Y); X lives in degrees >= um - sp
        b1 = b - (un - sq)
        b2 = b - (um - sp)
        X = rhom(P, M, (um - sp, b1), settings)
        Y = rhom(Q, N, (un - sq, b2), settings)
        left = external(X, Y, C)
    PQ = Derived(C, external_tensor(P.dg, Q.dg, C))
    MN = Derived(C, external_tensor(M.dg, N.dg, C))
    right = rhom(PQ, MN, window, settings)
    fl, fr = left.fingerprint(window), right.fingerprint(window)
    return {"left": fl, "right": fr, "match": fl == fr}

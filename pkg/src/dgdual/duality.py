"""Rigid dualizing DG modules, the dualizing functor, Omega for polynomial extensions, f^! and twisted tensor."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .derived import DEFAULT, Derived, Settings, base_change, derived_tensor, exact, hochschild, rhom, zero
from .dg.cohomology import homology
from .dg.modules import DGModule, SemiFreeModule, poly_at
from .dg.rings import DGRing, DGRingMap, bits, ext_sign, smooth_extension_vars, trivial
from .errors import UnsupportedRing, UnsupportedSmoothShape
from .poly.modules import ModulePres, QuotientRing
from .resolution import finite_free_resolution


@dataclass(eq=False)
class DualizingDatum:
    ring: DGRing
    R: Derived
    trace: list = dc_field(default_factory=list)
    rigidity: dict | None = None

    def to_json(self) -> dict:
        R = self.R.module
        if isinstance(R, SemiFreeModule):
            shape = {"semifree": [[n, d] for n, d in R.gens]}
        else:
            shape = {"ranks": {str(n): r for n, r in sorted(R.ranks.items())}}
        return {"ring": repr(self.ring), "R": shape, "trace": list(self.trace),
                "rigidity": self.rigidity}


def _canonical_module(A0: QuotientRing):
    """(omega, c): Ext^c_P(A0, P) for the ambient polynomial ring P, when it is the only nonzero Ext."""
    P = QuotientRing(A0.poly)
    if A0.is_polynomial():
        return ModulePres(A0, 1, []), 0
    gens = [poly_at(g, 0) for g in A0.ideal_gb]
    F = finite_free_resolution(ModulePres(P, 1, gens))
    # dual complex Hom(F_j, P) with d^j the transpose of F_{j+1} -> F_j
    ranks = {j: r for j, r in enumerate(F.ranks)}
    diff = {}
    for j, cols in enumerate(F.maps):
        rows = ranks[j]
        dual = []
        for i in range(rows):
            v = {}
            for k, col in enumerate(cols):
                for (p, e), c in col.items():
                    if p == i:
                        v[(k, e)] = c
            dual.append(v)
        diff[j] = dual
    Ppoly = trivial(P)
    C = DGModule(Ppoly, ranks, {}, diff, {})
    nonzero = []
    for j in range(len(F.ranks)):
        H = homology(C, j)
        if H.module.n_gens and not H.module.is_zero():
            nonzero.append((j, H.module))
    if len(nonzero) != 1:
        raise UnsupportedRing(
            f"{A0} is not Cohen-Macaulay (Ext_P(A0, P) nonzero in degrees {[j for j, _ in nonzero]})")
    c, omega = nonzero[0]
    return ModulePres(A0, omega.n_gens, [A0.reduce_vec(r) for r in omega.relations]).prune(), c


def _hom_over_base(A: DGRing, omega: ModulePres, delta: int) -> DGModule:
    """Hom_{A0}(A, omega placed in degree delta) as a DG A-module.

    psi_{S,b} sends e_S to b and the other monomials to 0; it has degree
    delta - deg(e_S). d psi = -(-1)^{|psi|} psi o d_A and
    (e_i psi)(x) = (-1)^{|psi|} psi(e_i x).
    """
    A0 = A.base
    field = A.field
    r = omega.n_gens
    monos = sorted(range(1 << len(A.ext)), key=lambda S: (-A.mono_degree(S), S))
    by_deg: dict = {}
    for S in monos:
        by_deg.setdefault(delta - A.mono_degree(S), []).append(S)
    index = {}
    for m, Ss in by_deg.items():
        for k, S in enumerate(Ss):
            index[S] = (m, k)
    ranks = {m: len(Ss) * r for m, Ss in by_deg.items()}
    rels = {}
    labels = {}
    for m, Ss in by_deg.items():
        rels[m] = [{(k * r + p, e): c for (p, e), c in rel.items()}
                   for k in range(len(Ss)) for rel in omega.relations]
        labels[m] = [f"psi[{_mono_name(A, S)}]_{b}" for S in Ss for b in range(r)]
    diff, act = {}, {}
    minus = field.neg(field.one)
    for m, Ss in by_deg.items():
        cols = []
        for S in Ss:
            for b in range(r):
                col: dict = {}
                for T in by_deg.get(m + 1, []):
                    c = A.d_mono(T).coeff(S)
                    if c.terms:
                        pos = index[T][1] * r + b
                        v = poly_at(c, pos)
                        if m % 2 == 0:
                            v = {t: field.neg(x) for t, x in v.items()}
                        for t, x in v.items():
                            col[t] = field.add(col.get(t, field.zero), x)
                cols.append(A0.reduce_vec({t: x for t, x in col.items() if x != 0}))
        diff[m] = cols
        for i, deg in enumerate(A.ext_degs):
            cols = []
            for S in Ss:
                for b in range(r):
                    if not (S >> i) & 1:
                        cols.append({})
                        continue
                    T = S ^ (1 << i)
                    sg = ext_sign(1 << i, T) * (-1 if m % 2 else 1)
                    pos = index[T][1] * r + b
                    cols.append({(pos, A0.poly.one_exp): field.one if sg > 0 else minus})
            act[(i, m)] = cols
    return DGModule(A, ranks, rels, diff, act, labels, name="R")


def _mono_name(A: DGRing, S: int) -> str:
    return "*".join(A.ext_names[i] for i in bits(S)) or "1"


@lru_cache(maxsize=64)
def _rigid_cached(A: DGRing) -> DualizingDatum:
    n = A.nvars
    omega, c = _canonical_module(A.base)
    delta = c - n
    trace = [f"R(ambient) = polynomial ring in {n} variable(s) shifted by {n}"]
    if not A.base.is_polynomial():
        trace.append(f"Ext_P(A0, P) concentrated in degree {c}; omega has {omega.n_gens} generator(s)")
    gorenstein = omega.n_gens == 1 and omega.is_free()
    if gorenstein:
        top = (1 << len(A.ext)) - 1
        deg = delta - A.mono_degree(top)
        R = SemiFreeModule(A, [("w", deg)], name="R")
        trace.append(f"omega free of rank 1: R = A[{-deg}]")
    else:
        R = _hom_over_base(A, omega, delta)
        trace.append("R = Hom over A0 of A into omega")
    return DualizingDatum(A, Derived(A, R, dualizing=True, name="R", provenance=trace), trace)


def rigid_dualizing(A: DGRing) -> DualizingDatum:
    return _rigid_cached(A)


def dualize(M, datum: DualizingDatum, window, settings: Settings = DEFAULT) -> Derived:
    return rhom(M, datum.R, window, settings)


def check_rigidity(A: DGRing, R, window, settings: Settings = DEFAULT) -> dict:
    """Compare the Hochschild complex of (R, R) with R on the window."""
    if isinstance(R, DualizingDatum):
        R = R.R
    R = exact(R)
    hh = hochschild(A, R, R, window, settings)
    left, right = hh.fingerprint(window), R.fingerprint(window)
    return {"hochschild": left, "R": right, "pass": left == right}


def omega_smooth(f: DGRingMap) -> SemiFreeModule:
    """Omega_{B/A} = B[m] for B a polynomial extension of A in m variables."""
    extra = smooth_extension_vars(f)
    if extra is None:
        raise UnsupportedSmoothShape(f"{f} is not a polynomial extension of the degree-0 part")
    m = len(extra)
    return SemiFreeModule(f.target, [("dt", -m)], name=f"Omega[{m}]")


def shriek(f: DGRingMap, M, window, settings: Settings = DEFAULT) -> Derived:
    """f^!(M) = D_B(B tensor^L_A D_A(M)); the identity map gives M."""
    M = exact(M)
    if f.is_identity():
        return M
    A, B = f.source, f.target
    RA, RB = rigid_dualizing(A).R, rigid_dualizing(B).R
    inf_m = M.inf_lb()
    if inf_m is None:
        return zero(B)
    w = -inf_m
    X = rhom(M, RA, (w, w), settings)
    uB = RB.inf_lb()
    a, b = window
    Y = base_change(X, f, uB - b - 2, settings)
    out = rhom(Y, RB, window, settings)
    out.provenance = [{"op": "shriek", "dual_over_source": X.provenance,
                       "base_change": Y.provenance, "dual_over_target": out.provenance}]
    return out


def twisted_tensor(M, N, datum: DualizingDatum, window, settings: Settings = DEFAULT) -> Derived:
    """D(D(M) tensor^L D(N))."""
    M, N = exact(M), exact(N)
    A = datum.ring
    R = datum.R
    im, in_ = M.inf_lb(), N.inf_lb()
    if im is None or in_ is None:
        return zero(A)
    DM = rhom(M, R, (-im, -im), settings)
    DN = rhom(N, R, (-in_, -in_), settings)
    u = R.inf_lb()
    a, b = window
    c = u - b - 2
    T = derived_tensor(DM, DN, (c + 2, c + 2), settings)
    out = rhom(T, R, window, settings)
    out.provenance = [{"op": "twisted_tensor", "tensor": T.provenance, "dual": out.provenance}]
    return out

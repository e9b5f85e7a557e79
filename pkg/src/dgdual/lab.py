"""Instance checks of the duality theorems, reported at fingerprint level."""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

from .derived import (
    DEFAULT, Derived, Settings, base_change, box_hom_check, derived_tensor, exact, external,
    hochschild, restrict, rhom,
)
from .dg.cohomology import CohFingerprint, pushdown
from .dg.modules import external_tensor, free_module, tensor_complex
from .dg.rings import DGRing, DGRingMap, pushout, tensor_dgrings
from .duality import dualize, omega_smooth, rigid_dualizing, shriek, twisted_tensor
from .errors import NotCohFinite
from .resolution import diagonal_resolution

CAVEAT = "fingerprint equality: necessary condition for D(A)-isomorphism"

FAMILIES = ("finite", "smooth", "reduction", "tensor_dualizing", "unit", "base_change",
            "box_hom", "duality_swap", "diagonal_tensor", "compose")


@dataclass
class VerificationReport:
    theorem: str
    window: tuple
    left: CohFingerprint | None
    right: CohFingerprint | None
    verdict: str
    timing: float = 0.0
    instance: str | None = None
    details: list = dc_field(default_factory=list)
    caveat: str = CAVEAT

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "instance": self.instance, "theorem": self.theorem, "window": list(self.window),
            "left": self.left.to_json() if self.left else None,
            "right": self.right.to_json() if self.right else None,
            "verdict": self.verdict, "timing": round(self.timing, 4),
            "details": self.details, "caveat": self.caveat,
        }


def _report(theorem, window, left, right, t0, details=None, extra_ok=True) -> VerificationReport:
    ok = left == right and extra_ok
    return VerificationReport(theorem, tuple(window), left, right, "pass" if ok else "fail",
                              time.perf_counter() - t0, details=details or [])


def verify_finite(f: DGRingMap, M, window, settings: Settings = DEFAULT) -> VerificationReport:
    """f^!(M) against RHom_A(B, M), both viewed over A."""
    t0 = time.perf_counter()
    if not f.is_cohomologically_finite:
        raise NotCohFinite(f"{f} does not induce a finite map on H0")
    M = exact(M)
    left = restrict(shriek(f, M, window, settings), f)
    B_over_A = exact(restrict(exact(free_module(f.target)), f).module)
    right = rhom(B_over_A, M, window, settings)
    return _report("finite", window, left.fingerprint(window), right.fingerprint(window), t0)


def verify_smooth(f: DGRingMap, M, window, settings: Settings = DEFAULT) -> VerificationReport:
    """f^!(M) against M tensor^L_A Omega_{B/A}."""
    t0 = time.perf_counter()
    M = exact(M)
    omega = omega_smooth(f)
    left = shriek(f, M, window, settings)
    a, b = window
    v = omega.gmax
    MB = base_change(M, f, a - 2 - v, settings)
    right = derived_tensor(MB, exact(omega), window, settings)
    return _report("smooth", window, left.fingerprint(window), right.fingerprint(window), t0,
                   [f"Omega = B[{-omega.gmax}]"])


def verify_reduction(A: DGRing, M, N, window, settings: Settings = DEFAULT) -> VerificationReport:
    """Hochschild cohomology of M tensor_k N against the twisted tensor product."""
    t0 = time.perf_counter()
    left = hochschild(A, M, N, window, settings)
    right = twisted_tensor(M, N, rigid_dualizing(A), window, settings)
    return _report("reduction", window, left.fingerprint(window), right.fingerprint(window), t0)


def _residue_field(C: DGRing):
    from .dg.modules import cyclic_module
    return cyclic_module(C, [C.base.poly.gen(i) for i in range(C.nvars)])


def verify_tensor_dualizing(A: DGRing, B: DGRing, window,
                            settings: Settings = DEFAULT) -> VerificationReport:
    """R_A tensor_k R_B over C = A tensor_k B: RHom_C(R, R) = C, plus biduality on samples."""
    t0 = time.perf_counter()
    C, _, _ = tensor_dgrings(A, B, rename_all=True)
    R = external(rigid_dualizing(A).R, rigid_dualizing(B).R, C)
    R.dualizing = True
    left = rhom(R, R, window, settings).fingerprint(window)
    right = exact(free_module(C)).fingerprint(window)
    details, ok = [], True
    for name, S in (("C", exact(free_module(C))), ("k", exact(_residue_field(C)))):
        inner = (window[0] - C.nvars - 1, window[1] + C.nvars + 1)
        D1 = rhom(S, R, inner, settings)
        D2 = rhom(D1, R, window, settings)
        same = D2.fingerprint(window) == S.fingerprint(window)
        ok = ok and same
        details.append(f"biduality on {name}: {'pass' if same else 'fail'}")
    return _report("tensor_dualizing", window, left, right, t0, details, ok)


def verify_unit(A: DGRing, window, samples=(), settings: Settings = DEFAULT) -> VerificationReport:
    """R tensor^! R = R, and R tensor^! M = M on sample modules."""
    t0 = time.perf_counter()
    datum = rigid_dualizing(A)
    R = datum.R
    left = twisted_tensor(R, R, datum, window, settings).fingerprint(window)
    right = R.fingerprint(window)
    details, ok = [], True
    for M in samples:
        M = exact(M)
        got = twisted_tensor(R, M, datum, window, settings).fingerprint(window)
        want = M.fingerprint(window)
        same = got == want
        ok = ok and same
        details.append(f"unit on {M}: {'pass' if same else 'fail'} ({got.describe()})")
    return _report("unit", window, left, right, t0, details, ok)


def verify_base_change(f: DGRingMap, g: DGRingMap, M, window,
                       settings: Settings = DEFAULT) -> VerificationReport:
    """Lh^* f^!(M) against f'^! Lg^*(M) for the pushout D = B tensor_A C."""
    t0 = time.perf_counter()
    M = exact(M)
    D, h, fp, p = pushout(f, g)
    a, b = window
    X = shriek(f, M, (a, b + p), settings)
    left = base_change(X, h, a - 2, settings, flat_amplitude=p)
    RC = rigid_dualizing(g.target).R
    inf_m = M.inf_lb()
    max_low = RC.inf_lb() + (inf_m if inf_m is not None else 0) - 2 - settings.depth
    MC = base_change(M, g, max_low, settings)
    right = shriek(fp, MC, window, settings)
    return _report("base_change", window, left.fingerprint(window), right.fingerprint(window), t0,
                   [f"pushout over {D}", f"flat amplitude {p}"])


def verify_box_hom(A, B, P, M, Q, N, window, settings: Settings = DEFAULT) -> VerificationReport:
    t0 = time.perf_counter()
    rep = box_hom_check(A, B, P, M, Q, N, window, settings)
    return _report("box_hom", window, rep["left"], rep["right"], t0)


def verify_duality_swap(A: DGRing, M, N, window, settings: Settings = DEFAULT) -> VerificationReport:
    """RHom(D(M), D(N)) against RHom(N, M)."""
    t0 = time.perf_counter()
    M, N = exact(M), exact(N)
    datum = rigid_dualizing(A)
    a, b = window
    im, in_ = M.inf_lb(), N.inf_lb()
    DM = dualize(M, datum, (-im, -im), settings)
    DN = dualize(N, datum, (-in_, b - im + 1), settings)
    left = rhom(DM, DN, window, settings).fingerprint(window)
    right = rhom(N, M, window, settings).fingerprint(window)
    return _report("duality_swap", window, left, right, t0)


def verify_diagonal_tensor(A: DGRing, M, N, window, settings: Settings = DEFAULT) -> VerificationReport:
    """A tensor^L over A^e of (M tensor_k N) against M tensor^L_A N."""
    t0 = time.perf_counter()
    M, N = exact(M), exact(N)
    a, b = window
    from .dg.rings import enveloping
    Ae, mu, _, _ = enveloping(A)
    X = Derived(Ae, external_tensor(M.module, N.module, Ae))
    v = X.sup_ub()
    if v is None:
        left = Derived(A, X.module).fingerprint(window)
    else:
        floor = a - v - 1 - settings.depth
        res, _, _ = diagonal_resolution(A, floor, cap=settings.cap)
        low = None if res.exact else floor - 1 + v
        left = Derived(Ae, tensor_complex(res.complex, X.module), low, None,
                       push=pushdown(mu)).fingerprint(window)
    right = derived_tensor(M, N, window, settings).fingerprint(window)
    return _report("diagonal_tensor", window, left, right, t0)


def verify_compose(f: DGRingMap, g: DGRingMap, M, window, settings: Settings = DEFAULT,
                   margin: int = 6) -> VerificationReport:
    """(g o f)^!(M) against g^!(f^!(M))."""
    t0 = time.perf_counter()
    M = exact(M)
    a, b = window
    left = shriek(g.compose(f), M, window, settings)
    inner = shriek(f, M, (a - margin, b + margin), settings)
    right = shriek(g, inner, window, settings)
    return _report("compose", window, left.fingerprint(window), right.fingerprint(window), t0)

"""Cohomology modules and fingerprints."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..errors import WindowViolation
from ..poly.groebner import buchberger
from ..poly.modules import INFINITE, ModulePres, kernel, select_generators
from ..poly.ring import format_poly
from .modules import as_dgmodule


def cycles(M, n: int) -> list:
    """Generators of Z^n as a submodule of the free cover A0^{r_n}."""
    M = as_dgmodule(M)
    r = M.rank(n)
    if r == 0:
        return []
    if M.rank(n + 1) == 0:
        one = M.field.one
        return [{(j, M.A0.poly.one_exp): one} for j in range(r)]
    return kernel(M.d(n), M.rank(n + 1), M.relations(n + 1), M.A0)


def boundaries(M, n: int) -> list:
    """Generators of B^n plus the relations of the piece, in A0^{r_n}."""
    M = as_dgmodule(M)
    out = [M.A0.reduce_vec(c) for c in M.d(n - 1)] if M.rank(n - 1) else []
    return [v for v in out if v] + list(M.relations(n))


@dataclass
class HomologyData:
    degree: int
    reps: list            # cycle representatives in A0^{r_n}, one per generator
    module: ModulePres    # presentation on those generators


def homology(M, n: int) -> HomologyData:
    M = as_dgmodule(M)
    A0 = M.A0
    r = M.rank(n)
    if r == 0:
        return HomologyData(n, [], ModulePres(A0, 0, []))
    W = boundaries(M, n)
    Z = cycles(M, n)
    gens = select_generators(Z, W, r, A0)
    if not gens:
        return HomologyData(n, [], ModulePres(A0, 0, []))
    rels = kernel(gens, r, W, A0)
    rels = [A0.reduce_vec(v) for v in rels]
    pres = ModulePres(A0, len(gens), [v for v in rels if v])
    from ..poly.modules import prune
    alive, prels = prune(pres.n_gens, pres.relations, A0.field)
    prels = [A0.reduce_vec(v) for v in prels]
    return HomologyData(n, [gens[i] for i in alive], ModulePres(A0, len(alive), [v for v in prels if v]))


def cohomology(M, i: int, window=None) -> ModulePres:
    """H^i(M) presented over A0 (it is annihilated by the image of d on A^-1)."""
    if window is not None and not (window[0] <= i <= window[1]):
        raise WindowViolation(f"degree {i} outside the certified window {window[0]}..{window[1]}")
    return homology(M, i).module


def degree_record(H: ModulePres, push=None) -> dict:
    """``{"dim": d}`` when finite, else ``{"gens": g, "ann": [...]}``."""
    if H.n_gens == 0:
        return {"dim": 0}
    H = H.prune()
    if H.n_gens == 0 or H.is_zero():
        return {"dim": 0}
    dim = H.k_dimension()
    if dim != INFINITE:
        return {"dim": dim}
    ann = H.annihilator()
    if push is not None:
        ann = push(ann)
    return {"gens": H.min_generators(), "ann": [format_poly(g) for g in ann]}


@dataclass
class CohFingerprint:
    window: tuple
    degrees: dict = dc_field(default_factory=dict)     # i -> record

    def __eq__(self, other):
        return (isinstance(other, CohFingerprint) and tuple(self.window) == tuple(other.window)
                and self.degrees == other.degrees)

    def nonzero(self) -> dict:
        return {i: r for i, r in self.degrees.items() if r != {"dim": 0}}

    def restrict(self, a: int, b: int) -> CohFingerprint:
        return CohFingerprint((a, b), {i: r for i, r in self.degrees.items() if a <= i <= b})

    def to_json(self) -> dict:
        return {"window": list(self.window),
                "degrees": {str(i): r for i, r in sorted(self.degrees.items())}}

    @classmethod
    def from_json(cls, data: dict) -> CohFingerprint:
        return cls(tuple(data["window"]), {int(i): r for i, r in data["degrees"].items()})

    def describe(self) -> str:
        nz = self.nonzero()
        if not nz:
            return f"0 on [{self.window[0]}, {self.window[1]}]"
        parts = []
        for i, r in sorted(nz.items()):
            if "dim" in r:
                parts.append(f"H^{i}: dim {r['dim']}")
            else:
                parts.append(f"H^{i}: {r['gens']} gen(s), ann ({', '.join(r['ann']) or '0'})")
        return "; ".join(parts)


def fingerprint(M, window, push=None) -> CohFingerprint:
    M = as_dgmodule(M)
    a, b = window
    out = {}
    for i in range(a, b + 1):
        if M.rank(i) == 0:
            out[i] = {"dim": 0}
        else:
            out[i] = degree_record(homology(M, i).module, push)
    return CohFingerprint((a, b), out)


def amplitude(M) -> tuple | None:
    """(inf, sup) of nonzero cohomology of a bounded module, None if acyclic."""
    M = as_dgmodule(M)
    nz = [n for n in range(M.lo, M.hi + 1) if M.rank(n) and homology(M, n).module.n_gens
          and not homology(M, n).module.is_zero()]
    return (min(nz), max(nz)) if nz else None


def pushdown(mu):
    """Map annihilator ideals along a variable-surjective ring map (used for A^e -> A)."""
    target = mu.target.base

    def push(ann):
        P = target.poly
        imgs = [g.substitute(mu.var_images, P) for g in ann]
        gens = [g for g in imgs if g] + list(target.ideal_gb)
        if not gens:
            return []
        return buchberger(gens)
    return push

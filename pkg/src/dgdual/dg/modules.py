"""DG modules over a DGRing.

Two representations are used.

``SemiFreeModule``: free generators with degrees and a differential matrix with
DGElem entries. Resolutions, dualizing modules and shifts of the ring live
here.

``DGModule``: the degreewise picture. Each degree n carries a finitely
presented A0-module ``A0^r / rels``; the differential and the action of each
exterior generator are A0-linear maps between pieces, stored as columns.
Every Hom, tensor and restriction is computed in this form, and cohomology is
read off from it.

Vectors are dicts ``{(pos, exp): coeff}`` over the ambient polynomial ring of A0.
"""

from __future__ import annotations

from functools import cached_property

from ..errors import InfiniteRank, MapMismatch
from ..poly.groebner import Reducer
from ..poly.modules import QuotientRing, submodule_gb
from ..poly.ring import Poly
from .rings import DGElem, DGRing, DGRingMap, NotAChainMap, bits, ext_sign, popcount


# ------------------------------------------------------------ vector helpers

def vadd(out: dict, v: dict, field, scale=None, shift=None, offset: int = 0):
    """out += scale * x^shift * v with positions moved by offset (in place)."""
    add, mul = field.add, field.mul
    for (p, e), c in v.items():
        if scale is not None:
            c = mul(c, scale)
        if shift is not None:
            e = tuple(a + b for a, b in zip(e, shift))
        t = (p + offset, e)
        old = out.get(t)
        val = c if old is None else add(old, c)
        if val == 0:
            out.pop(t, None)
        else:
            out[t] = val
    return out


def vneg(v: dict, field) -> dict:
    return {t: field.neg(c) for t, c in v.items()}


def poly_times_vec(p: Poly, v: dict, field) -> dict:
    out: dict = {}
    for e, c in p.terms.items():
        vadd(out, v, field, scale=c, shift=e)
    return out


def apply_cols(cols, v: dict, field) -> dict:
    """Image of v under the A0-linear map whose j-th column is cols[j]."""
    out: dict = {}
    for (j, e), c in v.items():
        vadd(out, cols[j], field, scale=c, shift=e)
    return out


def unit(pos: int, ring: QuotientRing) -> dict:
    return {(pos, ring.poly.one_exp): ring.field.one}


def poly_at(p: Poly, pos: int) -> dict:
    return {(pos, e): c for e, c in p.terms.items()}


# ------------------------------------------------------------ degreewise modules

class DGModule:
    """Bounded DG module given degreewise by finitely presented A0-modules."""

    def __init__(self, ring: DGRing, ranks: dict, rels=None, diff=None, act=None,
                 labels=None, name: str | None = None):
        self.ring = ring
        self.ranks = {n: r for n, r in ranks.items() if r > 0}
        self.rels = {n: [v for v in (rels or {}).get(n, []) if v] for n in self.ranks}
        self.diff = diff or {}
        self.act = act or {}
        self.labels = labels or {}
        self.name = name

    def __repr__(self):
        return self.name or f"DGModule({self.ring}, ranks={self.ranks})"

    @property
    def A0(self) -> QuotientRing:
        return self.ring.base

    @property
    def field(self):
        return self.ring.field

    @cached_property
    def lo(self):
        return min(self.ranks) if self.ranks else 0

    @cached_property
    def hi(self):
        return max(self.ranks) if self.ranks else -1

    def is_zero_complex(self) -> bool:
        return not self.ranks

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def relations(self, n: int) -> list:
        return self.rels.get(n, [])

    def d(self, n: int) -> list:
        """Columns of d: piece(n) -> piece(n+1)."""
        if self.rank(n) == 0:
            return []
        if self.rank(n + 1) == 0:
            return [{} for _ in range(self.rank(n))]
        return self.diff[n]

    def action(self, i: int, n: int) -> list:
        if self.rank(n) == 0:
            return []
        if self.rank(n + self.ring.ext_degs[i]) == 0:
            return [{} for _ in range(self.rank(n))]
        return self.act[(i, n)]

    def apply_d(self, n: int, v: dict) -> dict:
        return self.A0.reduce_vec(apply_cols(self.d(n), v, self.field)) if v else {}

    def apply_elem(self, a: DGElem, n: int, v: dict) -> dict:
        """a * v for homogeneous a; v lives in degree n."""
        field = self.field
        out: dict = {}
        for T, c in a.terms.items():
            w, deg = v, n
            for i in reversed(list(bits(T))):
                w = apply_cols(self.action(i, deg), w, field)
                deg += self.ring.ext_degs[i]
                if not w:
                    break
            if w:
                vadd(out, poly_times_vec(c, w, field), field)
        return self.A0.reduce_vec(out)

    def label(self, n: int, j: int) -> str:
        labs = self.labels.get(n)
        return labs[j] if labs else f"b{n}_{j}"

    def _reducer(self, n: int) -> Reducer:
        return Reducer(submodule_gb(self.relations(n), self.rank(n), self.A0), self.A0.poly)

    def check(self) -> list:
        """Violations of d^2 = 0, of well-definedness on relations, and of the Leibniz rule."""
        problems = []
        A = self.ring
        red = {n: self._reducer(n) for n in range(self.lo, self.hi + 2)}

        def zero_in(n, v):
            return not v or (n in red and red[n].member(v)) or (n not in red and self.rank(n) == 0)

        for n in range(self.lo, self.hi + 1):
            for j in range(self.rank(n)):
                v = unit(j, self.A0)
                dv = self.apply_d(n, v)
                if not zero_in(n + 2, self.apply_d(n + 1, dv)):
                    problems.append(f"d^2 != 0 on {self.label(n, j)} (degree {n})")
                for i, deg in enumerate(A.ext_degs):
                    ev = self.apply_elem(A.ext_gen(i), n, v)
                    lhs = self.apply_d(n + deg, ev)
                    # d(e m) = d(e) m - e d(m)
                    rhs = self.A0.reduce_vec(poly_times_vec(A.diffs[i].coeff(0), v, self.field)) \
                        if deg == -1 else self.apply_elem(A.diffs[i], n, v)
                    rhs = dict(rhs)
                    vadd(rhs, vneg(self.apply_elem(A.ext_gen(i), n + 1, dv), self.field), self.field)
                    diff_v = dict(lhs)
                    vadd(diff_v, vneg(rhs, self.field), self.field)
                    if not zero_in(n + deg + 1, self.A0.reduce_vec(diff_v)):
                        problems.append(f"Leibniz fails for {A.ext_names[i]} on {self.label(n, j)}")
            for r in self.relations(n):
                if not zero_in(n + 1, self.apply_d(n, r)):
                    problems.append(f"d not well defined on a relation in degree {n}")
        return problems


# ------------------------------------------------------------ semi-free modules

class SemiFreeModule:
    """Semi-free DG module: generators (name, degree), d(g_j) = sum_i diff[j][i] g_i."""

    def __init__(self, ring: DGRing, gens, diff=None, name: str | None = None):
        self.ring = ring
        self.gens = [(str(n), int(d)) for n, d in gens]
        self.degs = [d for _, d in self.gens]
        self.diff = [dict(c) for c in (diff or [{} for _ in self.gens])]
        for col in self.diff:
            for i in list(col):
                col[i] = ring(col[i])
                if not col[i]:
                    del col[i]
        self.name = name

    def __repr__(self):
        return self.name or f"SemiFree({', '.join(f'{n}:{d}' for n, d in self.gens)})"

    @property
    def ngens(self) -> int:
        return len(self.gens)

    @cached_property
    def gmin(self):
        return min(self.degs) if self.degs else 0

    @cached_property
    def gmax(self):
        return max(self.degs) if self.degs else 0

    def degree_problems(self) -> list:
        out = []
        for j, col in enumerate(self.diff):
            for i, a in col.items():
                want = self.degs[j] + 1 - self.degs[i]
                if a.degrees() - {want}:
                    out.append(f"d({self.gens[j][0]}) has a {self.gens[i][0]}-coefficient of degree "
                               f"{sorted(a.degrees())}, expected {want}")
        return out

    def d_elem(self, v: dict) -> dict:
        """d of sum_j v[j] g_j with DGElem coefficients (Leibniz)."""
        out: dict = {}
        for j, a in v.items():
            terms = {j: a.d()}
            sign = -1 if (a.degree() or 0) % 2 else 1
            for i, b in self.diff[j].items():
                terms[i] = terms.get(i, self.ring.zero()) + a * b * sign
            for i, t in terms.items():
                s = out.get(i, self.ring.zero()) + t
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def check(self) -> list:
        problems = self.degree_problems()
        for j in range(self.ngens):
            dd = self.d_elem(self.diff[j])
            if dd:
                problems.append(f"d^2 != 0 on {self.gens[j][0]}")
        return problems

    def basis(self, n: int) -> list:
        out = []
        for j, dj in enumerate(self.degs):
            for S in self.ring.monomials_of_degree(n - dj):
                out.append((S, j))
        return out

    @cached_property
    def _index(self) -> dict:
        return {}

    def piece_basis(self, n: int) -> dict:
        idx = self._index.get(n)
        if idx is None:
            idx = self._index[n] = {b: k for k, b in enumerate(self.basis(n))}
        return idx

    def piece_d(self, n: int) -> list:
        """Columns of d on the A0-basis (S, j) of degree n."""
        A = self.ring
        field = A.field
        target = self.piece_basis(n + 1)
        cols = []
        for S, j in self.basis(n):
            col: dict = {}
            for T, c in A.d_mono(S).terms.items():
                vadd(col, poly_at(c, target[(T, j)]), field)
            sgn = -1 if popcount(S) % 2 else 1
            eS = A.monomial(S)
            for i, a in self.diff[j].items():
                for T, c in (eS * a).terms.items():
                    vadd(col, poly_at(c if sgn > 0 else -c, target[(T, i)]), field)
            cols.append(A.base.reduce_vec(col))
        return cols

    def piece_action(self, i: int, n: int) -> list:
        A = self.ring
        field = A.field
        target = self.piece_basis(n + A.ext_degs[i])
        cols = []
        for S, j in self.basis(n):
            sg = ext_sign(1 << i, S)
            if not sg:
                cols.append({})
                continue
            pos = target[(S | (1 << i), j)]
            cols.append({(pos, A.base.poly.one_exp): field.one if sg > 0 else field.neg(field.one)})
        return cols

    @cached_property
    def expanded(self) -> DGModule:
        A = self.ring
        if not self.gens:
            return DGModule(A, {}, name=self.name)
        lo, hi = self.gmin - A.amplitude, self.gmax
        ranks, diff, act, labels = {}, {}, {}, {}
        for n in range(lo, hi + 1):
            ranks[n] = len(self.basis(n))
            diff[n] = self.piece_d(n)
            for i in range(len(A.ext)):
                act[(i, n)] = self.piece_action(i, n)
            labels[n] = [_mono_label(A, S, self.gens[j][0]) for S, j in self.basis(n)]
        return DGModule(A, ranks, {}, diff, act, labels, name=self.name)


def _mono_label(A: DGRing, S: int, g: str) -> str:
    mono = "*".join(A.ext_names[i] for i in bits(S))
    return f"{mono}*{g}" if mono else g


def as_dgmodule(M) -> DGModule:
    return M.expanded if isinstance(M, SemiFreeModule) else M


def free_module(A: DGRing, degree: int = 0, name: str | None = None) -> SemiFreeModule:
    """A[-degree]: one generator in the given degree."""
    return SemiFreeModule(A, [("1", degree)], name=name)


# ------------------------------------------------------------ shift, cone

def shift(M, k: int):
    """M[k] (cohomology H^i(M[k]) = H^{i+k}(M))."""
    if isinstance(M, SemiFreeModule):
        A = M.ring
        diff = []
        for col in M.diff:
            new = {}
            for i, a in col.items():
                deg = a.degree() or 0
                new[i] = a if (k * (1 + deg)) % 2 == 0 else -a
            diff.append(new)
        name = f"{M.name}[{k}]" if M.name and k else M.name
        return SemiFreeModule(A, [(n, d - k) for n, d in M.gens], diff, name=name)
    A, field = M.ring, M.field
    ranks = {n - k: r for n, r in M.ranks.items()}
    rels = {n - k: M.relations(n) for n in M.ranks}
    sd = k % 2 == 1
    diff = {n - k: [vneg(c, field) if sd else c for c in M.d(n)] for n in M.ranks}
    act = {}
    for (i, n) in M.act:
        flip = (A.ext_degs[i] * k) % 2 == 1
        act[(i, n - k)] = [vneg(c, field) if flip else c for c in M.act[(i, n)]]
    labels = {n - k: M.labels[n] for n in M.labels}
    return DGModule(A, ranks, rels, diff, act, labels, name=M.name)


def check_chain_map(M: SemiFreeModule, N: SemiFreeModule, images) -> list:
    """images[j] = {i: DGElem}: phi(g_j) in N, degree deg g_j. Returns violations."""
    problems = []
    A = M.ring
    for j, img in enumerate(images):
        for i, a in img.items():
            if a and a.degrees() != {M.degs[j] - N.degs[i]}:
                problems.append(f"phi({M.gens[j][0]}) has wrong degree")
        lhs = N.d_elem(img)
        rhs: dict = {}
        for i, a in M.diff[j].items():
            for l, b in images[i].items():
                rhs[l] = rhs.get(l, A.zero()) + a * b
        keys = set(lhs) | set(rhs)
        if any(lhs.get(l, A.zero()) != rhs.get(l, A.zero()) for l in keys):
            problems.append(f"phi does not commute with d on {M.gens[j][0]}")
    return problems


def cone(M: SemiFreeModule, N: SemiFreeModule, images) -> SemiFreeModule:
    """Cone of phi: M -> N, as N plus M[1]."""
    problems = check_chain_map(M, N, images)
    if problems:
        raise NotAChainMap("; ".join(problems))
    A = M.ring
    off = N.ngens
    gens = list(N.gens) + [(f"s{n}", d - 1) for n, d in M.gens]
    diff = [dict(c) for c in N.diff]
    for j, col in enumerate(M.diff):
        new = {}
        for i, a in col.items():
            deg = a.degree() or 0
            new[off + i] = -a if deg % 2 == 0 else a
        for l, b in images[j].items():
            new[l] = new.get(l, A.zero()) + b
        diff.append(new)
    return SemiFreeModule(A, gens, diff)


# ------------------------------------------------------------ Hom and tensor

def hom_complex(P: SemiFreeModule, N) -> DGModule:
    """Hom_A(P, N) for P with finitely many generators.

    A map phi of degree n is determined by phi(g_j) in N^{n + deg g_j};
    d(phi) = d_N phi - (-1)^n phi d_P, and (a phi)(p) = a phi(p).
    """
    if not isinstance(P, SemiFreeModule):
        raise InfiniteRank("the source of hom_complex must be a finite semi-free module")
    N = as_dgmodule(N)
    A = P.ring
    if N.ring != A:
        raise MapMismatch("modules over different rings")
    field = A.field
    if not P.gens or not N.ranks:
        return DGModule(A, {})
    lo, hi = N.lo - P.gmax, N.hi - P.gmin
    offsets = {}
    ranks, rels, labels = {}, {}, {}
    for n in range(lo, hi + 2):
        off = 0
        offsets[n] = []
        rel_n, lab_n = [], []
        for j, dj in enumerate(P.degs):
            offsets[n].append(off)
            m = n + dj
            for r in N.relations(m):
                rel_n.append({(p + off, e): c for (p, e), c in r.items()})
            lab_n += [f"{P.gens[j][0]}->{N.label(m, b)}" for b in range(N.rank(m))]
            off += N.rank(m)
        ranks[n] = off
        rels[n] = rel_n
        labels[n] = lab_n
    diff, act = {}, {}
    for n in range(lo, hi + 1):
        cols = []
        for j, dj in enumerate(P.degs):
            m = n + dj
            for b in range(N.rank(m)):
                v = unit(b, A.base)
                col: dict = {}
                vadd(col, N.apply_d(m, v), field, offset=offsets[n + 1][j])
                for k, dk in enumerate(P.degs):
                    a = P.diff[k].get(j)
                    if a is None:
                        continue
                    deg = dk + 1 - dj
                    sign = -1 if (n + deg * n) % 2 == 0 else 1
                    img = N.apply_elem(a, m, v)
                    vadd(col, img, field, scale=field.one if sign > 0 else field.neg(field.one),
                         offset=offsets[n + 1][k])
                cols.append(A.base.reduce_vec(col))
        diff[n] = cols
        for i, deg in enumerate(A.ext_degs):
            cols = []
            for j, dj in enumerate(P.degs):
                m = n + dj
                for b in range(N.rank(m)):
                    img = N.apply_elem(A.ext_gen(i), m, unit(b, A.base))
                    cols.append(vadd({}, img, field, offset=offsets[n + deg][j]) if n + deg >= lo else {})
            act[(i, n)] = cols
    return DGModule(A, {n: r for n, r in ranks.items() if n <= hi}, rels, diff, act, labels)


def tensor_complex(P: SemiFreeModule, N) -> DGModule:
    """P tensor_A N for P with finitely many generators.

    d(g_j x) = sum_i (-1)^{|a_ij| deg g_i} g_i (a_ij x) + (-1)^{deg g_j} g_j dx.
    """
    if not isinstance(P, SemiFreeModule):
        raise InfiniteRank("the first factor of tensor_complex must be a finite semi-free module")
    N = as_dgmodule(N)
    A = P.ring
    if N.ring != A:
        raise MapMismatch("modules over different rings")
    field = A.field
    if not P.gens or not N.ranks:
        return DGModule(A, {})
    lo, hi = N.lo + P.gmin, N.hi + P.gmax
    offsets, ranks, rels, labels = {}, {}, {}, {}
    for n in range(lo + min(A.ext_degs, default=0), hi + 2):
        off = 0
        offsets[n] = []
        rel_n, lab_n = [], []
        for j, dj in enumerate(P.degs):
            offsets[n].append(off)
            m = n - dj
            for r in N.relations(m):
                rel_n.append({(p + off, e): c for (p, e), c in r.items()})
            lab_n += [f"{P.gens[j][0]}*{N.label(m, b)}" for b in range(N.rank(m))]
            off += N.rank(m)
        ranks[n], rels[n], labels[n] = off, rel_n, lab_n
    diff, act = {}, {}
    minus = field.neg(field.one)
    for n in range(lo, hi + 1):
        cols = []
        for j, dj in enumerate(P.degs):
            m = n - dj
            for b in range(N.rank(m)):
                v = unit(b, A.base)
                col: dict = {}
                vadd(col, N.apply_d(m, v), field, scale=minus if dj % 2 else None,
                     offset=offsets[n + 1][j])
                for i, a in P.diff[j].items():
                    di = P.degs[i]
                    deg = dj + 1 - di
                    img = N.apply_elem(a, m, v)
                    vadd(col, img, field, scale=minus if (deg * di) % 2 else None,
                         offset=offsets[n + 1][i])
                cols.append(A.base.reduce_vec(col))
        diff[n] = cols
        for i, deg in enumerate(A.ext_degs):
            cols = []
            for j, dj in enumerate(P.degs):
                m = n - dj
                for b in range(N.rank(m)):
                    img = N.apply_elem(A.ext_gen(i), m, unit(b, A.base))
                    cols.append(vadd({}, img, field, scale=minus if (deg * dj) % 2 else None,
                                     offset=offsets[n + deg][j]))
            act[(i, n)] = cols
    return DGModule(A, {n: r for n, r in ranks.items() if lo <= n <= hi}, rels, diff, act, labels)


def tensor_semifree(P: SemiFreeModule, Q: SemiFreeModule) -> SemiFreeModule:
    """P tensor_A Q as a semi-free module on pairs of generators."""
    A = P.ring
    gens, diff = [], []
    nq = Q.ngens
    for j, (pn, pd) in enumerate(P.gens):
        for l, (qn, qd) in enumerate(Q.gens):
            gens.append((f"{pn}*{qn}", pd + qd))
    for j, (pn, pd) in enumerate(P.gens):
        for l, (qn, qd) in enumerate(Q.gens):
            col: dict = {}
            for i, a in P.diff[j].items():
                col[i * nq + l] = col.get(i * nq + l, A.zero()) + a
            for m, b in Q.diff[l].items():
                deg = b.degree() or 0
                sign = -1 if (pd + pd * deg) % 2 else 1
                col[j * nq + m] = col.get(j * nq + m, A.zero()) + b * sign
            diff.append({k: v for k, v in col.items() if v})
    return SemiFreeModule(A, gens, diff)


def hom_semifree(P: SemiFreeModule, N: SemiFreeModule) -> SemiFreeModule:
    """Hom_A(P, N) as a semi-free module on phi_{j,l}: g_j -> n_l, for free-dual situations.

    Valid because P has finitely many generators. The differential is
    d phi_{j,l} = sum_m c_ml phi_{j,m} - sum_k (-1)^{|phi|(1+|a_jk|)} a_jk phi_{k,l},
    where a_jk is the g_j-coefficient of d g_k and c_ml the n_m-coefficient of d n_l.
    """
    A = P.ring
    nl = N.ngens
    gens = []
    for j, (pn, pd) in enumerate(P.gens):
        for l, (nn, nd) in enumerate(N.gens):
            gens.append((f"{pn}->{nn}", nd - pd))
    diff = []
    for j, (pn, pd) in enumerate(P.gens):
        for l, (nn, nd) in enumerate(N.gens):
            phideg = nd - pd
            col: dict = {}
            for m, c in N.diff[l].items():
                col[j * nl + m] = col.get(j * nl + m, A.zero()) + c
            for k in range(P.ngens):
                a = P.diff[k].get(j)
                if a is None:
                    continue
                deg = a.degree() or 0
                sign = -1 if (phideg * (1 + deg)) % 2 == 0 else 1
                col[k * nl + l] = col.get(k * nl + l, A.zero()) + a * sign
            diff.append({k: v for k, v in col.items() if v})
    return SemiFreeModule(A, gens, diff)


# ------------------------------------------------------------ change of rings

def base_change_module(M: SemiFreeModule, f: DGRingMap) -> SemiFreeModule:
    """M tensor_A B along f: same generators, entries mapped through f."""
    if not isinstance(M, SemiFreeModule):
        raise MapMismatch("base change needs a semi-free module; resolve it first")
    if M.ring != f.source:
        raise MapMismatch(f"module over {M.ring}, map from {f.source}")
    diff = [{i: f(a) for i, a in col.items()} for col in M.diff]
    return SemiFreeModule(f.target, M.gens, diff, name=M.name)


class _Lift:
    """Lifts target-ring data to the source along a variable-surjective map."""

    def __init__(self, f: DGRingMap):
        sec = f.variable_section()
        if sec is None:
            raise MapMismatch("restriction needs every target variable to be the image of a source variable")
        A0, B0 = f.source.base, f.target.base
        self.A0 = A0
        self.images = [A0.poly.gen(i) for i in sec]
        self.Bpoly = B0.poly
        kern = [self.poly(g) for g in B0.ideal_gb]
        kern += [A0.reduce(A0.poly.gen(i) - self.poly(v)) for i, v in enumerate(f.var_images)]
        self.kernel = [k for k in kern if k]

    def poly(self, p: Poly) -> Poly:
        return self.A0.reduce(p.substitute(self.images, self.A0.poly))

    def vec(self, v: dict) -> dict:
        by_pos: dict = {}
        for (p, e), c in v.items():
            by_pos.setdefault(p, {})[e] = c
        out: dict = {}
        for p, terms in by_pos.items():
            q = self.poly(Poly(self.Bpoly, terms))
            vadd(out, poly_at(q, p), self.A0.field)
        return out


def restrict(N, f: DGRingMap) -> DGModule:
    """N over B viewed over A through f (f must hit every variable of B)."""
    N = as_dgmodule(N)
    if N.ring != f.target:
        raise MapMismatch(f"module over {N.ring}, map into {f.target}")
    A = f.source
    lift = _Lift(f)
    ranks = dict(N.ranks)
    rels, diff, act = {}, {}, {}
    for n, r in ranks.items():
        rel = [lift.vec(v) for v in N.relations(n)]
        for b in range(r):
            rel += [poly_at(k, b) for k in lift.kernel]
        rels[n] = rel
        diff[n] = [lift.vec(c) for c in N.d(n)]
        for i, deg in enumerate(A.ext_degs):
            img = f.ext_images[i]
            act[(i, n)] = [lift.vec(N.apply_elem(img, n, unit(b, N.A0))) for b in range(r)]
    return DGModule(A, ranks, rels, diff, act, dict(N.labels), name=N.name)


def external_tensor(M, N, C: DGRing) -> DGModule:
    """M tensor_k N over C = A tensor_k B (variables and generators of A first)."""
    M, N = as_dgmodule(M), as_dgmodule(N)
    A, B = M.ring, N.ring
    if C.nvars != A.nvars + B.nvars or len(C.ext) != len(A.ext) + len(B.ext):
        raise MapMismatch("C is not A tensor B")
    field = C.field
    za, zb = (0,) * A.nvars, (0,) * B.nvars

    def left(v, off):
        return {(p + off, e + zb): c for (p, e), c in v.items()}

    def right(v, off):
        return {(p + off, za + e): c for (p, e), c in v.items()}

    lo, hi = M.lo + N.lo, M.hi + N.hi
    layout = {}
    for n in range(lo + min(C.ext_degs, default=0), hi + 2):
        off = 0
        blocks = {}
        for p in range(M.lo, M.hi + 1):
            q = n - p
            if M.rank(p) and N.rank(q):
                blocks[p] = off
                off += M.rank(p) * N.rank(q)
        layout[n] = (blocks, off)
    ranks, rels, diff, act, labels = {}, {}, {}, {}, {}
    minus = field.neg(field.one)
    for n in range(lo, hi + 1):
        blocks, total = layout[n]
        ranks[n] = total
        rel_n, lab_n, cols = [], [], []
        for p, off in blocks.items():
            q = n - p
            rq = N.rank(q)
            for a in range(M.rank(p)):
                for b in range(rq):
                    lab_n.append(f"{M.label(p, a)}|{N.label(q, b)}")
            for r in M.relations(p):
                for b in range(rq):
                    rel_n.append({(off + pa * rq + b, e + zb): c for (pa, e), c in r.items()})
            for s in N.relations(q):
                for a in range(M.rank(p)):
                    rel_n.append({(off + a * rq + pb, za + e): c for (pb, e), c in s.items()})
        for p, off in blocks.items():
            q = n - p
            rq = N.rank(q)
            for a in range(M.rank(p)):
                for b in range(rq):
                    col: dict = {}
                    nb, _ = layout[n + 1]
                    if p + 1 in nb:
                        o = nb[p + 1]
                        dm = M.apply_d(p, unit(a, M.A0))
                        vadd(col, {(o + pa * rq + b, e + zb): c for (pa, e), c in dm.items()}, field)
                    if p in nb:
                        o = nb[p]
                        rq1 = N.rank(q + 1)
                        dn = N.apply_d(q, unit(b, N.A0))
                        vadd(col, {(o + a * rq1 + pb, za + e): c for (pb, e), c in dn.items()}, field,
                             scale=minus if p % 2 else None)
                    cols.append(C.base.reduce_vec(col))
        rels[n], labels[n], diff[n] = rel_n, lab_n, cols
        for i, deg in enumerate(A.ext_degs):
            cols = []
            tb, _ = layout.get(n + deg, ({}, 0))
            for p, off in blocks.items():
                q = n - p
                rq = N.rank(q)
                for a in range(M.rank(p)):
                    img = M.apply_elem(A.ext_gen(i), p, unit(a, M.A0))
                    for b in range(rq):
                        if p + deg not in tb:
                            cols.append({})
                            continue
                        o = tb[p + deg]
                        cols.append({(o + pa * rq + b, e + zb): c for (pa, e), c in img.items()})
            act[(i, n)] = cols
        for j, deg in enumerate(B.ext_degs):
            cols = []
            tb, _ = layout.get(n + deg, ({}, 0))
            for p, off in blocks.items():
                q = n - p
                rq2 = N.rank(q + deg)
                for a in range(M.rank(p)):
                    for b in range(N.rank(q)):
                        if p not in tb:
                            cols.append({})
                            continue
                        o = tb[p]
                        img = N.apply_elem(B.ext_gen(j), q, unit(b, N.A0))
                        v = {(o + a * rq2 + pb, za + e): c for (pb, e), c in img.items()}
                        cols.append(vneg(v, field) if (deg * p) % 2 else v)
            act[(len(A.ext) + j, n)] = cols
    return DGModule(C, ranks, rels, diff, act, labels)


# ------------------------------------------------------------ presented modules

def presented_module(A: DGRing, n_gens: int, relations, degree: int = 0, name=None) -> DGModule:
    """An H0(A)-module A0^n / relations placed in one degree (exterior generators act by 0)."""
    A0 = A.base
    rels = [A0.reduce_vec(r) for r in relations]
    for b in range(n_gens):
        rels += [poly_at(h, b) for h in A.hbar_ideal()]
    act = {(i, degree): [{} for _ in range(n_gens)] for i in range(len(A.ext))}
    return DGModule(A, {degree: n_gens}, {degree: rels}, {degree: [{} for _ in range(n_gens)]}, act,
                    name=name)


def cyclic_module(A: DGRing, ideal, degree: int = 0, name=None) -> DGModule:
    """H0(A)/(ideal) in the given degree."""
    A0 = A.base
    gens = [A0(g) if not isinstance(g, Poly) else A0.reduce(g) for g in ideal]
    return presented_module(A, 1, [poly_at(g, 0) for g in gens if g], degree, name=name)

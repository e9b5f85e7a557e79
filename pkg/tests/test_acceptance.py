"""Acceptance suite: one PASS/FAIL line per criterion, with its time budget.

Run under pytest (the lines are printed in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.
"""

import io
import itertools
import json
import random
import shutil
import sys
import tempfile
import time
from pathlib import Path

import jsonschema
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import W, dgring, free, kos, residue  # noqa: E402

from dgdual.cli import default_corpus, main as cli_main  # noqa: E402
from dgdual.derived import DEFAULT, Settings, base_change, exact  # noqa: E402
from dgdual.dg.cohomology import fingerprint  # noqa: E402
from dgdual.dg.modules import SemiFreeModule, cyclic_module, free_module  # noqa: E402
from dgdual.dg.rings import DGRing, DGRingMap, koszul, pushout, trivial  # noqa: E402
from dgdual.dsl import parse_session  # noqa: E402
from dgdual.duality import check_rigidity, rigid_dualizing  # noqa: E402
from dgdual.lab import (  # noqa: E402
    verify_base_change, verify_finite, verify_reduction, verify_smooth, verify_unit,
)
from dgdual.poly import buchberger, normal_form, poly_ring, s_polys_reduce_to_zero  # noqa: E402
from dgdual.poly.groebner import poly_to_vec  # noqa: E402
from dgdual.session import schema  # noqa: E402

P32003 = 32003
ONE = {"dim": 1}
FREE = {"gens": 1, "ann": []}
DEEPER = Settings(depth=3)

LINES: list = []

# derived computations from criteria 3-8: (label, thunk(settings) -> fingerprints)
DERIVED_CHECKS: list = []


def _line(n, title, ok, elapsed, limit, detail=""):
    status = "PASS" if ok else "FAIL"
    text = f"[{status}] criterion {n:>2}: {title} ({elapsed:.2f}s, limit {limit}s)"
    if detail:
        text += f" {detail}"
    LINES.append(text)
    return text


def _run(n, title, limit, body):
    t0 = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as e:   # a crash is a failure of the criterion, reported as such
        ok, detail = False, f"{type(e).__name__}: {e}"
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < limit
    text = _line(n, title, ok, elapsed, limit, detail)
    print(text)
    return ok, text


def _nz(fp):
    return fp.nonzero()


def _register(label, fn):
    """fn(settings) -> list of fingerprints; stores the default-depth result."""
    DERIVED_CHECKS.append((label, fn))
    return fn(DEFAULT)


# ------------------------------------------------------------ 1. Groebner soundness

IDEALS = [
    ("x,y", "lex", ["x*y - 1", "y^2 - 1"]),
    ("x,y", "lex", ["x^2 - y", "x*y - 1"]),
    ("x,y", "grevlex", ["x^2", "x*y", "y^2"]),
    ("a,b,c", "grevlex", ["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"]),
    ("a,b,c", "lex", ["a + 2*b + 2*c - 1", "a^2 + 2*b^2 + 2*c^2 - a", "2*a*b + 2*b*c - b"]),
    ("x,y,z", "grevlex", ["x^2 + y^2 + z^2 - 1", "x - y", "y - z^2"]),
    ("x,y,z", "deglex", ["x^3 - y*z", "y^2 - x*z", "z^2 - x*y"]),
    ("x,y,z,w", "grevlex", ["x*z - y^2", "y*w - z^2", "x*w - y*z"]),
    ("x,y,z,w", "grevlex", ["x + y + z + w", "x*y + y*z + z*w + w*x",
                            "x*y*z + y*z*w + z*w*x + w*x*y", "x*y*z*w - 1"]),
    ("x,y,z", "lex", ["x^2*y - z^3", "2*x*y - 4*z - 1", "z - y^2", "x^3 - 4*z*y"]),
]


def criterion_1():
    rnd = random.Random(1)
    for names, order, gens in IDEALS:
        P = poly_ring(names, P32003, order)
        gb = buchberger([P(g) for g in gens])
        if not s_polys_reduce_to_zero([poly_to_vec(g) for g in gb], P):
            return False, f"S-polynomials do not reduce on {gens}"
        for g in gens:
            if not normal_form(P(g), gb).is_zero():
                return False, f"generator {g} not in the ideal of its basis"
        for g in gb:
            others = [h for h in gb if h is not g]
            if g.lead_coeff() != 1 or normal_form(g, others) != g:
                return False, f"basis of {gens} is not reduced"
        for _ in range(5):
            f = P.zero()
            for _ in range(4):
                e = tuple(rnd.randint(0, 4) for _ in range(P.nvars))
                f = f + P.monomial(e, rnd.randint(1, P32003 - 1))
            nf = normal_form(f, gb)
            if normal_form(nf, gb) != nf:
                return False, "normal form is not idempotent"
    P = poly_ring("x,y", P32003, "lex")
    gb = buchberger([P("x*y - 1"), P("y^2 - 1")])
    if gb != [P("x - y"), P("y^2 - 1")]:
        return False, f"lex example gave {gb}"
    return True, f"{len(IDEALS)} ideals"


# ------------------------------------------------------------ 2. Koszul regularity

def _rank_mod_p(rows, p=P32003):
    rows = [r[:] for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def _koszul_oracle(n, max_t=4):
    """H^{-i} of K(k[x_1..x_n]; x_1..x_n) in each internal degree t, by ranks."""
    def monos(deg):
        return [e for e in itertools.product(range(deg + 1), repeat=n) if sum(e) == deg]

    def basis(i, t):
        return [(S, m) for S in itertools.combinations(range(n), i) for m in monos(t - i)] if t >= i else []

    dims = {}
    for t in range(max_t + 1):
        ranks = {}
        for i in range(1, n + 1):
            src, tgt = basis(i, t), basis(i - 1, t)
            index = {b: k for k, b in enumerate(tgt)}
            rows = []
            for S, m in src:
                row = [0] * len(tgt)
                for pos, j in enumerate(S):
                    m2 = tuple(a + (1 if k == j else 0) for k, a in enumerate(m))
                    row[index[(S[:pos] + S[pos + 1:], m2)]] += -1 if pos % 2 else 1
                rows.append(row)
            ranks[i] = _rank_mod_p(rows)
        for i in range(0, n + 1):
            size = len(basis(i, t))
            h = size - ranks.get(i, 0) - ranks.get(i + 1, 0)
            dims[(-i, t)] = h
    return dims


def criterion_2():
    names = ["x1", "x2", "x3"]
    for n in (1, 2, 3):
        oracle = _koszul_oracle(n)
        want = {(i, t): (1 if (i, t) == (0, 0) else 0) for (i, t) in oracle}
        if oracle != want:
            return False, f"rank oracle disagrees with exactness for n={n}"
        K = kos(names[:n], names[:n])
        fp = fingerprint(free_module(K), (-n, 0))
        if fp.degrees != {i: (ONE if i == 0 else {"dim": 0}) for i in range(-n, 1)}:
            return False, f"engine gives {fp.describe()} for n={n}"
    return True, "n = 1, 2, 3"


# ------------------------------------------------------------ 3. rigidity

def _rigid_cases():
    return [
        ("k", dgring([]), {0: ONE}),
        ("k[x]", dgring("x"), {-1: FREE}),
        ("k[x,y]", dgring("x,y"), {-2: FREE}),
        ("k[x]/(x^2)", dgring("x", ["x^2"]), {0: {"dim": 2}}),
        ("K(k[x]; x)", kos("x", ["x"]), {0: ONE}),
    ]


def _rigidity_thunk(A, R):
    def fn(settings):
        rep = check_rigidity(A, R, W, settings)
        return [rep["hochschild"], rep["R"], rep["pass"]]
    return fn


def criterion_3():
    for name, A, want in _rigid_cases():
        datum = rigid_dualizing(A)
        if _nz(datum.R.fingerprint(W)) != want:
            return False, f"R for {name} is {datum.R.fingerprint(W).describe()}"
        res = _register(f"rigidity {name}", _rigidity_thunk(A, datum.R))
        if not res[2]:
            return False, f"rigidity fails for {name}"
    A = dgring("x")
    res = _register("wrong shift k[x]", _rigidity_thunk(A, free(A)))
    if res[2]:
        return False, "the unshifted k[x] passed the rigidity check"
    return True, "5 rings; unshifted k[x] rejected"


# ------------------------------------------------------------ 4-6. theorem instances

def _verify_thunk(fn, *args, **kw):
    def run(settings):
        rep = fn(*args, settings=settings, **kw)
        return [rep.left, rep.right, rep.passed]
    return run


def _check_instances(cases, family):
    for label, thunk, want in cases:
        left, right, passed = _register(f"{family} {label}", thunk)
        if not passed or left != right:
            return False, f"{label}: {left.describe()} vs {right.describe()}"
        if want is not None and _nz(left) != want:
            return False, f"{label}: got {left.describe()}"
    return True, f"{len(cases)} instances"


def criterion_4():
    A, B = dgring("x"), dgring("x", ["x^2"])
    f = DGRingMap(A, B, ["x"])
    P, Q = dgring("x,y"), dgring("x,y", ["x^2", "y^2"])
    g = DGRingMap(P, Q, ["x", "y"])
    A1, Pts = dgring("x"), dgring("x", ["x^2 - x"])
    h = DGRingMap(A1, Pts, ["x"])
    cases = [
        ("k[x] -> k[x]/(x^2), M = k[x][1]", _verify_thunk(verify_finite, f, rigid_dualizing(A).R, W),
         {0: {"dim": 2}}),
        ("k[x] -> k[x]/(x^2), M = k[x]", _verify_thunk(verify_finite, f, free(A), W), {1: {"dim": 2}}),
        ("k[x] -> k[x]/(x^2), M = k", _verify_thunk(verify_finite, f, residue(A), W), {0: ONE, 1: ONE}),
        ("k[x,y] -> k[x,y]/(x^2,y^2), M = R", _verify_thunk(verify_finite, g, rigid_dualizing(P).R, W),
         {0: {"dim": 4}}),
        ("k[x] -> k[x]/(x^2-x), M = R", _verify_thunk(verify_finite, h, rigid_dualizing(A1).R, W),
         {0: {"dim": 2}}),
    ]
    return _check_instances(cases, "finite")


def criterion_5():
    k, T, ST = dgring([]), dgring("t"), dgring("s,t")
    A, AT = dgring("x"), dgring("x,t")
    p = DGRingMap(A, AT, ["x"])
    cases = [
        ("k -> k[t], M = k", _verify_thunk(verify_smooth, DGRingMap(k, T, []), free(k), W), {-1: FREE}),
        ("k -> k[s,t], M = k", _verify_thunk(verify_smooth, DGRingMap(k, ST, []), free(k), W), {-2: FREE}),
        ("k[x] -> k[x,t], M = k", _verify_thunk(verify_smooth, p, residue(A), W),
         {-1: {"gens": 1, "ann": ["x"]}}),
        ("k[x] -> k[x,t], M = k[x]", _verify_thunk(verify_smooth, p, free(A), W), {-1: FREE}),
    ]
    return _check_instances(cases, "smooth")


def criterion_6():
    B = dgring("x", ["x^2"])
    A = dgring("x")
    K = kos("x", ["x"])
    cases = [
        ("k[x]/(x^2), k, k", _verify_thunk(verify_reduction, B, residue(B), residue(B), W),
         {i: ONE for i in range(7)}),
        ("k[x]/(x^2), B, B", _verify_thunk(verify_reduction, B, free(B), free(B), W), None),
        ("k[x], k, k", _verify_thunk(verify_reduction, A, residue(A), residue(A), W), {0: ONE, 1: ONE}),
        ("k[x], A, A", _verify_thunk(verify_reduction, A, free(A), free(A), W), None),
        ("K(k[x]; x), k, k", _verify_thunk(verify_reduction, K, residue(K), residue(K), W), None),
    ]
    return _check_instances(cases, "reduction")


# ------------------------------------------------------------ 7. unit law

def corpus_rings():
    """Every ring and DG ring declared in the shipped corpus, deduplicated."""
    seen, out = set(), []
    for path in sorted(default_corpus().glob("*.dgd")):
        ast = parse_session(path.read_text(encoding="utf-8"))
        for name, kind in ast.kinds.items():
            if kind not in ("ring", "dgring"):
                continue
            obj = ast.env[name]
            A = obj if isinstance(obj, DGRing) else trivial(obj)
            key = A.describe()
            if key not in seen:
                seen.add(key)
                out.append((f"{path.stem}:{name}", A))
    return out


def criterion_7():
    rings = corpus_rings()
    for label, A in rings:
        samples = [residue(A), free(A)]
        # non-Gorenstein rings use the narrower window of their corpus instance
        gorenstein = isinstance(rigid_dualizing(A).R.module, SemiFreeModule)
        w = W if gorenstein else (-3, 3)
        left, right, passed = _register(f"unit {label}", _unit_thunk(A, w, samples))
        if not passed:
            return False, f"unit law fails for {label}"
    return True, f"{len(rings)} corpus rings, >= 2 samples each"


def _unit_thunk(A, window, samples):
    def fn(settings):
        rep = verify_unit(A, window, samples=samples, settings=settings)
        return [rep.left, rep.right, rep.passed]
    return fn


# ------------------------------------------------------------ 8. base change

def criterion_8():
    A, B = dgring("x"), dgring("x", ["x^2"])
    C = koszul(A.base, ["x"])
    f, g = DGRingMap(A, B, ["x"]), DGRingMap(A, C, ["x"])
    # oracle: B tensor^L_A C = C + C[1]; x^2 = d(x e) acts null-homotopically on C
    D, _, _, _ = pushout(f, g)
    split = {0: ONE, -1: ONE}
    if _nz(fingerprint(free_module(D), W)) != split:
        return False, "pushout ring is not C + C[1]"
    BC = base_change(exact(cyclic_module(A, ["x^2"])), g, W[0] - 2)
    if _nz(BC.fingerprint(W)) != split:
        return False, f"B tensor^L_A C computed as {BC.fingerprint(W).describe()}"
    for label, M, want in (("M = A", free(A), {0: ONE, 1: ONE}),
                           ("M = R_A", rigid_dualizing(A).R, None)):
        left, right, passed = _register(f"base change {label}",
                                        _verify_thunk(verify_base_change, f, g, M, W))
        if not passed:
            return False, f"{label}: {left.describe()} vs {right.describe()}"
        if want is not None and _nz(left) != want:
            return False, f"{label}: got {left.describe()}"
    return True, "A = k[x], B = k[x]/(x^2), C = K(A; x)"


# ------------------------------------------------------------ 9. window stability

def criterion_9():
    if not DERIVED_CHECKS:
        for fn in (criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8):
            fn()
    for label, fn in DERIVED_CHECKS:
        if fn(DEFAULT) != fn(DEEPER):
            return False, f"{label} changed with a deeper floor"
    # each entry yields two fingerprints and a verdict
    n_results = 2 * len(DERIVED_CHECKS)
    return n_results >= 20, f"{n_results} derived results over {len(DERIVED_CHECKS)} computations"


# ------------------------------------------------------------ 10. CLI contract

def _cli(*argv):
    out = io.StringIO()
    return cli_main(list(argv), out), out.getvalue()


def criterion_10():
    code, _ = _cli("verify", "all")
    if code != 0:
        return False, f"verify all exited {code}"
    code, text = _cli("verify", "all", "--format", "json")
    jsonschema.validate(json.loads(text), schema())
    with tempfile.TemporaryDirectory() as tmp:
        corpus = Path(tmp) / "corpus"
        shutil.copytree(default_corpus(), corpus)
        path = corpus / "bc_x2.expected.json"
        data = json.loads(path.read_text())
        rec = next(r for r in data["expected"] if "left" in r)
        rec["left"] = {"0": {"dim": 5}}
        path.write_text(json.dumps(data))
        code, _ = _cli("verify", "all", "--corpus", str(corpus))
    if code != 1:
        return False, f"corrupted expected file gave exit {code}"
    return True, "exit 0, schema-valid JSON, corrupted file -> exit 1"


CRITERIA = [
    (1, "Groebner soundness", 5, criterion_1),
    (2, "Koszul regularity", 5, criterion_2),
    (3, "rigidity of normal forms", 60, criterion_3),
    (4, "finite maps: f^!(M) = RHom_A(B, M)", 30, criterion_4),
    (5, "smooth maps: f^!(M) = M tensor Omega", 30, criterion_5),
    (6, "Hochschild reduction", 120, criterion_6),
    (7, "unit law of the twisted tensor product", 60, criterion_7),
    (8, "base change on a Tor-dependent square", 60, criterion_8),
    (9, "window stability with floor deepened by 3", 120, criterion_9),
    (10, "CLI contract", 120, criterion_10),
]


@pytest.fixture(scope="module", autouse=True)
def _fresh_registry():
    DERIVED_CHECKS.clear()
    yield


@pytest.mark.parametrize("n, title, limit, body", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(n, title, limit, body):
    ok, text = _run(n, title, limit, body)
    assert ok, text


if __name__ == "__main__":
    results = [_run(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)

import pytest
from hypothesis import given, strategies as st

from dgdual.dg.cohomology import fingerprint
from dgdual.dg.modules import (
    SemiFreeModule, base_change_module, check_chain_map, cone, cyclic_module, free_module,
    hom_complex, restrict, shift, tensor_complex,
)
from dgdual.dg.rings import (
    DGRing, DGRingMap, NotAChainMap, enveloping, identity_map, tensor_dgrings,
    validate_dg_ring,
)

from conftest import dgring, kos, qring

FREE = {"gens": 1, "ann": []}


def nz(M, window=(-4, 4)):
    return fingerprint(M, window).nonzero()


# ------------------------------------------------------------ validation

def test_validate_koszul_ok():
    assert validate_dg_ring(kos("x,y", ["x", "y"])).ok


def test_validate_even_generator():
    A = DGRing(qring("x"), [("e", -2)])
    rep = validate_dg_ring(A)
    assert not rep.ok and rep.violations[0][0] == "DegreeMismatch"


def test_validate_wrong_differential_degree():
    A = DGRing(qring("x"), [("e", -1), ("f", -3)])
    A.set_differentials({"e": A.scalar(A.base("x")), "f": A.scalar(A.base("x"))})
    rep = validate_dg_ring(A)
    assert not rep.ok
    assert any(kind == "DegreeMismatch" for kind, _ in rep.violations)


def test_validate_d_squared():
    A = DGRing(qring("x,y"), [("e1", -1), ("e2", -1), ("f", -3)])
    e1, e2 = A.ext_gen(0), A.ext_gen(1)
    A.set_differentials({"e1": A.scalar(A.base("x")), "e2": A.scalar(A.base("y")), "f": e1 * e2})
    rep = validate_dg_ring(A)
    assert not rep.ok
    assert any(kind == "DSquareNonzero" for kind, _ in rep.violations)


def test_ring_cohomology():
    assert nz(free_module(kos("x", ["x"]))) == {0: {"dim": 1}}
    assert nz(free_module(kos("x", ["0"]))) == {-1: FREE, 0: FREE}
    # K(k[x,y]; x, y) resolves k
    assert nz(free_module(kos("x,y", ["x", "y"]))) == {0: {"dim": 1}}
    # K(k[x]; x^2): H0 = k[x]/x^2
    assert nz(free_module(kos("x", ["x^2"]))) == {0: {"dim": 2}}


# ------------------------------------------------------------ module operations

def test_shift_moves_cohomology():
    A = kos("x", ["0"])
    M = free_module(A)
    assert nz(shift(M, 1)) == {-2: FREE, -1: FREE}
    assert nz(shift(shift(M, 2), -2)) == nz(M)
    P = cyclic_module(dgring("x"), ["x"])
    assert nz(shift(P, -3)) == {3: {"dim": 1}}


def test_cone_of_multiplication():
    A = dgring("x")
    M, N = free_module(A), free_module(A)
    C = cone(M, N, [{0: A.scalar(A.base("x"))}])
    assert nz(C) == {0: {"dim": 1}}
    C1 = cone(M, N, [{0: A.scalar(A.base("1"))}])
    assert nz(C1) == {}


def test_cone_rejects_non_chain_map():
    A = kos("x", ["x"])
    P = SemiFreeModule(A, [("m0", 0), ("m1", -1)], [{}, {0: A.scalar(A.base("x"))}])
    Q = free_module(A)
    images = [{0: A.one()}, {}]   # m1 -> 0 but d(m1) = x m0 -> x != 0
    assert check_chain_map(P, Q, images)
    with pytest.raises(NotAChainMap):
        cone(P, Q, images)


def test_hom_koszul_into_ring():
    A = kos("x", ["0"])
    K = free_module(A)
    H = hom_complex(K, K)
    assert nz(H) == nz(K)
    B = dgring("x")
    Kx = SemiFreeModule(B, [("m0", 0), ("m1", -1)], [{}, {0: B.scalar(B.base("x"))}])
    # Hom(k[x] --x--> k[x], k[x]) has cohomology k in degree 1
    assert nz(hom_complex(Kx, free_module(B))) == {1: {"dim": 1}}


def test_tensor_of_koszul_resolutions():
    B = dgring("x")
    Kx = SemiFreeModule(B, [("m0", 0), ("m1", -1)], [{}, {0: B.scalar(B.base("x"))}])
    T = tensor_complex(Kx, Kx)
    assert nz(T) == {-1: {"dim": 1}, 0: {"dim": 1}}


def test_base_change_and_restrict():
    A = dgring("x")
    B = dgring("x", ["x^2"])
    f = DGRingMap(A, B, ["x"])
    Kx = SemiFreeModule(A, [("m0", 0), ("m1", -1)], [{}, {0: A.scalar(A.base("x"))}])
    # k tensor^L_{k[x]} k[x]/x^2 = k in degrees -1 and 0
    assert nz(base_change_module(Kx, f)) == {-1: {"dim": 1}, 0: {"dim": 1}}
    # B over A is k[x]/(x^2): finite of length 2
    assert nz(restrict(free_module(B), f)) == {0: {"dim": 2}}


def test_tensor_rings_and_enveloping():
    A = kos("x", ["x"])
    C, iA, iB = tensor_dgrings(A, A)
    assert C.nvars == 2 and len(C.ext) == 2
    assert validate_dg_ring(C).ok
    assert not iA.check() and not iB.check()
    Ae, mu, _, _ = enveloping(dgring("x"))
    assert list(Ae.base.names) == ["x", "x'"]
    assert not mu.check()


def test_identity_and_compose():
    A = kos("x,y", ["x", "y"])
    i = identity_map(A)
    assert i.is_identity() and i.compose(i).is_identity()


# ------------------------------------------------------------ d^2 = 0 invariants

polys = st.sampled_from(["0", "x", "y", "x^2", "x*y", "x + y", "y^3 - x"])


@given(st.lists(polys, min_size=1, max_size=3))
def test_random_koszul_is_valid(elements):
    A = kos("x,y", elements)
    assert validate_dg_ring(A).ok
    for S in range(1 << len(A.ext)):
        assert A.d(A.d_mono(S)).is_zero()


@given(st.lists(polys, min_size=1, max_size=2), polys)
def test_koszul_module_d_squared(elements, f):
    A = kos("x,y", elements)
    M = SemiFreeModule(A, [("m0", 0), ("m1", -1)], [{}, {0: A.scalar(A.base(f))}])
    assert M.check() == []
    D = M.expanded
    for n in range(D.lo, D.hi):
        for v in D.d(n):
            assert D.A0.reduce_vec(D.apply_d(n + 1, v)) == {}

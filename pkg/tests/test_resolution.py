import pytest
from hypothesis import given, strategies as st

from dgdual.dg.cohomology import fingerprint
from dgdual.dg.modules import cyclic_module, free_module, presented_module
from dgdual.errors import NotRegularRing, WindowInfeasible
from dgdual.poly import ModulePres
from dgdual.resolution import diagonal_resolution, finite_free_resolution, semifree_resolution

from conftest import dgring, kos, qring


def k_over(A):
    return cyclic_module(A, [A.base.poly.gen(i) for i in range(A.nvars)])


# ------------------------------------------------------------ semi-free

def test_residue_over_polynomial_ring_is_exact():
    res = semifree_resolution(k_over(dgring("x")), -6)
    assert res.exact
    assert res.counts() == {0: 1, -1: 1}


def test_residue_over_dual_numbers_is_truncated():
    res = semifree_resolution(k_over(dgring("x", ["x^2"])), -4)
    assert not res.exact
    assert res.counts() == {0: 1, -1: 1, -2: 1, -3: 1, -4: 1}
    assert res.cert_window == (-3, 0)
    assert res.to_json()["generators"] == {"0": 1, "-1": 1, "-2": 1, "-3": 1, "-4": 1}


def test_residue_over_koszul_ring_needs_one_generator():
    res = semifree_resolution(k_over(kos("x", ["x"])), -6)
    assert res.exact and res.counts() == {0: 1}


def test_semifree_input_is_its_own_resolution():
    A = kos("x", ["x"])
    res = semifree_resolution(free_module(A), -3)
    assert res.exact and res.complex.ngens == 1


def test_floor_cap():
    with pytest.raises(WindowInfeasible):
        semifree_resolution(k_over(dgring("x", ["x^2"])), -10, cap=5)


RINGS = [
    lambda: dgring("x", ["x^2"]),
    lambda: dgring("x,y", ["x^2", "x*y", "y^2"]),
    lambda: kos("x", ["x^2"]),
    lambda: kos("x,y", ["x*y"]),
    lambda: dgring("x,y"),
]


@given(st.integers(0, len(RINGS) - 1), st.integers(-5, -1), st.booleans())
def test_certificate_is_sound(which, floor, shifted):
    A = RINGS[which]()
    M = presented_module(A, 1, [{(0, A.base.poly.gen(0).lead_exp()): A.field.one}],
                         degree=1 if shifted else 0)
    res = semifree_resolution(M, floor)
    lo, hi = res.cert_window
    lo = floor + 1 if lo is None else lo
    w = (lo, max(hi, lo))
    assert fingerprint(res.complex, w) == fingerprint(M, w)
    assert res.complex.check() == []


# ------------------------------------------------------------ finite free

def test_finite_free_resolution_of_residue_field():
    R = qring("x,y")
    m = ModulePres(R, 1, [{(0, (1, 0)): R.field.one}, {(0, (0, 1)): R.field.one}])
    F = finite_free_resolution(m)
    assert F.ranks == [1, 2, 1]
    assert F.is_exact()


def test_finite_free_resolution_of_free_module():
    R = qring("x")
    F = finite_free_resolution(ModulePres(R, 2, []))
    assert F.ranks == [2] and F.length == 0


def test_finite_free_resolution_needs_polynomial_ring():
    R = qring("x", ["x^2"])
    with pytest.raises(NotRegularRing):
        finite_free_resolution(ModulePres(R, 1, [{(0, (1,)): R.field.one}]))


# ------------------------------------------------------------ diagonal

def test_diagonal_of_polynomial_ring():
    res, Ae, mu = diagonal_resolution(dgring("x"), -4)
    assert res.exact and res.counts() == {0: 1, -1: 1}
    res2, _, _ = diagonal_resolution(dgring("x,y"), -4)
    assert res2.exact and res2.counts() == {0: 1, -1: 2, -2: 1}


def test_diagonal_of_dual_numbers_is_infinite():
    res, _, _ = diagonal_resolution(dgring("x", ["x^2"]), -3)
    assert not res.exact
    assert res.counts() == {0: 1, -1: 1, -2: 1, -3: 1}

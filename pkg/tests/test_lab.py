import pytest

from dgdual.dg.rings import DGRingMap, koszul
from dgdual.duality import rigid_dualizing
from dgdual.errors import NotCohFinite
from dgdual.lab import (
    CAVEAT, verify_base_change, verify_box_hom, verify_compose, verify_diagonal_tensor,
    verify_duality_swap, verify_finite, verify_reduction, verify_smooth, verify_tensor_dualizing,
    verify_unit,
)

from conftest import W, dgring, free, residue

ONE = {"dim": 1}
FREE = {"gens": 1, "ann": []}


def both(rep):
    assert rep.passed, rep.to_json()
    assert rep.left == rep.right
    return rep.left.nonzero()


def test_finite_dual_numbers():
    A, B = dgring("x"), dgring("x", ["x^2"])
    f = DGRingMap(A, B, ["x"])
    assert both(verify_finite(f, rigid_dualizing(A).R, W)) == {0: {"dim": 2}}
    assert both(verify_finite(f, free(A), W)) == {1: {"dim": 2}}
    assert both(verify_finite(f, residue(A), W)) == {0: ONE, 1: ONE}


def test_finite_needs_finite_map():
    A, T = dgring("x"), dgring("x,t")
    with pytest.raises(NotCohFinite):
        verify_finite(DGRingMap(A, T, ["x"]), free(A), W)


def test_smooth_line():
    k, T = dgring([]), dgring("t")
    assert both(verify_smooth(DGRingMap(k, T, []), free(k), W)) == {-1: FREE}


def test_smooth_relative():
    A, AT = dgring("x"), dgring("x,t")
    out = both(verify_smooth(DGRingMap(A, AT, ["x"]), residue(A), W))
    assert out == {-1: {"gens": 1, "ann": ["x"]}}


def test_reduction_infinite_ext():
    B = dgring("x", ["x^2"])
    k = residue(B)
    assert both(verify_reduction(B, k, k, W)) == {i: ONE for i in range(7)}


def test_reduction_polynomial():
    A = dgring("x")
    k = residue(A)
    assert both(verify_reduction(A, k, k, W)) == {0: ONE, 1: ONE}


def test_tensor_dualizing():
    rep = verify_tensor_dualizing(dgring("x"), dgring("x", ["x^2"]), W)
    assert rep.passed
    assert all(d.endswith("pass") for d in rep.details)


def test_unit_with_samples():
    B = dgring("x", ["x^2"])
    rep = verify_unit(B, W, samples=[residue(B), free(B)])
    assert rep.passed and len(rep.details) == 2


def test_base_change_tor_dependent_square():
    A, B = dgring("x"), dgring("x", ["x^2"])
    C = koszul(A.base, ["x"])
    f, g = DGRingMap(A, B, ["x"]), DGRingMap(A, C, ["x"])
    assert both(verify_base_change(f, g, free(A), W)) == {0: ONE, 1: ONE}


def test_box_hom():
    A, Y = dgring("x"), dgring("y")
    assert both(verify_box_hom(A, Y, residue(A), free(A), residue(Y), free(Y), W)) == {2: ONE}


def test_duality_swap_and_diagonal():
    B = dgring("x", ["x^2"])
    k = residue(B)
    assert both(verify_duality_swap(B, k, free(B), W)) == {0: ONE}
    assert both(verify_diagonal_tensor(B, k, k, W)) == {i: ONE for i in range(-6, 1)}


def test_compose():
    k, A, B = dgring([]), dgring("x"), dgring("x", ["x^2"])
    f, g = DGRingMap(k, A, []), DGRingMap(A, B, ["x"])
    assert both(verify_compose(f, g, free(k), W)) == {0: {"dim": 2}}


def test_report_is_deterministic():
    B = dgring("x", ["x^2"])
    r1 = verify_reduction(B, residue(B), residue(B), W).to_json()
    r2 = verify_reduction(B, residue(B), residue(B), W).to_json()
    r1.pop("timing"), r2.pop("timing")
    assert r1 == r2
    assert r1["caveat"] == CAVEAT

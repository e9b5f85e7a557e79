import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from dgdual.dg.modules import cyclic_module, free_module
from dgdual.dg.rings import koszul, trivial
from dgdual.derived import exact
from dgdual.poly import QuotientRing, poly_ring

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=150, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

W = (-6, 6)


def qring(names, ideal=(), field=None, order="grevlex"):
    return QuotientRing(poly_ring(names, field, order), list(ideal))


def dgring(names, ideal=()):
    return trivial(qring(names, ideal))


def kos(names, elements, ideal=()):
    return koszul(qring(names, ideal), list(elements))


def free(A, deg=0):
    return exact(free_module(A, deg))


def residue(A):
    return exact(cyclic_module(A, [A.base.poly.gen(i) for i in range(A.nvars)]))


@pytest.fixture
def kx():
    return dgring("x")


@pytest.fixture
def dual_numbers():
    return dgring("x", ["x^2"])


@pytest.fixture
def koszul_x():
    return kos("x", ["x"])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.LINES:
        terminalreporter.write_line(line)

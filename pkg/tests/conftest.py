import random

import pytest
from mpmath import mp

from tce import ContinuedFraction, TceParams

D2_ALPHA = ("1", "0.5", "pi-2.5", "1")
ASYMM_ALPHA = ("0.5", "pi/7", "pi/4", "17pi/28-0.5")


def fib_list(n):
    out = [0, 1]
    while len(out) <= n:
        out.append(out[-1] + out[-2])
    return out


def phi_oracle(bits=320):
    """(sqrt(5) - 1)/2 computed independently of the library."""
    with mp.workprec(bits):
        return (mp.sqrt(5) - 1) / 2


@pytest.fixture(scope="session")
def golden():
    return TceParams(D2_ALPHA, (2, 1), "phi", (1, 1))


@pytest.fixture(scope="session")
def sqrt2():
    return TceParams(ASYMM_ALPHA, (2, 1), "sqrt2m1", (1, 1))


@pytest.fixture(scope="session")
def onetwo():
    return TceParams(D2_ALPHA, (2, 1), {"tail": [1, 2]}, (2, 3))


@pytest.fixture(scope="session")
def param_grid():
    """lam x eta grid: three quadratic irrationals, three eta lattice points."""
    grid = []
    for lname, lspec in (("phi", "phi"), ("sqrt2m1", "sqrt2m1"), ("onetwo", {"tail": [1, 2]})):
        for pq in ((1, 1), (1, 2), (2, 3)):
            grid.append(("%s_p%dq%d" % (lname, *pq),
                         TceParams(D2_ALPHA, (2, 1), lspec, pq)))
    return grid


@pytest.fixture
def rng():
    return random.Random(20250809)

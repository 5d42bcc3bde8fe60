import numpy as np
import pytest
from hypothesis import settings

from mik import N1, D, NormalFormDecomposition, OrbitRecord
from mik.ellipsoid import EllipsoidSpec, ellipsoid_system

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def worked_record():
    """i1 = 1, monodromy N1(1,1) <> D(2): i(m) = 2m - 1."""
    return OrbitRecord("g", 2, 1, NormalFormDecomposition.of(N1(1, 1), D(2)))


def hyperbolic_system(n, i1s):
    """Planted census of hyperbolic orbits N1(1,1) <> D(k+2) <> ..."""
    out = []
    for k, i1 in enumerate(i1s):
        blocks = [N1(1, 1)] + [D(k + 2 + j) for j in range(n - 1)]
        out.append(OrbitRecord(f"h{k + 1}", n, i1, NormalFormDecomposition.of(*blocks)))
    return out


_CORPUS = {}


def corpus(n):
    if n not in _CORPUS:
        _CORPUS[n] = ellipsoid_system(EllipsoidSpec.sqrt_primes(n))
    return _CORPUS[n]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance reporting ---------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

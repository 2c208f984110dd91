import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from sandglass.setfam import PairOfFamilies, make_sandglass_pair, make_triangle_power

# lines collected by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def sandglass2():
    return make_sandglass_pair(2, 0b01)


@pytest.fixture
def triangle():
    return make_triangle_power(1)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


# brute-force oracles over all quadruples, independent of the grouping code


def brute_recovering(pair):
    A, B = pair.a.members, pair.b.members
    for a, a2, b, b2 in itertools.product(A, A, B, B):
        if a & ~b == a2 & ~b2 and a != a2:
            return False
        if b & ~a == b2 & ~a2 and b != b2:
            return False
    return True


def brute_cancellative(pair, side="both"):
    A, B = pair.a.members, pair.b.members
    for a, a2, b, b2 in itertools.product(A, A, B, B):
        if side in ("left", "both") and a & ~b == a2 & ~b and a != a2:
            return False
        if side in ("right", "both") and b & ~a == b2 & ~a and b != b2:
            return False
    return True


@st.composite
def pairs(draw, max_n=5):
    n = draw(st.integers(0, max_n))
    universe = st.integers(0, (1 << n) - 1)
    a = draw(st.sets(universe, max_size=8))
    b = draw(st.sets(universe, max_size=8))
    return PairOfFamilies.from_masks(n, a, b)

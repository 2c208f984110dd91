import json
import math

import numpy as np
import pytest

from sandglass.bounds import g_array
from sandglass.certify import (
    Certificate,
    GridSpec,
    appendix_spec,
    empirical_lipschitz,
    grid_certify,
    register,
)

THETA = 2.222
LOG2_FLOOR = math.log2(2.2499)


def brute_grid_max(func, k):
    """Plain double loop over the grid, no chunking."""
    best, arg = -math.inf, None
    for i in range(k + 1):
        for j in range(k + 1):
            v = float(func(np.float64(i / k), np.float64(j / k)))
            if v > best:
                best, arg = v, (i / k, j / k)
    return best, arg


def test_quad_example():
    c = grid_certify(GridSpec("quad_test", k=2, lipschitz=1.0, threshold=1.6))
    assert c.grid_max == 1.0 and c.argmax == (0.5, 0.5)
    assert c.certified_bound == 1.5 and c.passed
    assert c.evaluations == 9 and c.margin == 0.5


@pytest.mark.parametrize("k", [1, 7, 40])
def test_g_star_grid_matches_brute_force(k):
    c = grid_certify(GridSpec("g_star", k=k, lipschitz=25, threshold=1.0, func_params=(THETA,)), rows_per_chunk=3)
    ref, arg = brute_grid_max(lambda x, y: g_array(x, y, THETA, True), k)
    assert c.grid_max == ref and c.argmax == arg


def test_coarse_g_star_fails_with_big_margin():
    c = grid_certify(appendix_spec(k=300))
    assert c.certified_bound == c.grid_max + 25 / 300
    assert not c.passed
    # recorded run: grid_max 1.1686956035370861 at (0.33, 0.33)
    assert c.grid_max == pytest.approx(1.1686956035370861, abs=1e-13)
    assert c.argmax == (0.33, 0.33)


def test_determinism_across_chunking_and_workers():
    spec = appendix_spec(k=240)
    base = grid_certify(spec)
    for rows in (1, 7, 1000):
        assert grid_certify(spec, rows_per_chunk=rows) == base
    assert grid_certify(spec, workers=2, rows_per_chunk=13) == base


def test_argmax_tie_break_is_first_in_row_major():
    # constant function: every point ties, first one wins regardless of chunking
    for rows in (1, 4):
        c = grid_certify(GridSpec("constant", k=9, lipschitz=1, threshold=1, func_params=(0.5,)), rows_per_chunk=rows)
        assert c.argmax == (0.0, 0.0)


def test_soundness_quad(rng):
    c = grid_certify(GridSpec("quad_test", k=10, lipschitz=1.0, threshold=2.0))
    x, y = rng.uniform(0, 1, (2, 10**5))
    assert np.all(1 - (x - 0.5) ** 2 - (y - 0.5) ** 2 <= c.certified_bound)


def test_soundness_g_off_grid(rng):
    c = grid_certify(appendix_spec(k=300))
    x, y = rng.uniform(0, 1, (2, 10**5))
    assert np.all(g_array(x, y, THETA) <= c.certified_bound)
    assert np.all(g_array(x, y, THETA, starred=True) <= c.certified_bound)


def test_certified_bound_monotone_in_k():
    for func, params, lip in (("quad_test", (), 1.0), ("g_star", (THETA,), 25.0)):
        bounds = [
            grid_certify(GridSpec(func, k=k, lipschitz=lip, threshold=9, func_params=params)).certified_bound
            for k in (150, 300, 600)
        ]
        assert bounds[1] <= bounds[0] + 1e-12
        assert bounds[2] <= bounds[1] + 1e-12


def test_empirical_lipschitz_simple_functions():
    assert empirical_lipschitz("quad_test", samples=10**5) <= 1 + 1e-3
    assert empirical_lipschitz("constant", (3.0,), samples=1000) == 0.0
    with pytest.raises(ValueError):
        empirical_lipschitz("quad_test", samples=0)


def test_empirical_lipschitz_g_star_small():
    assert empirical_lipschitz("g_star", (THETA,), samples=10**5, seed=3) <= 25


def test_register_custom_function():
    register("tilted", lambda x, y, a: a * x + 0 * y, ("a",))
    c = grid_certify(GridSpec("tilted", k=4, lipschitz=2, threshold=3, func_params=(2.0,)))
    assert c.grid_max == 2.0 and c.argmax == (1.0, 0.0)


def test_spec_validation():
    with pytest.raises(ValueError, match="unknown"):
        GridSpec("nope", k=3, lipschitz=1, threshold=0)
    with pytest.raises(ValueError):
        GridSpec("quad_test", k=0, lipschitz=1, threshold=0)
    with pytest.raises(ValueError):
        GridSpec("quad_test", k=3, lipschitz=0, threshold=0)
    with pytest.raises(ValueError, match="parameters"):
        GridSpec("g_star", k=3, lipschitz=1, threshold=0)
    with pytest.raises(ValueError, match="overflow"):
        GridSpec("quad_test", k=2**32, lipschitz=1, threshold=0)


def test_certificate_json_shape():
    c = grid_certify(GridSpec("g_star", k=20, lipschitz=25, threshold=LOG2_FLOOR, func_params=(THETA,)))
    d = c.to_dict()
    assert set(d) == {
        "func", "params", "k", "lipschitz", "threshold", "grid_max", "argmax",
        "margin", "certified_bound", "pass", "evaluations", "wall_ms",
    }
    assert d["params"] == {"theta": THETA}
    json.dumps(d)
    # timing does not take part in equality
    assert Certificate(**{**c.__dict__, "wall_ms": 123.0}) == c

"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

The lines are also collected in ``conftest.ACCEPTANCE_LINES`` and repeated
in the pytest terminal summary.
"""

import math
import os

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from sandglass import constants
from sandglass.bounds import (
    BoundParams,
    filtered_condition_check,
    g_array,
    rhs_bound,
    theorem_rate,
)
from sandglass.certify import empirical_lipschitz, reproduce_appendix
from sandglass.f2code import (
    binomial_identity,
    enumerate_information_sets,
    expected_info_fraction,
    one_sided_upper_check,
    random_matrix,
    tolhuizen_pair,
    trial_seed,
)
from sandglass.search import exhaustive_max_product, random_greedy_pair, verify_witness
from sandglass.setfam import is_cancellative, make_triangle_power, permute_pair, product
from suites import SUITES

THETA = constants.THETA


def report(num, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def appendix_certificate():
    return reproduce_appendix(workers=os.cpu_count() or 1)


@pytest.fixture(scope="module")
def tolhuizen_trials():
    n, k, trials, seed = 12, 4, 200, 0
    out = []
    for t in range(trials):
        mat = random_matrix(n, k, trial_seed(seed, t))
        rep = enumerate_information_sets(mat)
        pair = tolhuizen_pair(mat, rep.info_sets) if rep.count else None
        out.append((rep, pair))
    return out


def test_criterion_1_grid_certificate(appendix_certificate):
    c = appendix_certificate
    log_claim = math.log2(constants.CLAIM_RATE)
    ok = (
        c.k == 30000
        and c.lipschitz == 25
        and c.grid_max <= 1.1687
        and c.certified_bound == c.grid_max + 25 / 30000
        and c.certified_bound < 1.1696
        and log_claim > 1.1698
        and c.passed
    )
    report(1, ok, f"grid_max={c.grid_max:.10f} at {c.argmax}, certified={c.certified_bound:.10f} < 1.1696, "
                  f"log2(2.2499)={log_claim:.10f} > 1.1698, {c.evaluations} evals in {c.wall_ms / 1e3:.1f}s")


def test_criterion_2_lipschitz_spot_check():
    est = empirical_lipschitz("g_star", (THETA,), samples=10**6, seed=0)
    report(2, est <= 25, f"empirical Lipschitz estimate {est:.4f} <= 25")


def test_criterion_3_dominance(appendix_certificate):
    rng = np.random.default_rng(3)
    x = rng.uniform(0, 1, 10**6)
    y = rng.uniform(0, 1, 10**6)
    # uniform(0, 1) can return exactly 0; the criterion is on the open square
    keep = (x > 0) & (y > 0)
    x, y = x[keep], y[keep]
    g = g_array(x, y, THETA)
    gs = g_array(x, y, THETA, starred=True)
    v1 = int(np.sum(g > gs))
    v2 = int(np.sum(gs > appendix_certificate.certified_bound))
    report(3, v1 == 0 and v2 == 0 and x.size >= 999_999,
           f"{x.size} points: g>g* violations={v1}, g*>certified violations={v2}, max g*={gs.max():.10f}")


def test_criterion_4_rate_arithmetic():
    r_ny = theorem_rate(BoundParams(THETA, constants.ALPHA, constants.MU_REC_NAIR_YAZDANPANAH))
    r_j = theorem_rate(BoundParams(THETA, constants.ALPHA, constants.MU_CAN_JANZER))
    ok = 2.2542 <= r_ny <= 2.2544 and 2.2556 <= r_j <= 2.2558
    report(4, ok, f"rate(mu_can=2.2663)={r_ny:.7f} in [2.2542, 2.2544]; rate(mu_can=2.2682)={r_j:.7f} in [2.2556, 2.2558]")


def test_criterion_5_tolhuizen(tolhuizen_trials):
    fractions = [float(rep.fraction) for rep, _ in tolhuizen_trials]
    mean, best = float(np.mean(fractions)), max(fractions)
    target = expected_info_fraction(8)
    pairs = [p for _, p in tolhuizen_trials if p is not None]
    left = all(is_cancellative(p, "left") for p in pairs)
    ok = abs(mean - target) <= 0.02 and best >= 0.2888 and left
    report(5, ok, f"n=12 k=4 200 trials: mean fraction {mean:.5f} (target {target:.5f} +/- 0.02), "
                  f"best {best:.5f} >= 0.2888, {len(pairs)} pairs all left-cancellative={left}")


def test_criterion_6_upper_bound(tolhuizen_trials):
    pairs = [p for _, p in tolhuizen_trials if p is not None]
    for n in range(1, 10):
        mat = random_matrix(n, n // 3, trial_seed(6, n))
        sets = enumerate_information_sets(mat).info_sets
        if sets:
            pairs.append(tolhuizen_pair(mat, sets))
    checks = [one_sided_upper_check(p) for p in pairs]
    ident = all(binomial_identity(n) for n in range(0, 21))
    ok = all(c.ok for c in checks) and ident
    report(6, ok, f"upper check on {len(checks)} constructed pairs: {sum(c.ok for c in checks)} ok; "
                  f"sum 2^(n-i) C(n,i) = 3^n for n <= 20: {ident}")


def test_criterion_7_property_suites():
    failures = {name: len(fn(count=1000)) for name, fn in SUITES.items()}
    total = sum(failures.values())
    report(7, total == 0, f"{len(failures)} suites x 1000 instances, failures: {total} "
                          + ", ".join(f"{k}={v}" for k, v in failures.items() if v))


def _uniform_instances(rng):
    yield from (make_triangle_power(p) for p in (1, 2, 3))
    for _ in range(600):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n))
        kind = ("recovering", "cancellative")[int(rng.integers(0, 2))]
        p = random_greedy_pair(n, kind, rng, k_uniform=k)
        if len(p.a) and len(p.b):
            yield p
    # relabelled products of triangle with itself stay 2-uniform on [6]
    tri2 = product(make_triangle_power(1), make_triangle_power(1))
    for _ in range(20):
        yield permute_pair(tri2, [int(i) for i in rng.permutation(6)])


def test_criterion_8_instance_bounds():
    rng = np.random.default_rng(8)
    checked = violations = 0
    for p in _uniform_instances(rng):
        if not filtered_condition_check(p, THETA).holds:
            continue
        checked += 1
        if math.log2(len(p.a)) > rhs_bound(p, THETA) + 1e-9:
            violations += 1
        if math.log2(p.size_product) > rhs_bound(p, THETA, symmetric=True) + 1e-9:
            violations += 1
    tri = make_triangle_power(1)
    chk = filtered_condition_check(tri, THETA)
    rhs = rhs_bound(tri, THETA)
    tri_ok = (
        chk.worst[3] == pytest.approx(4 / 9, abs=1e-15)
        and chk.worst[3] <= 1 / THETA
        and abs(rhs - 1.752916) < 1e-4
        and rhs >= math.log2(3)
    )
    report(8, violations == 0 and checked >= 3 and tri_ok,
           f"{checked} uniform pairs pass the filtered check at theta=2.222, bound violations={violations}; "
           f"triangle worst ratio {chk.worst[3]:.6f} <= {1 / THETA:.6f}, rhs {rhs:.6f} >= log2 3")


def test_criterion_9_search_ground_truth():
    r1 = exhaustive_max_product(1, "recovering")
    r2 = exhaustive_max_product(2, "recovering")
    r3 = exhaustive_max_product(3, "recovering")
    c3 = exhaustive_max_product(3, "cancellative")
    results = (r1, r2, r3, c3)
    ok = (
        r1.best_product == 2
        and r2.best_product == 4
        and r3.best_product >= 8
        and c3.best_product >= 9
        and all(r.exhaustive and verify_witness(r) for r in results)
    )
    report(9, ok, f"recovering n=1..3: {r1.best_product}, {r2.best_product}, {r3.best_product}; "
                  f"cancellative n=3: {c3.best_product}; witnesses verified")

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sandglass.f2code import (
    F2Matrix,
    best_construction,
    binomial_identity,
    enumerate_information_sets,
    expected_info_fraction,
    format_matrix,
    gf2_rank,
    is_information_set,
    one_sided_upper_check,
    parse_matrix,
    random_matrix,
    tolhuizen_pair,
    trial_seed,
)
from sandglass.constants import INFO_SET_DENSITY
from sandglass.search import random_greedy_pair
from sandglass.setfam import PairOfFamilies, from_elements, is_cancellative

S = from_elements
EXAMPLE = F2Matrix.from_lists([[1, 0], [0, 1], [0, 0]])


def det_mod2(rows):
    """Laplace expansion over GF(2); rows are lists of bits."""
    n = len(rows)
    if n == 0:
        return 1
    total = 0
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total ^= det_mod2(minor)
    return total


def test_matrix_validation():
    assert EXAMPLE.rows == (1, 2, 0) and EXAMPLE.k == 1
    with pytest.raises(ValueError):
        F2Matrix(2, 3, (0, 0))
    with pytest.raises(ValueError):
        F2Matrix(2, 1, (0,))
    with pytest.raises(ValueError):
        F2Matrix(2, 1, (0, 2))
    with pytest.raises(ValueError):
        F2Matrix.from_lists([[1, 0], [1]])


def test_information_set_examples():
    assert is_information_set(EXAMPLE, S([1, 2]))
    assert not is_information_set(EXAMPLE, S([1, 3]))
    rep = F2Matrix.from_lists([[1, 1], [1, 1], [0, 1]])
    assert not is_information_set(rep, S([1, 2]))
    with pytest.raises(ValueError):
        is_information_set(EXAMPLE, S([1]))


@settings(max_examples=200)
@given(st.integers(1, 4), st.data())
def test_rank_matches_determinant(m, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, 1), min_size=m, max_size=m), min_size=m, max_size=m))
    mat = F2Matrix.from_lists(rows)
    assert (gf2_rank(mat.rows) == m) == (det_mod2(rows) == 1)
    assert is_information_set(mat, (1 << m) - 1) == (det_mod2(rows) == 1)


def test_rank_basics():
    assert gf2_rank([]) == 0
    assert gf2_rank([0, 0]) == 0
    assert gf2_rank([0b11, 0b01, 0b10]) == 2
    assert gf2_rank([1 << i for i in range(64)]) == 64


def test_enumeration_examples():
    rep = enumerate_information_sets(EXAMPLE)
    assert rep.info_sets == (S([1, 2]),) and rep.fraction == Fraction(1, 3) and rep.total == 3
    zero = F2Matrix(4, 2, (0, 0, 0, 0))
    assert enumerate_information_sets(zero).count == 0
    ident = F2Matrix(3, 3, (1, 2, 4))
    rep = enumerate_information_sets(ident)
    assert rep.info_sets == (0b111,) and rep.fraction == 1


@pytest.mark.parametrize("seed", range(8))
def test_enumeration_matches_brute_force(seed):
    mat = random_matrix(9, 4, seed)
    rep = enumerate_information_sets(mat)
    brute = sorted(
        sum(1 << i for i in idx)
        for idx in itertools.combinations(range(mat.n), mat.m)
        if is_information_set(mat, sum(1 << i for i in idx))
    )
    assert sorted(rep.info_sets) == brute


def test_sampling_mode():
    mat = random_matrix(12, 4, 5)
    exact = enumerate_information_sets(mat)
    est = enumerate_information_sets(mat, mode="sample", samples=4000, seed=1)
    assert not est.exhaustive and est.samples == 4000 and est.info_sets is None
    assert abs(float(est.fraction) - float(exact.fraction)) < 0.04
    with pytest.raises(ValueError):
        enumerate_information_sets(F2Matrix(25, 1, (0,) * 25), mode="exhaustive")
    with pytest.raises(ValueError):
        enumerate_information_sets(mat, mode="fast")


def test_expected_fraction():
    assert expected_info_fraction(1) == 0.5
    assert expected_info_fraction(8) == pytest.approx(0.289919117858517, abs=1e-15)
    assert math.prod(Fraction(2**i - 1, 2**i) for i in range(1, 9)) == Fraction(
        round(expected_info_fraction(8) * 2**36), 2**36
    )
    assert INFO_SET_DENSITY == pytest.approx(0.288788095086602, abs=1e-15)
    assert round(INFO_SET_DENSITY, 4) == 0.2888
    with pytest.raises(ValueError):
        expected_info_fraction(0)


def test_tolhuizen_examples():
    p = tolhuizen_pair(EXAMPLE)
    assert p.a.members == (0, S([1]), S([2]), S([1, 2]))
    assert p.b.members == (S([3]),)
    assert p.size_product == 4 and is_cancellative(p, "left")
    p = tolhuizen_pair(F2Matrix(1, 1, (1,)))
    assert p.a.members == (0, 1) and p.b.members == (0,) and p.size_product == 2
    with pytest.raises(ValueError, match="no information set"):
        tolhuizen_pair(F2Matrix(3, 2, (0, 0, 0)))


@pytest.mark.parametrize("n", range(2, 15))
def test_tolhuizen_left_cancellative(n):
    for t in range(4):
        mat = random_matrix(n, n // 3, trial_seed(99, t))
        rep = enumerate_information_sets(mat)
        if not rep.count:
            continue
        p = tolhuizen_pair(mat, rep.info_sets)
        assert is_cancellative(p, "left")
        assert len(p.a) == 2 ** mat.m
        assert one_sided_upper_check(p).ok


def test_random_matrix_determinism_and_errors():
    assert random_matrix(3, 1, 7) == random_matrix(3, 1, 7)
    assert random_matrix(12, 4, trial_seed(1, 0)) != random_matrix(12, 4, trial_seed(1, 1))
    with pytest.raises(ValueError):
        random_matrix(3, 3, 0)


def test_two_by_one_fractions():
    seen = set()
    for seed in range(50):
        seen.add(enumerate_information_sets(random_matrix(2, 1, seed)).fraction)
    assert seen <= {Fraction(0), Fraction(1, 2), Fraction(1)}


def test_monte_carlo_mean_within_three_standard_errors():
    fr = np.array([float(enumerate_information_sets(random_matrix(10, 4, trial_seed(3, t))).fraction) for t in range(300)])
    se = fr.std(ddof=1) / math.sqrt(len(fr))
    assert abs(fr.mean() - expected_info_fraction(6)) <= 3 * se


def test_best_construction_examples():
    res = best_construction(3, 1, trials=50, seed=0)
    assert res.product >= 4
    assert best_construction(8, 2, 1, seed=11) == best_construction(8, 2, 1, seed=11)
    for n in (6, 9, 12):
        k = n // 3
        res = best_construction(n, k, trials=30, seed=1)
        assert res.product >= INFO_SET_DENSITY * 2 ** (n - k) * math.comb(n, k)
        assert res.product == 2 ** (n - k) * res.report.count
        assert res.log3_ratio == pytest.approx(math.log(res.product) / (n * math.log(3)))
    with pytest.raises(ValueError):
        best_construction(4, 1, 0)


def test_upper_check_examples():
    chk = one_sided_upper_check(tolhuizen_pair(EXAMPLE))
    assert chk.ok and chk.size_a == 4 and chk.product == 4 and chk.bound == 27
    assert binomial_identity(2)
    assert sum(2 ** (2 - i) * math.comb(2, i) for i in range(3)) == 9
    with pytest.raises(ValueError, match="left-cancellative"):
        one_sided_upper_check(PairOfFamilies.from_sets(2, [[1], [1, 2]], [[2]]))


def test_upper_check_random_left_cancellative(rng):
    for _ in range(300):
        n = int(rng.integers(1, 7))
        p = random_greedy_pair(n, "left-cancellative", rng)
        assert one_sided_upper_check(p).ok


def test_matrix_io_roundtrip():
    mat = random_matrix(7, 3, 2)
    assert parse_matrix(format_matrix(mat)) == mat
    assert parse_matrix("3 2\n10\n0 1\n00\n") == EXAMPLE
    for bad in ("", "3\n", "2 2\n10\n", "1 2\n12\n"):
        with pytest.raises(ValueError):
            parse_matrix(bad)

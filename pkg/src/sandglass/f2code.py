"""GF(2) matrices, information sets and the linear-code construction of
large left-cancellative pairs.

Row ``i`` of an n x m matrix is an int whose bit ``j`` is entry (i, j).
Randomness comes from numpy's PCG64 seeded through ``SeedSequence``; trial
``t`` of a run with master seed ``s`` uses ``SeedSequence(s, spawn_key=(t,))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np

from .setfam import MAX_GROUND, PairOfFamilies, is_cancellative, popcount

EXHAUSTIVE_CAP = 24

__all__ = [
    "F2Matrix",
    "InfoSetReport",
    "Construction",
    "UpperCheck",
    "gf2_rank",
    "is_information_set",
    "enumerate_information_sets",
    "expected_info_fraction",
    "tolhuizen_pair",
    "random_matrix",
    "best_construction",
    "one_sided_upper_check",
    "binomial_identity",
    "parse_matrix",
    "format_matrix",
]


@dataclass(frozen=True)
class F2Matrix:
    n: int
    m: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.m <= self.n <= MAX_GROUND:
            raise ValueError(f"need m <= n <= {MAX_GROUND}, got n={self.n}, m={self.m}")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        if any(r < 0 or r >> self.m for r in self.rows):
            raise ValueError(f"row wider than {self.m} bits")

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "F2Matrix":
        n = len(rows)
        m = len(rows[0]) if n else 0
        packed = []
        for r in rows:
            if len(r) != m:
                raise ValueError("ragged matrix")
            packed.append(sum(1 << j for j, bit in enumerate(r) if bit & 1))
        return cls(n, m, tuple(packed))

    def to_lists(self) -> list[list[int]]:
        return [[r >> j & 1 for j in range(self.m)] for r in self.rows]

    @property
    def k(self) -> int:
        return self.n - self.m


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank over GF(2) of the vectors ``rows`` (ints as bit vectors)."""
    basis: list[int] = []  # kept with distinct leading bits
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    return len(basis)


def is_information_set(mat: F2Matrix, s: int) -> bool:
    """Rows indexed by mask ``s`` form an invertible square submatrix."""
    if popcount(s) != mat.m:
        raise ValueError(f"information sets have size {mat.m}, got {popcount(s)}")
    return gf2_rank([mat.rows[i] for i in range(mat.n) if s >> i & 1]) == mat.m


@dataclass(frozen=True)
class InfoSetReport:
    total: int
    count: int
    fraction: Fraction
    exhaustive: bool
    info_sets: Optional[tuple[int, ...]] = None  # masks, exhaustive mode only
    samples: Optional[int] = None


def _independent_subsets(rows: Sequence[int], size: int):
    """All index tuples of ``size`` linearly independent rows, in lexicographic order."""
    n = len(rows)
    out = []

    def reduce(v, basis):
        for b in basis:
            v = min(v, v ^ b)
        return v

    def go(start, chosen, basis):
        if len(chosen) == size:
            out.append(tuple(chosen))
            return
        for i in range(start, n - (size - len(chosen)) + 1):
            r = reduce(rows[i], basis)
            if r:
                go(i + 1, chosen + [i], sorted(basis + [r], reverse=True))

    go(0, [], [])
    return out


def enumerate_information_sets(
    mat: F2Matrix, mode: str = "auto", samples: int = 10000, seed: int = 0
) -> InfoSetReport:
    """Exact information sets (``exhaustive``) or a sampled fraction (``sample``).

    ``auto`` picks exhaustive for n <= 24.
    """
    total = math.comb(mat.n, mat.m)
    if mode == "auto":
        mode = "exhaustive" if mat.n <= EXHAUSTIVE_CAP else "sample"
    if mode == "exhaustive":
        if mat.n > EXHAUSTIVE_CAP:
            raise ValueError(f"exhaustive enumeration capped at n <= {EXHAUSTIVE_CAP}")
        sets = tuple(sum(1 << i for i in idx) for idx in _independent_subsets(mat.rows, mat.m))
        return InfoSetReport(total, len(sets), Fraction(len(sets), total), True, sets)
    if mode != "sample":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(samples):
        idx = rng.choice(mat.n, size=mat.m, replace=False)
        hits += gf2_rank([mat.rows[i] for i in idx]) == mat.m
    return InfoSetReport(total, hits, Fraction(hits, samples), False, None, samples)


def expected_info_fraction(m: int) -> float:
    """``prod_{i=1}^m (1 - 2^-i)``: chance a uniform m x m GF(2) matrix is invertible."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return math.prod(1.0 - 2.0 ** -i for i in range(1, m + 1))


def _image(mat: F2Matrix) -> list[int]:
    out = []
    for v in range(1 << mat.m):
        mask = 0
        for i, r in enumerate(mat.rows):
            if popcount(r & v) & 1:
                mask |= 1 << i
        out.append(mask)
    return out


def tolhuizen_pair(mat: F2Matrix, info_sets: Optional[Sequence[int]] = None) -> PairOfFamilies:
    """(column-space image of M, complements of its information sets)."""
    if info_sets is None:
        info_sets = enumerate_information_sets(mat, mode="exhaustive").info_sets
    if not info_sets:
        raise ValueError("matrix has no information set; the construction is empty")
    full = (1 << mat.n) - 1
    return PairOfFamilies.from_masks(mat.n, set(_image(mat)), (full & ~s for s in info_sets))


SeedLike = Union[int, np.random.SeedSequence]


def random_matrix(n: int, k: int, seed: SeedLike) -> F2Matrix:
    """Uniform n x (n-k) GF(2) matrix from a seeded PCG64 stream."""
    if not 0 <= k < n <= MAX_GROUND:
        raise ValueError(f"need 0 <= k < n <= {MAX_GROUND}, got n={n}, k={k}")
    m = n - k
    bits = np.random.default_rng(seed).integers(0, 2, size=(n, m), dtype=np.uint8)
    weights = [1 << j for j in range(m)]
    return F2Matrix(n, m, tuple(sum(w for w, b in zip(weights, row) if b) for row in bits.tolist()))


def trial_seed(seed: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(trial,))


@dataclass(frozen=True)
class Construction:
    n: int
    k: int
    trials: int
    seed: int
    matrix: F2Matrix
    report: InfoSetReport
    pair: PairOfFamilies
    fractions: tuple[Fraction, ...]  # per trial, in trial order

    @property
    def product(self) -> int:
        return self.pair.size_product

    @property
    def log3_ratio(self) -> float:
        return math.log(self.product) / (self.n * math.log(3))

    @property
    def mean_fraction(self) -> float:
        return float(sum(self.fractions) / len(self.fractions))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "trials": self.trials,
            "seed": self.seed,
            "best_info_sets": self.report.count,
            "fraction": float(self.report.fraction),
            "mean_fraction": self.mean_fraction,
            "expected_fraction": expected_info_fraction(self.n - self.k),
            "product": self.product,
            "log3_ratio": self.log3_ratio,
        }


def best_construction(n: int, k: int, trials: int, seed: int = 0) -> Construction:
    """Best of ``trials`` random matrices by number of information sets."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    best = None
    fractions = []
    for t in range(trials):
        mat = random_matrix(n, k, trial_seed(seed, t))
        rep = enumerate_information_sets(mat)
        fractions.append(rep.fraction)
        if best is None or rep.count > best[1].count:
            best = (mat, rep)
    mat, rep = best
    return Construction(
        n=n,
        k=k,
        trials=trials,
        seed=seed,
        matrix=mat,
        report=rep,
        pair=tolhuizen_pair(mat, rep.info_sets),
        fractions=tuple(fractions),
    )


def binomial_identity(n: int) -> bool:
    """``sum_i 2^(n-i) C(n,i) == 3^n`` in exact integers."""
    return sum(2 ** (n - i) * math.comb(n, i) for i in range(n + 1)) == 3**n


@dataclass(frozen=True)
class UpperCheck:
    ok: bool
    size_a: int
    size_b: int
    product: int
    bound: int  # 3^n
    worst_b: Optional[int]  # mask of the B giving the tightest |A| <= 2^(n-|B|)
    per_b_ok: bool
    identity_ok: bool


def one_sided_upper_check(pair: PairOfFamilies) -> UpperCheck:
    """Check ``|A| <= 2^(n-|B|)`` for every B and ``|A||B| <= 3^n``.

    Raises ValueError when the pair is not left-cancellative.
    """
    if not is_cancellative(pair, "left"):
        raise ValueError("one-sided upper check needs a left-cancellative pair")
    n, na = pair.n, len(pair.a)
    worst = max(pair.b, key=popcount, default=None)
    per_b = worst is None or na <= 2 ** (n - popcount(worst))
    ident = binomial_identity(n)
    prod = pair.size_product
    return UpperCheck(
        ok=per_b and ident and prod <= 3**n,
        size_a=na,
        size_b=len(pair.b),
        product=prod,
        bound=3**n,
        worst_b=worst,
        per_b_ok=per_b,
        identity_ok=ident,
    )


def parse_matrix(text: str) -> F2Matrix:
    """``n m`` header then n lines of m bits (spaces optional)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        n, m = map(int, lines[0].split())
    except ValueError:
        raise ValueError(f"bad header {lines[0]!r}, expected 'n m'") from None
    body = [ln.replace(" ", "") for ln in lines[1:]]
    if len(body) != n:
        raise ValueError(f"expected {n} rows, got {len(body)}")
    rows = []
    for i, ln in enumerate(body, 1):
        if len(ln) != m or set(ln) - {"0", "1"}:
            raise ValueError(f"row {i}: expected {m} bits, got {ln!r}")
        rows.append([int(c) for c in ln])
    if n == 0:
        return F2Matrix(0, m, ())
    return F2Matrix.from_lists(rows)


def format_matrix(mat: F2Matrix) -> str:
    lines = [f"{mat.n} {mat.m}"]
    lines += ["".join(map(str, row)) for row in mat.to_lists()]
    return "\n".join(lines) + "\n"

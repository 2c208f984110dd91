"""Entropy functions and the scalar bounds built from them.

Scalar functions take and return Python floats; the ``*_array`` variants are
their numpy counterparts used by the grid certifier.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constants import CLAIM_RATE, H_STAR_HIGH, H_STAR_LOW
from .setfam import PairOfFamilies, densities, uniformity

__all__ = [
    "BoundParams",
    "ConditionReport",
    "FilteredCheck",
    "binary_entropy",
    "binary_entropy_array",
    "f_value",
    "g_value",
    "g_array",
    "entropy_of",
    "max_prob_bound_holds",
    "first_prob_bound_holds",
    "filtered_condition_check",
    "rhs_bound",
    "theorem_rate",
    "recursion_conditions",
]


def _check_unit(name: str, v: float):
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"{name}={v} outside [0, 1]")


def _h(p: float) -> float:
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


H_AT_LOW = _h(H_STAR_LOW)


def binary_entropy(p: float, starred: bool = False) -> float:
    """h(p) in bits; ``starred`` freezes it at h(0.01) outside (0.01, 0.99)."""
    _check_unit("p", p)
    if starred and not H_STAR_LOW < p < H_STAR_HIGH:
        return H_AT_LOW
    return _h(p)


def binary_entropy_array(p, starred: bool = False) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if starred:
        inside = (p > H_STAR_LOW) & (p < H_STAR_HIGH)
        q = np.clip(p, H_STAR_LOW, H_STAR_HIGH)
    else:
        inside = (p > 0.0) & (p < 1.0)
        q = np.where(inside, p, 0.5)
    out = -q * np.log2(q) - (1.0 - q) * np.log2(1.0 - q)
    return np.where(inside, out, H_AT_LOW if starred else 0.0)


def f_value(x: float, y: float, t: float, starred: bool = False) -> float:
    """``x(1-y)h(x) + h(x(1-y)) - x log2 t``.

    The starred form is the entropy part only, ``x(1-y)h*(x) + h*(x(1-y))``;
    ``t`` is then ignored and the log term is charged in :func:`g_value`.
    """
    _check_unit("x", x)
    _check_unit("y", y)
    if t <= 0:
        raise ValueError(f"t={t} must be positive")
    u = x * (1.0 - y)
    ent = u * binary_entropy(x, starred) + binary_entropy(u, starred)
    if starred:
        return ent
    return ent - x * math.log2(t)


def g_value(x: float, y: float, t: float, starred: bool = False) -> float:
    """``f(x,y,t) + f(y,x,t)``, or ``f*(x,y) + f*(y,x) - (x+y) log2 t``."""
    if starred:
        return f_value(x, y, t, True) + f_value(y, x, t, True) - (x + y) * math.log2(t)
    return f_value(x, y, t) + f_value(y, x, t)


def g_array(x, y, t: float, starred: bool = False) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    hx = binary_entropy_array(x, starred)
    hy = binary_entropy_array(y, starred)
    u = x * (1.0 - y)
    v = y * (1.0 - x)
    return (
        u * hx
        + binary_entropy_array(u, starred)
        + v * hy
        + binary_entropy_array(v, starred)
        - (x + y) * math.log2(t)
    )


# ---------------------------------------------------------------------------
# Distributions


def _validate_probs(probs: Sequence[float]) -> np.ndarray:
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("distribution must be a non-empty vector")
    if np.any(p < 0):
        raise ValueError("probabilities must be non-negative")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    return p


def entropy_of(probs: Sequence[float]) -> float:
    """Shannon entropy in bits."""
    p = _validate_probs(probs)
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def max_prob_bound_holds(probs: Sequence[float], tol: float = 1e-12) -> bool:
    """The most likely outcome has probability at least ``2**-H``."""
    p = _validate_probs(probs)
    return float(p.max()) >= 2.0 ** -entropy_of(p) - tol


def first_prob_bound_holds(probs: Sequence[float], tol: float = 1e-12) -> bool:
    """Literal reading with outcomes in ascending order: ``min p >= 2**-H``.

    Fails for most non-uniform distributions; kept for comparison with
    :func:`max_prob_bound_holds`, which is the form used elsewhere.
    """
    p = _validate_probs(probs)
    return float(p.min()) >= 2.0 ** -entropy_of(p) - tol


# ---------------------------------------------------------------------------
# Pair bounds


@dataclass(frozen=True)
class FilteredCheck:
    """Outcome of the filtered-density hypothesis check.

    ``worst`` is ``(A, B, P, ratio)`` with masks for A, B, P; ``side`` says
    whether it came from the A-side quantity or its mirror.
    """

    holds: bool
    k: int
    theta: float
    threshold: float
    worst: tuple
    side: str
    ratio_left: float
    ratio_right: float


def _worst_filtered_ratio(xs: Sequence[int], ys: Sequence[int]):
    """max over A in xs, B in ys, P of |X_{A,A\\B,P}| |Y_{A,A\\B}| / (|X||Y|)."""
    best = (-1, None)
    for a in xs:
        na = ~a
        # Y_{A,S}: distinct B'\A among B' with A\B' = S
        y_groups = defaultdict(set)
        for b in ys:
            y_groups[a & ~b].add(b & na)
        for s, y_set in y_groups.items():
            x_groups = defaultdict(set)
            for a2 in xs:
                x_groups[a2 & s].add(a2 & na)
            p, x_set = max(x_groups.items(), key=lambda kv: (len(kv[1]), -kv[0]))
            count = len(x_set) * len(y_set)
            if count > best[0]:
                b_rep = min(b for b in ys if a & ~b == s)
                best = (count, (a, b_rep, p))
    return best


def filtered_condition_check(pair: PairOfFamilies, theta: float) -> FilteredCheck:
    """Check both filtered-density hypotheses at ``theta**-k``.

    The maximising P for fixed (A, B) is the most frequent trace ``A' ∩ S``,
    so only realised traces are inspected.
    """
    k = uniformity(pair)
    if k is None:
        raise ValueError("filtered condition check needs a k-uniform pair")
    total = len(pair.a) * len(pair.b)
    threshold = theta ** -k
    cl, wl = _worst_filtered_ratio(pair.a.members, pair.b.members)
    cr, wr = _worst_filtered_ratio(pair.b.members, pair.a.members)
    rl, rr = cl / total, cr / total
    if rl >= rr:
        worst, side = (*wl, rl), "left"
    else:
        # mirrored quantity: report (A, B, P) with P inside B\A
        b, a, p = wr
        worst, side = (a, b, p, rr), "right"
    return FilteredCheck(
        holds=max(rl, rr) <= threshold,
        k=k,
        theta=theta,
        threshold=threshold,
        worst=worst,
        side=side,
        ratio_left=rl,
        ratio_right=rr,
    )


def rhs_bound(pair: PairOfFamilies, theta: float, symmetric: bool = False) -> float:
    """Sum over elements of f(a_i, b_i, theta), or of g when ``symmetric``.

    Compare with log2|A| (one-sided) or log2|A||B| (symmetric).
    """
    if uniformity(pair) is None:
        raise ValueError("rhs_bound needs a k-uniform pair")
    d = densities(pair)
    fn = g_value if symmetric else f_value
    return math.fsum(fn(float(x), float(y), theta) for x, y in zip(d.a, d.b))


# ---------------------------------------------------------------------------
# Rate arithmetic


@dataclass(frozen=True)
class BoundParams:
    theta: float
    alpha: float
    mu_can: float
    mu_rec_floor: float = 2.0

    def __post_init__(self):
        if not self.theta > 1:
            raise ValueError(f"theta={self.theta} must exceed 1")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha={self.alpha} outside [0, 1]")
        if not self.mu_can >= 2:
            raise ValueError(f"mu_can={self.mu_can} below 2")


def theorem_rate(params: BoundParams) -> float:
    """``max(2.2499, theta**alpha * mu_can**(1 - alpha))``."""
    return max(CLAIM_RATE, params.theta ** params.alpha * params.mu_can ** (1 - params.alpha))


@dataclass(frozen=True)
class ConditionReport:
    params: BoundParams
    theta_below_mu_can: bool
    alpha_at_most_half: bool
    inverse_gap: float  # 1/(1-2 alpha), inf once alpha >= 1/2
    inverse_gap_ok: bool
    geometric_mean: float
    geometric_mean_ok: bool

    @property
    def mu(self) -> float:
        return theorem_rate(self.params)

    @property
    def all_hold(self) -> bool:
        return (
            self.theta_below_mu_can
            and self.alpha_at_most_half
            and self.inverse_gap_ok
            and self.geometric_mean_ok
        )

    def to_dict(self) -> dict:
        return {
            "theta": self.params.theta,
            "alpha": self.params.alpha,
            "mu_can": self.params.mu_can,
            "mu": self.mu,
            "theta_below_mu_can": self.theta_below_mu_can,
            "alpha_at_most_half": self.alpha_at_most_half,
            "inverse_gap": self.inverse_gap if math.isfinite(self.inverse_gap) else None,
            "inverse_gap_ok": self.inverse_gap_ok,
            "geometric_mean": self.geometric_mean,
            "geometric_mean_ok": self.geometric_mean_ok,
            "all_hold": self.all_hold,
        }


def recursion_conditions(params: BoundParams) -> ConditionReport:
    mu = theorem_rate(params)
    a = params.alpha
    inv = 1.0 / (1.0 - 2.0 * a) if a < 0.5 else math.inf
    gm = params.theta ** a * params.mu_can ** (1 - a)
    return ConditionReport(
        params=params,
        theta_below_mu_can=params.theta < params.mu_can,
        alpha_at_most_half=0 <= a <= 0.5,
        inverse_gap=inv,
        inverse_gap_ok=inv <= mu,
        geometric_mean=gm,
        geometric_mean_ok=gm <= mu,
    )


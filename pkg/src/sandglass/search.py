"""Maximum |A||B| over recovering / cancellative / left-cancellative pairs.

Two independent routes:

* :func:`exhaustive_max_product` walks every pair of families over [n] for
  n <= 3, with A reduced to one representative per orbit of the symmetric
  group, and judges candidates with the predicates of :mod:`sandglass.setfam`.
* :func:`bnb_max_product` is a depth-first branch and bound over inclusion
  decisions with incremental conflict tracking; it accepts a node budget and
  an optional uniformity restriction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional

import numpy as np

from .setfam import (
    PairOfFamilies,
    is_cancellative,
    is_recovering,
    popcount,
)

KINDS = ("recovering", "cancellative", "left-cancellative")
EXHAUSTIVE_MAX_N = 3
BNB_MAX_N = 5

__all__ = [
    "KINDS",
    "SearchResult",
    "satisfies",
    "exhaustive_max_product",
    "bnb_max_product",
    "verify_witness",
    "random_greedy_pair",
]


def satisfies(pair: PairOfFamilies, kind: str) -> bool:
    if kind == "recovering":
        return is_recovering(pair)
    if kind == "cancellative":
        return is_cancellative(pair, "both")
    if kind == "left-cancellative":
        return is_cancellative(pair, "left")
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")


@dataclass(frozen=True)
class SearchResult:
    n: int
    kind: str
    best_product: int
    witness: PairOfFamilies
    exhaustive: bool
    nodes_explored: int
    k_uniform: Optional[int] = None

    def to_dict(self) -> dict:
        from .setfam import pair_to_json

        return {
            "n": self.n,
            "kind": self.kind,
            "best_product": self.best_product,
            "witness": pair_to_json(self.witness),
            "exhaustive": self.exhaustive,
            "nodes_explored": self.nodes_explored,
            "k_uniform": self.k_uniform,
        }


def verify_witness(result: SearchResult) -> bool:
    """Re-check a result with the set-family predicates alone."""
    w = result.witness
    if w.n != result.n or w.size_product != result.best_product:
        return False
    if result.k_uniform is not None:
        if any(popcount(m) != result.k_uniform for m in (*w.a, *w.b)):
            return False
    return satisfies(w, result.kind)


# ---------------------------------------------------------------------------
# Exhaustive oracle


def _perm_masks(n: int):
    """For each permutation, the image of every mask 0..2^n-1."""
    tables = []
    for perm in permutations(range(n)):
        t = []
        for m in range(1 << n):
            out = 0
            for i in range(n):
                if m >> i & 1:
                    out |= 1 << perm[i]
            t.append(out)
        tables.append(t)
    return tables


def _family_from_code(code: int) -> tuple[int, ...]:
    # family encoded as a bitmask over the 2^n subsets
    out = []
    s = 0
    while code:
        if code & 1:
            out.append(s)
        code >>= 1
        s += 1
    return tuple(out)


def _canonical_codes(n: int) -> list[int]:
    """One family code per orbit: the code whose sorted member tuple is least."""
    tables = _perm_masks(n)
    reps = []
    for code in range(1 << (1 << n)):
        fam = _family_from_code(code)
        key = fam
        for t in tables:
            img = tuple(sorted(t[m] for m in fam))
            if img < key:
                break
        else:
            reps.append(code)
    return reps


def exhaustive_max_product(n: int, kind: str) -> SearchResult:
    """Exact maximum over all pairs; ties go to the least ``(A, B)`` member tuples."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if not 0 <= n <= EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive search supports n <= {EXHAUSTIVE_MAX_N}, got {n}")
    b_fams = [_family_from_code(c) for c in range(1 << (1 << n))]
    best = 0
    best_key = None
    nodes = 0
    for code in _canonical_codes(n):
        a = _family_from_code(code)
        for b in b_fams:
            prod = len(a) * len(b)
            if prod < best or prod == 0:
                continue
            nodes += 1
            key = (a, b)
            if prod == best and key > best_key:
                continue
            if satisfies(PairOfFamilies.from_masks(n, a, b), kind):
                best, best_key = prod, key
    if best_key is None:  # only possible for n=0 with empty families
        best_key = ((0,), (0,))
        best = 1
    return SearchResult(
        n=n,
        kind=kind,
        best_product=best,
        witness=PairOfFamilies.from_masks(n, *best_key),
        exhaustive=True,
        nodes_explored=nodes,
    )


# ---------------------------------------------------------------------------
# Branch and bound


class _Conflicts:
    """Incremental bookkeeping of difference values and their sources.

    A-side entries are keyed by ``A\\B`` (recovering) or ``(B, A\\B)``
    (cancellative kinds); each key must have a single source A. B-side entries
    mirror this, and are skipped for left-cancellative pairs.
    """

    def __init__(self, kind: str):
        self.kind = kind
        self.src: dict = {}
        self.cnt: dict = {}

    def _keys_for_a(self, a, bs):
        rec = self.kind == "recovering"
        for b in bs:
            d = a & ~b
            yield ("A", d) if rec else ("A", b, d), a
            if self.kind != "left-cancellative":
                e = b & ~a
                yield ("B", e) if rec else ("B", a, e), b

    def _keys_for_b(self, b, as_):
        rec = self.kind == "recovering"
        for a in as_:
            d = a & ~b
            yield ("A", d) if rec else ("A", b, d), a
            if self.kind != "left-cancellative":
                e = b & ~a
                yield ("B", e) if rec else ("B", a, e), b

    def push(self, entries) -> Optional[list]:
        """Insert entries; on conflict roll back and return None."""
        done = []
        for key, source in entries:
            s = self.src.get(key)
            if s is None:
                self.src[key] = source
                self.cnt[key] = 1
            elif s == source:
                self.cnt[key] += 1
            else:
                self.pop(done)
                return None
            done.append(key)
        return done

    def pop(self, keys):
        for key in keys:
            c = self.cnt[key] - 1
            if c:
                self.cnt[key] = c
            else:
                del self.cnt[key]
                del self.src[key]


def bnb_max_product(
    n: int,
    kind: str,
    budget: int = 10**6,
    k_uniform: Optional[int] = None,
) -> SearchResult:
    """Depth-first branch and bound; ``exhaustive`` is True only if it finished.

    Decisions alternate between "is this set in A" and "is this set in B",
    smallest sets first. A node is pruned when an upper bound on the final
    product cannot beat the incumbent; the bound combines the remaining
    candidate counts with ``|A| <= 2^(n-|B|)`` for every chosen B (and the
    mirror for cancellative kinds), and ``|A||B| <= sum_B 2^(n-|B|)``.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if not 0 <= n <= BNB_MAX_N:
        raise ValueError(f"branch and bound supports n <= {BNB_MAX_N}, got {n}")
    cands = sorted(range(1 << n), key=lambda m: (popcount(m), m))
    if k_uniform is not None:
        cands = [m for m in cands if popcount(m) == k_uniform]
    decisions = [(side, m) for m in cands for side in ("A", "B")]
    total = len(decisions)
    # suffix counts of remaining candidates and of sum 2^(n-|B|) over B candidates
    rem_a = [0] * (total + 1)
    rem_b = [0] * (total + 1)
    rem_bw = [0] * (total + 1)
    for idx in range(total - 1, -1, -1):
        side, m = decisions[idx]
        rem_a[idx] = rem_a[idx + 1] + (side == "A")
        rem_b[idx] = rem_b[idx + 1] + (side == "B")
        rem_bw[idx] = rem_bw[idx + 1] + (2 ** (n - popcount(m)) if side == "B" else 0)
    full_cap = 2**n
    two_sided = kind != "left-cancellative"

    conf = _Conflicts(kind)
    A: list[int] = []
    B: list[int] = []
    state = {"best": 0, "witness": None, "nodes": 0, "cut": False}

    def go(idx, cap_a, cap_b, bw):
        if state["nodes"] >= budget:
            state["cut"] = True
            return
        state["nodes"] += 1
        prod = len(A) * len(B)
        if prod > state["best"]:
            state["best"] = prod
            state["witness"] = (tuple(A), tuple(B))
        if idx == total:
            return
        ua = min(len(A) + rem_a[idx], cap_a)
        ub = min(len(B) + rem_b[idx], cap_b)
        if min(ua * ub, bw + rem_bw[idx] if ua else 0) <= state["best"]:
            return
        side, m = decisions[idx]
        # include branch first
        if side == "A":
            if len(A) < cap_a:
                keys = conf.push(conf._keys_for_a(m, B))
                if keys is not None:
                    A.append(m)
                    nb = min(cap_b, 2 ** (n - popcount(m))) if two_sided else cap_b
                    go(idx + 1, cap_a, nb, bw)
                    A.pop()
                    conf.pop(keys)
        else:
            if len(B) < cap_b:
                keys = conf.push(conf._keys_for_b(m, A))
                if keys is not None:
                    B.append(m)
                    go(idx + 1, min(cap_a, 2 ** (n - popcount(m))), cap_b, bw + 2 ** (n - popcount(m)))
                    B.pop()
                    conf.pop(keys)
        go(idx + 1, cap_a, cap_b, bw)

    go(0, full_cap, full_cap, 0)
    if state["witness"] is None:
        state["witness"] = ((), ())
    a, b = state["witness"]
    return SearchResult(
        n=n,
        kind=kind,
        best_product=state["best"],
        witness=PairOfFamilies.from_masks(n, a, b),
        exhaustive=not state["cut"],
        nodes_explored=state["nodes"],
        k_uniform=k_uniform,
    )


# ---------------------------------------------------------------------------
# Random instances


def random_greedy_pair(
    n: int,
    kind: str,
    rng: np.random.Generator,
    k_uniform: Optional[int] = None,
    tries: Optional[int] = None,
) -> PairOfFamilies:
    """Random maximal-ish pair of the given kind built by greedy insertion.

    Candidate (side, set) decisions are visited in random order and accepted
    whenever the pair stays of the requested kind. ``tries`` limits how many
    decisions are visited, giving smaller, less saturated pairs.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    cands = [m for m in range(1 << n) if k_uniform is None or popcount(m) == k_uniform]
    decisions = [(s, m) for m in cands for s in ("A", "B")]
    order = rng.permutation(len(decisions))
    if tries is not None:
        order = order[:tries]
    conf = _Conflicts(kind)
    A: list[int] = []
    B: list[int] = []
    for idx in order:
        side, m = decisions[idx]
        if side == "A":
            if conf.push(conf._keys_for_a(m, B)) is not None:
                A.append(m)
        else:
            if conf.push(conf._keys_for_b(m, A)) is not None:
                B.append(m)
    return PairOfFamilies.from_masks(n, A, B)

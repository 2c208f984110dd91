"""Set families over a ground set [n] stored as integer bitmasks.

Bit ``i`` of a mask stands for ground element ``i + 1``; the 1-based labels
only appear in :func:`parse_pair` / :func:`format_pair` and the helpers
:func:`from_elements` / :func:`to_elements`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterable, Optional, Sequence

MAX_GROUND = 64

__all__ = [
    "MAX_GROUND",
    "SetFamily",
    "PairOfFamilies",
    "DensityProfile",
    "PairFormatError",
    "from_elements",
    "to_elements",
    "popcount",
    "subsets_of",
    "parse_pair",
    "format_pair",
    "pair_to_json",
    "make_sandglass_pair",
    "make_triangle_power",
    "is_recovering",
    "is_cancellative",
    "uniformity",
    "product",
    "restrict",
    "restrict_pair",
    "filtered_pair",
    "densities",
    "permute_pair",
]


class PairFormatError(ValueError):
    """Raised for malformed pair files."""


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def from_elements(elements: Iterable[int]) -> int:
    """Mask of a set given by 1-based element labels."""
    mask = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"element labels are 1-based, got {e}")
        mask |= 1 << (e - 1)
    return mask


def to_elements(mask: int) -> list[int]:
    """1-based labels of the elements of ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i + 1)
        mask >>= 1
        i += 1
    return out


def subsets_of(mask: int):
    """Yield every submask of ``mask`` (including 0 and ``mask``)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _full(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class SetFamily:
    """Duplicate-free family of subsets of [n], kept in ascending mask order."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_GROUND:
            raise ValueError(f"ground size must be in [0, {MAX_GROUND}], got {self.n}")
        members = tuple(sorted(self.members))
        full = _full(self.n)
        for prev, cur in zip(members, members[1:]):
            if prev == cur:
                raise ValueError(f"duplicate set {set(to_elements(cur))} in family")
        for m in members:
            if m < 0 or m & ~full:
                raise ValueError(f"set {set(to_elements(m))} is not within [{self.n}]")
        object.__setattr__(self, "members", members)

    @classmethod
    def dedup(cls, n: int, members: Iterable[int]) -> "SetFamily":
        return cls(n, tuple(set(members)))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, mask):
        return mask in set(self.members)


@dataclass(frozen=True)
class PairOfFamilies:
    """Two families over a common ground set [n]."""

    a: SetFamily
    b: SetFamily

    def __post_init__(self):
        if self.a.n != self.b.n:
            raise ValueError(f"families live on different ground sets ({self.a.n} vs {self.b.n})")

    @classmethod
    def from_masks(cls, n: int, a: Iterable[int], b: Iterable[int]) -> "PairOfFamilies":
        return cls(SetFamily(n, tuple(a)), SetFamily(n, tuple(b)))

    @classmethod
    def from_sets(cls, n: int, a: Iterable[Iterable[int]], b: Iterable[Iterable[int]]) -> "PairOfFamilies":
        """Build from 1-based element lists, e.g. ``from_sets(2, [[], [1]], [[], [2]])``."""
        return cls.from_masks(n, [from_elements(s) for s in a], [from_elements(s) for s in b])

    @property
    def n(self) -> int:
        return self.a.n

    @property
    def size_product(self) -> int:
        return len(self.a) * len(self.b)

    def swapped(self) -> "PairOfFamilies":
        return PairOfFamilies(self.b, self.a)


@dataclass(frozen=True)
class DensityProfile:
    """Exact restriction densities ``a_i = |A_i|/|A|`` and ``b_i = |B_i|/|B|``."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    @property
    def a_complement(self) -> tuple[Fraction, ...]:
        return tuple(1 - x for x in self.a)

    @property
    def b_complement(self) -> tuple[Fraction, ...]:
        return tuple(1 - x for x in self.b)


# ---------------------------------------------------------------------------
# I/O

_SET_RE = re.compile(r"\{([^{}]*)\}")
_HEADER_RE = re.compile(r"^\s*n\s*=\s*(\d+)\s*$")
_SECTION_RE = re.compile(r"^\s*([AB])\s*:(.*)$")


def _parse_set(body: str, n: int, where: str) -> int:
    body = body.strip()
    if not body:
        return 0
    mask = 0
    for tok in body.split(","):
        tok = tok.strip()
        if not tok.isdigit():
            raise PairFormatError(f"{where}: bad element {tok!r}")
        e = int(tok)
        if not 1 <= e <= n:
            raise PairFormatError(f"{where}: element {e} out of range 1..{n}")
        bit = 1 << (e - 1)
        if mask & bit:
            raise PairFormatError(f"{where}: element {e} repeated within a set")
        mask |= bit
    return mask


def _parse_sets(text: str, n: int, where: str) -> list[int]:
    masks = [_parse_set(m.group(1), n, where) for m in _SET_RE.finditer(text)]
    rest = _SET_RE.sub("", text).replace(",", "").strip()
    if rest:
        raise PairFormatError(f"{where}: unexpected text {rest!r}")
    return masks


def _family(n: int, masks: list[int], label: str) -> SetFamily:
    if len(set(masks)) != len(masks):
        dup = next(m for m in masks if masks.count(m) > 1)
        raise PairFormatError(f"family {label}: duplicate set {{{','.join(map(str, to_elements(dup)))}}}")
    return SetFamily(n, tuple(masks))


def _parse_json(text: str) -> PairOfFamilies:
    try:
        obj = json.loads(text)
        n = int(obj["n"])
        raw = {"A": obj["a"], "B": obj["b"]}
    except (ValueError, KeyError, TypeError) as exc:
        raise PairFormatError(f"bad JSON pair: {exc}") from exc
    if not 0 <= n <= MAX_GROUND:
        raise PairFormatError(f"n={n} outside 0..{MAX_GROUND}")
    fams = {}
    for label, sets in raw.items():
        masks = []
        for s in sets:
            if any(not isinstance(e, int) or not 1 <= e <= n for e in s) or len(set(s)) != len(s):
                raise PairFormatError(f"family {label}: bad set {s!r}")
            masks.append(from_elements(s))
        fams[label] = _family(n, masks, label)
    return PairOfFamilies(fams["A"], fams["B"])


def parse_pair(text: str) -> PairOfFamilies:
    """Parse the text pair format (or its JSON variant).

    Text format::

        n=3
        A:
        {}
        {1,2}
        B:
        {3}

    Sets may also follow ``A:``/``B:`` on the same line, comma separated.
    Lines starting with ``#`` are ignored.
    """
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    n = None
    section = None
    chunks: dict[str, list[tuple[int, str]]] = {"A": [], "B": []}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _HEADER_RE.match(line)
            if not m:
                raise PairFormatError(f"line {lineno}: expected 'n=<int>', got {line!r}")
            n = int(m.group(1))
            if n > MAX_GROUND:
                raise PairFormatError(f"line {lineno}: n={n} exceeds {MAX_GROUND}")
            continue
        m = _SECTION_RE.match(line)
        if m:
            section = m.group(1)
            if section in seen:
                raise PairFormatError(f"line {lineno}: section {section} repeated")
            seen.add(section)
            chunks[section].append((lineno, m.group(2)))
            continue
        if section is None:
            raise PairFormatError(f"line {lineno}: set before any 'A:'/'B:' section")
        chunks[section].append((lineno, line))
    if n is None:
        raise PairFormatError("missing 'n=<int>' header")
    if seen != {"A", "B"}:
        raise PairFormatError(f"missing section(s): {sorted({'A', 'B'} - seen)}")
    fams = {}
    for label in "AB":
        masks = []
        for lineno, chunk in chunks[label]:
            masks.extend(_parse_sets(chunk, n, f"line {lineno}"))
        fams[label] = _family(n, masks, label)
    return PairOfFamilies(fams["A"], fams["B"])


def _fmt_set(mask: int) -> str:
    return "{" + ",".join(map(str, to_elements(mask))) + "}"


def format_pair(pair: PairOfFamilies) -> str:
    """Canonical text form; ``parse_pair(format_pair(p)) == p``."""
    lines = [f"n={pair.n}", "A:"]
    lines += [_fmt_set(m) for m in pair.a]
    lines.append("B:")
    lines += [_fmt_set(m) for m in pair.b]
    return "\n".join(lines) + "\n"


def pair_to_json(pair: PairOfFamilies) -> dict:
    return {
        "n": pair.n,
        "a": [to_elements(m) for m in pair.a],
        "b": [to_elements(m) for m in pair.b],
    }


# ---------------------------------------------------------------------------
# Generators


def make_sandglass_pair(n: int, s: int) -> PairOfFamilies:
    """All subsets of ``s`` against all subsets of its complement."""
    full = _full(n)
    if s & ~full:
        raise ValueError(f"{set(to_elements(s))} is not within [{n}]")
    return PairOfFamilies.from_masks(n, subsets_of(s), subsets_of(full & ~s))


_TRIANGLE = PairOfFamilies.from_masks(3, (1, 2, 4), (1, 2, 4))


def make_triangle_power(p: int) -> PairOfFamilies:
    """p-fold product of ``({{1},{2},{3}}, {{1},{2},{3}})`` over [3p]."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if 3 * p > MAX_GROUND:
        raise ValueError(f"ground set [3*{p}] exceeds {MAX_GROUND} elements")
    out = _TRIANGLE
    for _ in range(p - 1):
        out = product(out, _TRIANGLE)
    return out


# ---------------------------------------------------------------------------
# Predicates


def _unique_source(pairs) -> bool:
    # pairs yields (value, source); every value must come from one source
    src = {}
    for value, source in pairs:
        if src.setdefault(value, source) != source:
            return False
    return True


def is_recovering(pair: PairOfFamilies) -> bool:
    """A\\B determines A and B\\A determines B over all cross pairs."""
    A, B = pair.a.members, pair.b.members
    return _unique_source((a & ~b, a) for a in A for b in B) and _unique_source(
        (b & ~a, b) for a in A for b in B
    )


def _left_cancels(A: Sequence[int], B: Sequence[int]) -> bool:
    na = len(A)
    for b in B:
        nb = ~b
        if len({a & nb for a in A}) != na:
            return False
    return True


def is_cancellative(pair: PairOfFamilies, side: str = "both") -> bool:
    """Cancellation on the ``left`` (A side), ``right`` (B side) or ``both``."""
    if side not in ("left", "right", "both"):
        raise ValueError(f"side must be left, right or both, got {side!r}")
    A, B = pair.a.members, pair.b.members
    if side in ("left", "both") and not _left_cancels(A, B):
        return False
    if side in ("right", "both") and not _left_cancels(B, A):
        return False
    return True


def uniformity(pair: PairOfFamilies) -> Optional[int]:
    """Common cardinality k of every member of both families, or None."""
    if not len(pair.a) or not len(pair.b):
        raise ValueError("uniformity is undefined for an empty family")
    sizes = {popcount(m) for m in pair.a} | {popcount(m) for m in pair.b}
    return sizes.pop() if len(sizes) == 1 else None


# ---------------------------------------------------------------------------
# Transformations


def product(p1: PairOfFamilies, p2: PairOfFamilies) -> PairOfFamilies:
    """Product pair over the disjoint union [n1] + [n2] (p2 shifted up by n1)."""
    n1, n = p1.n, p1.n + p2.n
    if n > MAX_GROUND:
        raise ValueError(f"combined ground size {n} exceeds {MAX_GROUND}")
    a = [x | (y << n1) for x, y in _cartesian(p1.a, p2.a)]
    b = [x | (y << n1) for x, y in _cartesian(p1.b, p2.b)]
    return PairOfFamilies.from_masks(n, a, b)


def _drop_bit(mask: int, i: int) -> int:
    low = mask & ((1 << i) - 1)
    return low | ((mask >> (i + 1)) << i)


def restrict(f: SetFamily, i: int, drop_element: bool = False) -> tuple[SetFamily, SetFamily]:
    """Split ``f`` into members containing element ``i`` (0-based) and the rest.

    With ``drop_element`` the element is deleted from the ground set, so both
    halves live on [n-1] with higher elements relabelled down by one.
    """
    if not 0 <= i < f.n:
        raise ValueError(f"element index {i} out of range for n={f.n}")
    bit = 1 << i
    with_i = [m for m in f if m & bit]
    without = [m for m in f if not m & bit]
    if not drop_element:
        return SetFamily(f.n, tuple(with_i)), SetFamily(f.n, tuple(without))
    return (
        SetFamily(f.n - 1, tuple(_drop_bit(m, i) for m in with_i)),
        SetFamily(f.n - 1, tuple(_drop_bit(m, i) for m in without)),
    )


def restrict_pair(pair: PairOfFamilies, i: int, drop_element: bool = False):
    """Return the two restricted pairs ``((A_i, B_i), (A'_i, B'_i))``."""
    a_in, a_out = restrict(pair.a, i, drop_element)
    b_in, b_out = restrict(pair.b, i, drop_element)
    return PairOfFamilies(a_in, b_in), PairOfFamilies(a_out, b_out)


def _compact(mask: int, keep: list[int]) -> int:
    out = 0
    for j, i in enumerate(keep):
        if mask >> i & 1:
            out |= 1 << j
    return out


def filtered_pair(
    pair: PairOfFamilies, c: int, s: int, p: int, compact: bool = False
) -> PairOfFamilies:
    """``({A\\C : A∩S = P}, {B\\C : C\\B = S})`` for ``P ⊆ S ⊆ C ⊊ [n]``.

    Members keep their original labels (they simply avoid C) unless
    ``compact`` is set, in which case the ground set becomes [n] minus C,
    relabelled in increasing order.
    """
    full = _full(pair.n)
    if p & ~s or s & ~c or c & ~full:
        raise ValueError("filtered pair needs P ⊆ S ⊆ C ⊆ [n]")
    if c == full:
        raise ValueError("filtered pair needs C to be a proper subset of the ground set")
    nc = ~c
    a = {m & nc for m in pair.a if m & s == p}
    b = {m & nc for m in pair.b if c & ~m == s}
    if not compact:
        return PairOfFamilies.from_masks(pair.n, a, b)
    keep = [i for i in range(pair.n) if not c >> i & 1]
    return PairOfFamilies.from_masks(
        len(keep), (_compact(m, keep) for m in a), (_compact(m, keep) for m in b)
    )


def _element_counts(f: SetFamily) -> list[int]:
    counts = [0] * f.n
    for m in f:
        i = 0
        while m:
            if m & 1:
                counts[i] += 1
            m >>= 1
            i += 1
    return counts


def densities(pair: PairOfFamilies) -> DensityProfile:
    if not len(pair.a) or not len(pair.b):
        raise ValueError("densities are undefined for an empty family")
    na, nb = len(pair.a), len(pair.b)
    return DensityProfile(
        a=tuple(Fraction(c, na) for c in _element_counts(pair.a)),
        b=tuple(Fraction(c, nb) for c in _element_counts(pair.b)),
    )


def permute_pair(pair: PairOfFamilies, perm: Sequence[int]) -> PairOfFamilies:
    """Relabel element ``i`` as ``perm[i]`` (0-based) in every member."""
    if sorted(perm) != list(range(pair.n)):
        raise ValueError("perm must be a permutation of range(n)")

    def move(m):
        out = 0
        for i, j in enumerate(perm):
            if m >> i & 1:
                out |= 1 << j
        return out

    return PairOfFamilies.from_masks(pair.n, map(move, pair.a), map(move, pair.b))


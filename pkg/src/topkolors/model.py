"""Core model: colored arrays, ranked color lists, and brute-force oracles.

An array of N elements carries one color per position (ids 0 .. sigma-1) and
every color has a distinct effective priority.  A top-K query over a range
[a, b] (1-based, inclusive) returns the K highest-priority distinct colors in
that range, highest first.  The oracles here answer by direct scan; every
index structure in the package is tested against them.

Ties in the user-supplied priorities are broken by color id: the effective
order compares (priority, color id) lexicographically, so each color gets a
distinct rank in [1, sigma].  Query results report the original priority
value alongside the color.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    ColorNotInSet,
    ColorOutOfRange,
    EmptyArray,
    InvalidRange,
    MissingPriority,
)


@dataclass(frozen=True)
class QuerySpec:
    """A validated top-K range query: positions a..b inclusive, 1-based."""

    a: int
    b: int
    k: int

    def validate(self, n: int) -> None:
        check_range(n, self.a, self.b, self.k)


def check_range(n: int, a: int, b: int, k: int = 1) -> None:
    """Raise InvalidRange unless 1 <= a <= b <= n and k >= 1."""
    if not (1 <= a <= b <= n):
        raise InvalidRange(f"range ({a}, {b}) not within [1, {n}]")
    if k < 1:
        raise InvalidRange(f"K must be >= 1, got {k}")


class ColorList:
    """A priority-descending list of (color id, priority) pairs.

    Entries are unique per color and strictly decreasing under the effective
    (priority, color id) order.  Compares equal to any sequence of pairs.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[tuple[int, int]]):
        self.entries = tuple((int(c), int(p)) for c, p in entries)

    def colors(self) -> list[int]:
        return [c for c, _ in self.entries]

    def priorities(self) -> list[int]:
        return [p for _, p in self.entries]

    def check(self) -> None:
        """Assert the descending-order and distinct-color invariants."""
        seen = set()
        prev = None
        for color, prio in self.entries:
            if color in seen:
                raise AssertionError(f"duplicate color {color}")
            seen.add(color)
            key = (prio, color)
            if prev is not None and key >= prev:
                raise AssertionError(f"entries not strictly descending at {key}")
            prev = key

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, ColorList):
            return self.entries == other.entries
        return self.entries == tuple(tuple(e) for e in other)

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"ColorList({list(self.entries)!r})"


class ColorArray:
    """An immutable colored array with normalized color ranks.

    Attributes:
        colors: int32 array of length N, values in [0, sigma).
        sigma: number of distinct colors (color ids are exactly 0..sigma-1).
        priority_of: int64 array, original priority per color id.
        rank_of: int32 array, 0-based effective rank per color id
            (higher rank means higher priority; ranks are a permutation of
            0..sigma-1 obtained by sorting colors by (priority, color id)).
        color_of_rank: inverse permutation of rank_of.
    """

    __slots__ = ("colors", "sigma", "priority_of", "rank_of", "color_of_rank")

    def __init__(self, colors: np.ndarray, priority_of: np.ndarray):
        self.colors = colors
        self.sigma = len(priority_of)
        self.priority_of = priority_of
        order = np.lexsort((np.arange(self.sigma), priority_of))
        rank_of = np.empty(self.sigma, dtype=np.int32)
        rank_of[order] = np.arange(self.sigma, dtype=np.int32)
        self.rank_of = rank_of
        self.color_of_rank = order.astype(np.int32)

    @property
    def n(self) -> int:
        return len(self.colors)

    def ranks(self) -> np.ndarray:
        """Per-position effective ranks (int32)."""
        return self.rank_of[self.colors]

    def list_from_ranks(self, ranks: Iterable[int]) -> ColorList:
        """Build a ColorList from 0-based effective ranks, highest first."""
        out = []
        for r in ranks:
            c = int(self.color_of_rank[int(r)])
            out.append((c, int(self.priority_of[c])))
        return ColorList(out)

    def __repr__(self) -> str:
        return f"ColorArray(n={self.n}, sigma={self.sigma})"


def new_color_array(
    colors: Sequence[int], priorities: Mapping[int, int]
) -> ColorArray:
    """Validate raw colors and priorities and build a ColorArray.

    The distinct colors appearing in `colors` must be exactly 0..sigma-1 and
    each must have a priority entry.  Raises EmptyArray, MissingPriority, or
    ColorOutOfRange.
    """
    arr = np.asarray(colors, dtype=np.int64)
    if arr.size == 0:
        raise EmptyArray("color array must be non-empty")
    distinct = np.unique(arr)
    if distinct[0] < 0:
        raise ColorOutOfRange(f"negative color id {int(distinct[0])}")
    sigma = len(distinct)
    if int(distinct[-1]) != sigma - 1:
        raise ColorOutOfRange(
            f"distinct colors must be exactly 0..{sigma - 1}, "
            f"found id {int(distinct[-1])}"
        )
    prio = np.empty(sigma, dtype=np.int64)
    for c in range(sigma):
        if c not in priorities:
            raise MissingPriority(f"color {c} has no priority")
        prio[c] = int(priorities[c])
    return ColorArray(arr.astype(np.int32), prio)


def oracle_topk(arr: ColorArray, a: int, b: int, k: int) -> ColorList:
    """Top-K distinct colors in arr[a..b] by direct scan, highest first."""
    check_range(arr.n, a, b, k)
    present = np.unique(arr.colors[a - 1 : b])
    order = sorted(
        (int(c) for c in present),
        key=lambda c: (int(arr.priority_of[c]), c),
        reverse=True,
    )
    return ColorList((c, int(arr.priority_of[c])) for c in order[:k])


def oracle_distinct_count(arr: ColorArray, a: int, b: int) -> int:
    """Number of distinct colors in arr[a..b] by direct scan."""
    check_range(arr.n, a, b)
    return int(len(np.unique(arr.colors[a - 1 : b])))


def prank(c: int, priorities: Mapping[int, int]) -> int:
    """1-based rank of color c inside the given set: the number of colors
    whose effective priority is <= that of c (ties broken by color id)."""
    if c not in priorities:
        raise ColorNotInSet(f"color {c} not in set")
    key = (int(priorities[c]), int(c))
    return sum(1 for c2, p2 in priorities.items() if (int(p2), int(c2)) <= key)

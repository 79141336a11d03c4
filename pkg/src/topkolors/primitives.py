"""Distinct-value reporting and counting over ranges of an array.

Both structures rest on the predecessor array: pred[i] is the index of the
previous occurrence of values[i] (or -1).  A value occurs in [l, r) iff some
position i in the range has pred[i] < l, and that witness position is unique
per value, so reporting distinct values reduces to finding all positions with
pred below a threshold (a segment-tree walk, output-sensitive) and counting
them reduces to dominance counting (a wavelet tree over pred, logarithmic).

Ranges here are 0-based half-open at the lowest level; the public report /
count methods take the 1-based inclusive convention used everywhere else.

When an array is the concatenation of independent segments (the per-level
node arrays of the tree indexes), build pred with `groups` set to the segment
id per position.  Predecessors then never cross a segment boundary, and a
query for segment range [l, r) with threshold l is correct with global
indices, so one structure serves every segment of a level.
"""

from __future__ import annotations

import numpy as np

from .bits import RankSelectBits
from .errors import BadParameter
from .model import check_range
from .util import ceil_log2

_INF = np.int64(2**62)


def make_pred(values, groups=None) -> np.ndarray:
    """Index of the previous occurrence of the same value, or -1.

    With `groups`, occurrences only match within the same group.
    """
    values = np.asarray(values, dtype=np.int64)
    n = len(values)
    pred = np.full(n, -1, dtype=np.int32)
    if n == 0:
        return pred
    if groups is None:
        key = values
    else:
        groups = np.asarray(groups, dtype=np.int64)
        key = groups * (int(values.max()) + 1) + values
    order = np.argsort(key, kind="stable")
    sk = key[order]
    same = sk[1:] == sk[:-1]
    pred[order[1:][same]] = order[:-1][same]
    return pred


class ArgminSegtree:
    """Position of the minimum over any half-open range, leftmost on ties.

    Only argument indices are stored; values are looked up in the referenced
    array, halving the footprint.
    """

    __slots__ = ("n", "size", "vals", "arg")

    def __init__(self, vals):
        self.vals = np.asarray(vals)
        self.n = len(self.vals)
        size = 1 << ceil_log2(max(self.n, 1))
        self.size = size
        arg = np.full(2 * size, -1, dtype=np.int32)
        arg[size : size + self.n] = np.arange(self.n, dtype=np.int32)
        lvl = size
        while lvl > 1:
            left = arg[lvl : 2 * lvl : 2]
            right = arg[lvl + 1 : 2 * lvl : 2]
            lv = np.where(left >= 0, self.vals[np.maximum(left, 0)], _INF)
            rv = np.where(right >= 0, self.vals[np.maximum(right, 0)], _INF)
            arg[lvl // 2 : lvl] = np.where(rv < lv, right, left)
            lvl //= 2
        self.arg = arg

    def argmin(self, l: int, r: int) -> int:
        """Index of the minimum of vals[l:r]; -1 on an empty range."""
        best = -1
        bv = _INF
        l += self.size
        r += self.size
        while l < r:
            if l & 1:
                a = int(self.arg[l])
                if a >= 0:
                    v = self.vals[a]
                    if v < bv or (v == bv and a < best):
                        bv, best = v, a
                l += 1
            if r & 1:
                r -= 1
                a = int(self.arg[r])
                if a >= 0:
                    v = self.vals[a]
                    if v < bv or (v == bv and a < best):
                        bv, best = v, a
            l >>= 1
            r >>= 1
        return best

    def walk_below(self, l: int, r: int, thresh: int, cap=None):
        """Ascending positions i in [l, r) with vals[i] < thresh.

        Stops early once cap + 1 positions are found, letting the caller
        detect that more remain.  Returns (positions, nodes_visited).
        """
        out: list[int] = []
        if l >= r or self.n == 0:
            return out, 0
        visited = 0
        stack = [(1, 0, self.size)]
        vals = self.vals
        arg = self.arg
        while stack:
            node, nl, nr = stack.pop()
            a = int(arg[node])
            if nl >= r or nr <= l or a < 0 or vals[a] >= thresh:
                continue
            visited += 1
            if nr - nl == 1:
                out.append(nl)
                if cap is not None and len(out) > cap:
                    break
                continue
            mid = (nl + nr) >> 1
            stack.append((node * 2 + 1, mid, nr))
            stack.append((node * 2, nl, mid))
        return out, visited

    def measured_bits(self) -> int:
        return self.arg.nbytes * 8


class CountLessWavelet:
    """Counts values strictly below a threshold in any half-open range.

    A wavelet tree over the (non-negative) values: one rank bitvector per bit
    of the domain, descending most-significant first.
    """

    __slots__ = ("n", "height", "_cap", "levels")

    def __init__(self, values, domain=None):
        values = np.asarray(values, dtype=np.int64)
        self.n = len(values)
        if self.n and int(values.min()) < 0:
            raise BadParameter("counting wavelet requires non-negative values")
        dom = int(domain) if domain is not None else (
            int(values.max()) + 1 if self.n else 1
        )
        self.height = ceil_log2(max(dom, 1))
        self._cap = 1 << self.height
        self.levels = []
        cur = values
        for d in range(self.height - 1, -1, -1):
            b = ((cur >> d) & 1).astype(np.uint8)
            self.levels.append(RankSelectBits(b))
            cur = np.concatenate([cur[b == 0], cur[b == 1]])

    def count_less(self, l: int, r: int, x: int) -> int:
        if x <= 0 or l >= r:
            return 0
        if x >= self._cap:
            return r - l
        res = 0
        for d in range(self.height - 1, -1, -1):
            bv = self.levels[self.height - 1 - d]
            ones_l = bv.rank1(l)
            ones_r = bv.rank1(r)
            if (x >> d) & 1:
                res += (r - l) - (ones_r - ones_l)
                zeros = bv.n - bv.ones
                l = zeros + ones_l
                r = zeros + ones_r
            else:
                l -= ones_l
                r -= ones_r
            if l >= r:
                break
        return res

    def measured_bits(self) -> int:
        return sum(bv.measured_bits() for bv in self.levels)


class ColorReporter:
    """Reports each distinct value of a range exactly once, output-sensitive.

    `positions(l, r)` returns the witness positions (first occurrence of each
    distinct value in [l, r), 0-based half-open); report/report_capped wrap it
    in the 1-based inclusive convention over the whole array.
    """

    __slots__ = ("values", "pred", "tree")

    def __init__(self, values, pred=None, groups=None):
        self.values = np.asarray(values)
        self.pred = (
            make_pred(self.values, groups) if pred is None else np.asarray(pred)
        )
        self.tree = ArgminSegtree(self.pred)

    def positions(self, l: int, r: int, cap=None) -> list[int]:
        out, _ = self.tree.walk_below(l, r, l, cap)
        return out

    def report(self, a: int, b: int) -> list[int]:
        """All distinct values in [a, b], 1-based inclusive."""
        check_range(len(self.values), a, b)
        return [int(self.values[i]) for i in self.positions(a - 1, b)]

    def report_capped(self, a: int, b: int, cap: int):
        """Up to cap distinct values plus an exhaustiveness flag.

        Returns (values, more): more is True iff further distinct values
        beyond the cap exist in the range.
        """
        check_range(len(self.values), a, b)
        if cap < 1:
            raise BadParameter(f"cap must be >= 1, got {cap}")
        pos = self.positions(a - 1, b, cap=cap)
        if len(pos) > cap:
            return [int(self.values[i]) for i in pos[:cap]], True
        return [int(self.values[i]) for i in pos], False

    def measured_bits(self) -> int:
        return self.pred.nbytes * 8 + self.tree.measured_bits()


class ColorCounter:
    """Counts distinct values in a range in logarithmic time."""

    __slots__ = ("n", "pred", "wav")

    def __init__(self, values, pred=None, groups=None):
        values = np.asarray(values)
        self.n = len(values)
        self.pred = make_pred(values, groups) if pred is None else np.asarray(pred)
        # shift so the -1 sentinel becomes 0; domain is then n + 1
        self.wav = CountLessWavelet(
            self.pred.astype(np.int64) + 1, domain=self.n + 1
        )

    def count_range(self, l: int, r: int) -> int:
        """Distinct values in [l, r), 0-based half-open."""
        return self.wav.count_less(l, r, l + 1)

    def count(self, a: int, b: int) -> int:
        """Distinct values in [a, b], 1-based inclusive."""
        check_range(self.n, a, b)
        return self.count_range(a - 1, b)

    def measured_bits(self) -> int:
        return self.pred.nbytes * 8 + self.wav.measured_bits()

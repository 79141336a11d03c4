"""Sparsified top-K index: auxiliary structures on a few tree levels only.

The balanced rank tree of the baseline is kept conceptually, but reporters
and counters exist only at "important" levels: multiples of
max(1, floor(log2 n) / f) clipped to the tree height, plus the leaf level.
Each important node additionally knows, for every child at the next important
level, the positions its elements occupy inside the parent (array E), so an
interval can jump a whole level group in one binary search per child.

A query walks important levels top-down.  At a node, children are scanned in
decreasing priority order; a child whose distinct count fits in the remaining
budget is reported wholesale, and the first child that overshoots is entered
recursively.  Larger f means fewer levels (less space) but wider scans.

_SparseCore works purely in rank space (an int array of priority ranks dense
in [0, sigma_dom)), so block structures with remapped color universes can
reuse it; SparseTopK wraps it over a ColorArray.
"""

from __future__ import annotations

import numpy as np

from .errors import BadParameter, OutOfBounds
from .model import ColorArray, ColorList, QuerySpec, check_range
from .primitives import ColorCounter, ColorReporter, make_pred
from .util import ceil_log2, floor_log2, nbits

_BUCKET_SORT_MIN = 64


class _SparseCore:
    __slots__ = (
        "n", "f", "sigma_dom", "height", "levels",
        "_E", "_off", "_reporters", "_counters", "last_visited",
    )

    def __init__(self, ranks, sigma_dom: int, f: int):
        if f < 2:
            raise BadParameter(f"level sparsification needs f >= 2, got {f}")
        ranks = np.asarray(ranks, dtype=np.int32)
        self.n = len(ranks)
        self.f = f
        self.sigma_dom = sigma_dom
        self.height = ceil_log2(sigma_dom)
        stride = max(1, floor_log2(max(self.n, 1)) // f)
        self.levels = sorted(
            {min(i * stride, self.height) for i in range(f + 1)} | {self.height}
        )
        perms, invs, offs = [], [], []
        for d in self.levels:
            shift = self.height - d
            perm = np.argsort(ranks >> shift, kind="stable").astype(np.int32)
            vals = ranks[perm]
            nodes = vals >> shift
            counts = np.bincount(nodes, minlength=1 << d)
            off = np.zeros((1 << d) + 1, dtype=np.int64)
            np.cumsum(counts, out=off[1:])
            inv = np.empty(self.n, dtype=np.int32)
            inv[perm] = np.arange(self.n, dtype=np.int32)
            perms.append(perm)
            invs.append(inv)
            offs.append(off)
        self._off = offs
        self._E: list[np.ndarray] = []
        self._reporters: dict[int, ColorReporter] = {}
        self._counters: dict[int, ColorCounter] = {}
        for li in range(len(self.levels) - 1):
            d, dn = self.levels[li], self.levels[li + 1]
            perm_c, off_p, inv_p = perms[li + 1], offs[li], invs[li]
            vals_c = ranks[perm_c]
            nodes_c = vals_c >> (self.height - dn)
            anc = nodes_c >> (dn - d)
            e = (inv_p[perm_c] - off_p[anc] + 1).astype(np.int32)
            self._E.append(e)
            if dn < self.height:
                pred = make_pred(vals_c, groups=nodes_c)
                self._reporters[li + 1] = ColorReporter(vals_c, pred=pred)
                self._counters[li + 1] = ColorCounter(vals_c, pred=pred)
        self.last_visited = 0

    def stored_elements(self) -> int:
        return self.n * len(self.levels)

    def map_child(self, li: int, child: int, a: int, b: int):
        """Interval of a level-li node mapped into important child `child`."""
        e = self._E[li]
        off = self._off[li + 1]
        base, end = int(off[child]), int(off[child + 1])
        seg = e[base:end]
        lo = int(np.searchsorted(seg, a, side="left")) + 1
        hi = int(np.searchsorted(seg, b, side="right"))
        return (lo, hi) if lo <= hi else (1, 0)

    def _count(self, li: int, node: int, a: int, b: int) -> int:
        if self.levels[li] == self.height:
            return 1
        base = int(self._off[li][node])
        return self._counters[li].count_range(base + a - 1, base + b)

    def _report(self, li: int, node: int, a: int, b: int, out: list) -> None:
        if self.levels[li] == self.height:
            out.append(node)
            return
        rep = self._reporters[li]
        base = int(self._off[li][node])
        for i in rep.positions(base + a - 1, base + b):
            out.append(int(rep.values[i]))

    def _descend(self, li: int, node: int, a: int, b: int, rem: int, out) -> None:
        if self.levels[li] == self.height:
            out.append(node)
            return
        shift = self.levels[li + 1] - self.levels[li]
        first = node << shift
        for u in range(((node + 1) << shift) - 1, first - 1, -1):
            self.last_visited += 1
            lo, hi = self.map_child(li, u, a, b)
            if lo > hi:
                continue
            m = self._count(li + 1, u, lo, hi)
            if m < rem:
                self._report(li + 1, u, lo, hi, out)
                rem -= m
            elif m == rem:
                self._report(li + 1, u, lo, hi, out)
                return
            else:
                self._descend(li + 1, u, lo, hi, rem, out)
                return

    def topk_ranks(self, a: int, b: int, k: int) -> list[int]:
        """Ranks of the top-k colors of [a, b] (1-based), highest first."""
        self.last_visited = 0
        out: list[int] = []
        self._descend(0, 0, a, b, k, out)
        if len(out) >= _BUCKET_SORT_MIN:
            mark = np.zeros(self.sigma_dom, dtype=bool)
            mark[out] = True
            return np.flatnonzero(mark)[::-1].tolist()
        return sorted(out, reverse=True)

    def measured_bits(self) -> int:
        total = nbits(*self._E, *self._off)
        total += sum(r.measured_bits() for r in self._reporters.values())
        total += sum(c.measured_bits() for c in self._counters.values())
        return total


class SparseTopK:
    def __init__(self, arr: ColorArray, f: int = 2):
        self.arr = arr
        self.n = arr.n
        self.f = f
        self.core = _SparseCore(arr.ranks(), arr.sigma, f)
        # each element lives in one array per important level; the leaf level
        # can exceed the f+1 regular ones when the stride does not divide the
        # tree height
        assert self.core.stored_elements() <= (f + 2) * arr.n

    @property
    def levels(self) -> list[int]:
        return self.core.levels

    def descend_interval(self, level_index: int, child: int, a: int, b: int):
        """Map a node interval into one important child; (1, 0) when empty."""
        core = self.core
        if not 0 <= level_index < len(core.levels) - 1:
            raise OutOfBounds(f"no child level below level index {level_index}")
        off = core._off[level_index + 1]
        if not 0 <= child < len(off) - 1:
            raise OutOfBounds(f"child {child} out of range")
        return core.map_child(level_index, child, a, b)

    def topk(self, a: int, b: int, k: int) -> ColorList:
        check_range(self.n, a, b, k)
        ranks = self.core.topk_ranks(a, b, k)
        self.last_visited = self.core.last_visited
        return self.arr.list_from_ranks(ranks)

    def query(self, q: QuerySpec) -> ColorList:
        return self.topk(q.a, q.b, q.k)

    def measured_bits(self) -> int:
        return self.core.measured_bits()

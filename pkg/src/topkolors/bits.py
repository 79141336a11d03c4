"""Bitvector with constant-time rank and near-constant select.

Bits are packed into uint64 words; an exclusive prefix-popcount array gives
rank in O(1).  Select binary-searches the prefix array and scans one word.
Positions are 1-based to match the query interface of the index structures.
"""

from __future__ import annotations

import numpy as np

from .errors import OutOfBounds
from .util import popcount_u64


class RankSelectBits:
    __slots__ = ("n", "ones", "_words", "_prefix")

    def __init__(self, bits):
        bits = np.asarray(bits, dtype=np.uint8)
        self.n = len(bits)
        nwords = (self.n + 63) // 64 if self.n else 1
        padded = np.zeros(nwords * 64, dtype=np.uint8)
        padded[: self.n] = bits
        shifts = np.arange(64, dtype=np.uint64)
        self._words = (padded.reshape(nwords, 64).astype(np.uint64) << shifts).sum(
            axis=1, dtype=np.uint64
        )
        counts = popcount_u64(self._words)
        self._prefix = np.zeros(nwords + 1, dtype=np.int64)
        np.cumsum(counts, out=self._prefix[1:])
        self.ones = int(self._prefix[-1])

    def get(self, i: int) -> int:
        """Bit at position i (1-based)."""
        if not 1 <= i <= self.n:
            raise OutOfBounds(f"position {i} not in [1, {self.n}]")
        w, r = (i - 1) >> 6, (i - 1) & 63
        return int((int(self._words[w]) >> r) & 1)

    def rank1(self, i: int) -> int:
        """Number of 1 bits among positions 1..i; rank1(0) == 0."""
        if not 0 <= i <= self.n:
            raise OutOfBounds(f"rank position {i} not in [0, {self.n}]")
        w, r = i >> 6, i & 63
        out = int(self._prefix[w])
        if r:
            out += ((int(self._words[w]) & ((1 << r) - 1))).bit_count()
        return out

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def select1(self, j: int) -> int:
        """Position of the j-th 1 bit (1-based)."""
        if not 1 <= j <= self.ones:
            raise OutOfBounds(f"select1({j}) with only {self.ones} ones")
        w = int(np.searchsorted(self._prefix, j, side="left")) - 1
        word = int(self._words[w])
        r = j - int(self._prefix[w])
        pos = w << 6
        while True:
            pos += 1
            if word & 1:
                r -= 1
                if r == 0:
                    return pos
            word >>= 1

    def select0(self, j: int) -> int:
        """Position of the j-th 0 bit (1-based)."""
        zeros = self.n - self.ones
        if not 1 <= j <= zeros:
            raise OutOfBounds(f"select0({j}) with only {zeros} zeros")
        # exclusive zero-count before word w is 64*w - prefix1[w]
        lo, hi = 0, len(self._words)
        while lo < hi:
            mid = (lo + hi) // 2
            if (mid << 6) - int(self._prefix[mid]) < j:
                lo = mid + 1
            else:
                hi = mid
        w = lo - 1
        word = int(self._words[w])
        r = j - ((w << 6) - int(self._prefix[w]))
        pos = w << 6
        while True:
            pos += 1
            if not word & 1:
                r -= 1
                if r == 0:
                    return pos
            word >>= 1

    def measured_bits(self) -> int:
        return self._words.nbytes * 8 + self._prefix.nbytes * 8

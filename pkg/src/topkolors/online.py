"""Incremental color reporting without a K fixed up front.

A stream wraps any index exposing topk(a, b, k) and yields the range's
colors one at a time in the same order a single big query would produce.
Internally it works in stages: stage i serves output positions 2^i through
2^(i+1)-1 out of a list of length 2^(i+1)-1 requested from the index, and
the moment a stage serves its first element the next stage's list is
fetched, so the element after any pause is already paid for.  The total of
all k values requested from the index stays within 8k+16 after k pulls,
and a short answer from the index marks the stream as final.
"""

from __future__ import annotations

from collections import deque

from .model import check_range


class ColorStream:
    """Iterator of (color, priority) pairs, highest effective rank first.

    elements_requested totals the k arguments of every underlying topk
    call, which is the work measure the 8k+16 guarantee is stated in.
    """

    def __init__(self, index, a: int, b: int):
        check_range(index.n, a, b)
        self._index = index
        self._a = a
        self._b = b
        self.elements_requested = 0
        self._stage = 0
        self._no_more = False
        self._next_list = None
        self._emitted_in_stage = 0
        self._pending = deque(self._request(1))

    def _request(self, k: int):
        self.elements_requested += k
        got = self._index.topk(self._a, self._b, k)
        if len(got) < k:
            self._no_more = True
        return got

    def __iter__(self):
        return self

    def __next__(self):
        while not self._pending:
            if self._next_list is None:
                raise StopIteration
            self._stage += 1
            lo = (1 << self._stage) - 1
            hi = (1 << (self._stage + 1)) - 1
            self._pending = deque(list(self._next_list)[lo:hi])
            self._next_list = None
            self._emitted_in_stage = 0
            if not self._pending:
                raise StopIteration
        if self._emitted_in_stage == 0 and not self._no_more:
            self._next_list = self._request((1 << (self._stage + 2)) - 1)
        self._emitted_in_stage += 1
        return self._pending.popleft()


def open_stream(index, a: int, b: int) -> ColorStream:
    return ColorStream(index, a, b)

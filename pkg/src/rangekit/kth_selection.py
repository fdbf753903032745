"""k-th smallest of the union of n hidden ascending sequences, probing sparingly.

Each round picks the sequence with the widest window, probes its middle
position and counts, per sequence, how many values do not exceed that pivot
(binary search between the closest known positions). The windows shrink on
the side the pivot rank falls on. When no window can shrink any more, the
prefixes [1, high(i)] hold slightly more than k values and a max-heap peels
the surplus off the top.
"""
from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Sequence

from .agg import INT64_MAX, INT64_MIN
from .errors import BadSubrange, InputError, RankOutOfRange

NEG_INF = INT64_MIN
POS_INF = INT64_MAX


class SequenceOracle:
    """Probe access to sequences that are hidden from the selection code.

    Sequences are 0-based, positions 1-based.
    """

    def __init__(self, sequences: Sequence[Sequence[int]]):
        self._seqs = [list(s) for s in sequences]
        self.b = [len(s) for s in self._seqs]
        self.query_counter = 0
        self.probe_log: set = set()

    @property
    def n(self) -> int:
        return len(self.b)

    def probe(self, i: int, j: int) -> int:
        if not 1 <= j <= self.b[i]:
            raise IndexError(f"position {j} outside sequence {i} of length {self.b[i]}")
        self.query_counter += 1
        self.probe_log.add((i, j))
        v = self._seqs[i][j - 1]
        if v in (NEG_INF, POS_INF):
            raise InputError("sequence values must not equal the 64-bit sentinels")
        return v


class ShiftedOracle:
    """Exposes positions a(i)..b(i) of each base sequence as 1..b(i)-a(i)+1."""

    def __init__(self, base, a: Sequence[int], b: Sequence[int]):
        if len(a) != base.n or len(b) != base.n:
            raise BadSubrange(f"need {base.n} subrange bounds")
        for i, (lo, hi) in enumerate(zip(a, b)):
            if not 1 <= lo <= hi <= base.b[i]:
                raise BadSubrange(f"sequence {i}: need 1 <= {lo} <= {hi} <= {base.b[i]}")
        self.base = base
        self.a = list(a)
        self.b = [hi - lo + 1 for lo, hi in zip(a, b)]

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def query_counter(self) -> int:
        return self.base.query_counter

    @property
    def probe_log(self) -> set:
        return self.base.probe_log

    def probe(self, i: int, j: int) -> int:
        return self.base.probe(i, j + self.a[i] - 1)


@dataclass
class SelectionState:
    oracle: object
    low: list
    high: list
    known_pos: list  # per sequence, sorted known positions incl. sentinels
    known_val: list  # matching values
    cache: list      # per sequence, position -> value
    iterations: list = field(default_factory=list)
    finish_snv: int | None = None

    @classmethod
    def fresh(cls, oracle) -> "SelectionState":
        n = oracle.n
        return cls(oracle, [1] * n, list(oracle.b),
                   [[0, oracle.b[i] + 1] for i in range(n)],
                   [[NEG_INF, POS_INF] for _ in range(n)],
                   [{0: NEG_INF, oracle.b[i] + 1: POS_INF} for i in range(n)])

    def value(self, i: int, j: int) -> int:
        """x(i, j), probing only if the position is not cached yet."""
        c = self.cache[i]
        if j in c:
            return c[j]
        v = self.oracle.probe(i, j)
        c[j] = v
        k = bisect_right(self.known_pos[i], j)
        self.known_pos[i].insert(k, j)
        self.known_val[i].insert(k, v)
        return v


def count_leq(state: SelectionState, i: int, pivot: int) -> int:
    """Number of values in sequence i that are <= pivot."""
    vals = state.known_val[i]
    t = bisect_right(vals, pivot) - 1
    u, v = state.known_pos[i][t], state.known_pos[i][t + 1]
    ulow, uhigh, uok = u, v - 1, u
    while ulow <= uhigh:
        umid = (ulow + uhigh) // 2
        if state.value(i, umid) <= pivot:
            uok = umid
            ulow = umid + 1
        else:
            uhigh = umid - 1
    return uok


def select(oracle, k: int, early_exit: bool = False) -> tuple[int, SelectionState]:
    """Run the selection; returns (k-th smallest value, final state)."""
    n = oracle.n
    total = sum(oracle.b)
    if not 1 <= k <= total:
        raise RankOutOfRange(f"rank {k} outside 1..{total}")
    st = SelectionState.fresh(oracle)
    low, high = st.low, st.high
    while True:
        q = -1
        for i in range(n):
            if low[i] < high[i] and (q < 0 or high[i] - low[i] > high[q] - low[q]):
                q = i
        if q < 0:
            break
        before = oracle.query_counter
        mid_q = (low[q] + high[q]) // 2
        pivot = st.value(q, mid_q)
        mids = [mid_q if i == q else count_leq(st, i, pivot) for i in range(n)]
        snv = sum(mids)
        st.iterations.append({"q": q, "mid": mid_q, "pivot": pivot, "snv": snv,
                              "probes": oracle.query_counter - before})
        if snv == k:
            return pivot, st
        if snv < k:
            for i in range(n):
                low[i] = max(low[i], mids[i] + 1)
        else:
            for i in range(n):
                high[i] = min(high[i], mids[i])
            if early_exit and snv - k < n:
                break
    snv = sum(high)
    st.finish_snv = snv
    heap = []
    for i in range(n):
        if high[i] > 0:
            heap.append((-st.value(i, high[i]), -i))
    heapq.heapify(heap)
    idx = list(high)
    while snv > k:
        _, ni = heapq.heappop(heap)
        i = -ni
        idx[i] -= 1
        if idx[i] > 0:
            heapq.heappush(heap, (-st.value(i, idx[i]), ni))
        snv -= 1
    return -heap[0][0], st


def kth_smallest(oracle, k: int, early_exit: bool = False) -> int:
    return select(oracle, k, early_exit)[0]


def kth_in_subranges(oracle, a: Sequence[int], b: Sequence[int], k: int,
                     early_exit: bool = False) -> int:
    """k-th smallest among positions a(i)..b(i) of every sequence (1-based, inclusive)."""
    return kth_smallest(ShiftedOracle(oracle, a, b), k, early_exit)


def parse_sequences(lines: Sequence[str]) -> list[list[int]]:
    rows = [ln.split() for ln in lines if ln.strip()]
    if not rows:
        raise InputError("empty sequences file")
    n = int(rows[0][0])
    body = rows[1:]
    if len(body) != n:
        raise InputError(f"expected {n} sequence lines")
    seqs = []
    for t, r in enumerate(body, 1):
        vals = [int(v) for v in r[1:]]
        if int(r[0]) != len(vals):
            raise InputError(f"sequence {t}: declared length {r[0]} but {len(vals)} values")
        if not vals or any(a >= b for a, b in zip(vals, vals[1:])):
            raise InputError(f"sequence {t} must be nonempty and strictly increasing")
        seqs.append(vals)
    return seqs

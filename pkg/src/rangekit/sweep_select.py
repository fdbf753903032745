"""Offline k-th smallest distance from the points left of an anchor (xq, 0).

A vertical line sweeps left to right, keeping the points with x <= xd
ordered by distance to (xd, 0). The order only changes when a point is
inserted (xd reaches its x) or when two neighbours cross: for neighbours
a before b with x(a) < x(b), a falls behind b past the crossover abscissa
xsod(a, b), the root of a linear equation. Queries read position k.

All abscissas and squared distances are exact rationals; only reported
distances go through a square root.
"""
from __future__ import annotations

import heapq
import math
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import InputError, NoCrossover, RankExceedsEligible

INSERT, SWAP, QUERY = 1, 3, 2
# processing rank at equal abscissa: inserts, then swaps, then queries
_RANK = {INSERT: 0, SWAP: 1, QUERY: 2}


def xsod(a: tuple, b: tuple) -> Fraction:
    """Abscissa X where a and b are equally far from (X, 0)."""
    (xa, ya), (xb, yb) = a, b
    if xa == xb:
        raise NoCrossover(f"points share abscissa {xa}")
    return Fraction(xb * xb + yb * yb - xa * xa - ya * ya, 2 * (xb - xa))


@dataclass
class SweepResult:
    answers: list            # float distance, or None where the rank was too large
    squared: list            # exact squared distances (Fraction), or None
    errors: dict             # query index -> RankExceedsEligible
    stats: Counter = field(default_factory=Counter)
    audit_failures: list = field(default_factory=list)


class SweepState:
    def __init__(self, points: Sequence[tuple], explicit_delete: bool = False):
        self.pts = [(x, y) for x, y in points]  # integers; only abscissas become rational
        self.od: list[int] = []
        self.pos: dict[int, int] = {}
        self.heap: list = []
        self.xd: Optional[Fraction] = None
        self.seq = 0
        self.explicit = explicit_delete
        self.live: dict = {}  # (a, b) -> seq of its queued event, explicit mode only
        self.stats = Counter()

    def d2(self, i: int, xd) -> Fraction:
        x, y = self.pts[i]
        return (x - xd) ** 2 + y * y

    def key(self, i: int, xd) -> tuple:
        return (self.d2(i, xd), i)

    # -- event bookkeeping --

    def _schedule(self, at: int) -> None:
        """Queue the crossover of od[at], od[at + 1] if they will still cross."""
        if at < 0 or at + 1 >= len(self.od):
            return
        a, b = self.od[at], self.od[at + 1]
        if not self.pts[a][0] < self.pts[b][0]:
            return
        x = xsod(self.pts[a], self.pts[b])
        if x < self.xd:
            return
        self.seq += 1
        heapq.heappush(self.heap, (x, self.seq, a, b))
        self.stats["swap_events_queued"] += 1
        if self.explicit:
            self.live[(a, b)] = self.seq

    def _drop(self, at: int) -> None:
        """The pair at (at, at + 1) stops being adjacent: cancel its event."""
        if self.explicit and 0 <= at and at + 1 < len(self.od):
            self.live.pop((self.od[at], self.od[at + 1]), None)

    def _renumber(self, start: int) -> None:
        od, pos = self.od, self.pos
        for p in range(start, len(od)):
            pos[od[p]] = p

    # -- handlers --

    def seed(self, ids: Iterable[int], xd) -> None:
        """Initial order of the points already left of the first query."""
        self.xd = xd
        self.od = sorted(ids, key=lambda i: self.key(i, xd))
        self._renumber(0)
        for p in range(len(self.od) - 1):
            self._schedule(p)

    def handle_insert(self, i: int) -> None:
        xd = self.xd = self.pts[i][0]
        p = bisect_left(self.od, self.key(i, xd), key=lambda j: self.key(j, xd))
        self._drop(p - 1)
        self.od.insert(p, i)
        self._renumber(p)
        self.stats["shifted"] += len(self.od) - p - 1
        self._schedule(p - 1)
        self._schedule(p)

    def next_swap(self) -> Optional[tuple]:
        """Pop stale entries; return the earliest valid (X, a, b) without removing it."""
        while self.heap:
            x, seq, a, b = self.heap[0]
            if self.explicit:
                ok = self.live.get((a, b)) == seq
            else:
                pa, pb = self.pos.get(a), self.pos.get(b)
                ok = pa is not None and pb == pa + 1 and self.pts[a][0] < self.pts[b][0] and x >= self.xd
            if ok:
                return x, a, b
            heapq.heappop(self.heap)
            self.stats["stale_events"] += 1
        return None

    def handle_swap(self, x, a: int, b: int) -> None:
        heapq.heappop(self.heap)
        self.xd = x
        pa = self.pos[a]
        if self.explicit:
            assert self.pos[b] == pa + 1, "explicit-delete mode popped a non-adjacent pair"
            del self.live[(a, b)]
        self._drop(pa - 1)
        self._drop(pa + 1)
        od = self.od
        od[pa], od[pa + 1] = b, a
        self.pos[a], self.pos[b] = pa + 1, pa
        self.stats["swaps"] += 1
        self._schedule(pa - 1)
        self._schedule(pa + 1)

    def handle_query(self, xq, k: int, qi: int):
        self.xd = xq
        if k > len(self.od):
            raise RankExceedsEligible(qi, k, len(self.od))
        return self.d2(self.od[k - 1], xq)

    def audit(self, xd) -> bool:
        return self.od == sorted(self.od, key=lambda i: self.key(i, xd))


def solve_offline(points: Sequence[tuple], queries: Sequence[tuple], *,
                  explicit_delete: bool = False,
                  audit_at: Sequence = ()) -> SweepResult:
    """Answer every (xq, k) query; results are reported in input order.

    ``audit_at`` lists abscissas at which the maintained order is compared
    with a full re-sort (skipped when they coincide with an event).
    """
    for j, (_, k) in enumerate(queries):
        if k < 1:
            raise InputError(f"query {j}: rank must be >= 1, got {k}")
    for x, y in points:
        if y < 0:
            raise InputError(f"point ({x}, {y}) lies below the axis")
    m = len(queries)
    res = SweepResult([None] * m, [None] * m, {})
    if not m:
        return res
    st = SweepState(points, explicit_delete)
    res.stats = st.stats
    order = sorted(range(m), key=lambda j: (queries[j][0], j))
    x0 = queries[order[0]][0]
    pts = st.pts
    st.seed((i for i in range(len(pts)) if pts[i][0] <= x0), x0)
    inserts = sorted((i for i in range(len(pts)) if pts[i][0] > x0), key=lambda i: (pts[i][0], i))
    audits = sorted(Fraction(a) for a in audit_at if Fraction(a) > x0)
    ii = qi = ai = 0
    while qi < m:
        cands = []
        if ii < len(inserts):
            cands.append((pts[inserts[ii]][0], _RANK[INSERT], INSERT))
        sw = st.next_swap()
        if sw is not None:
            cands.append((sw[0], _RANK[SWAP], SWAP))
        cands.append((queries[order[qi]][0], _RANK[QUERY], QUERY))
        at, _, kind = min(cands)
        while ai < len(audits) and audits[ai] <= at:
            if audits[ai] < at:
                st.stats["audits"] += 1
                if not st.audit(audits[ai]):
                    res.audit_failures.append(audits[ai])
            ai += 1
        if kind == INSERT:
            st.handle_insert(inserts[ii])
            ii += 1
        elif kind == SWAP:
            st.handle_swap(*sw)
        else:
            j = order[qi]
            qi += 1
            try:
                d2 = st.handle_query(at, queries[j][1], j)
            except RankExceedsEligible as e:
                res.errors[j] = e
                continue
            res.squared[j] = d2
            res.answers[j] = math.sqrt(d2)
    return res


def parse_points(lines: Sequence[str]) -> list[tuple[int, int]]:
    pts = []
    for t, ln in enumerate(lines, 1):
        if not ln.strip():
            continue
        r = ln.split()
        if len(r) != 2:
            raise InputError(f"points line {t}: expected 'x y'")
        pts.append((int(r[0]), int(r[1])))
    return pts


def parse_queries(lines: Sequence[str]) -> list[tuple[int, int]]:
    qs = []
    for t, ln in enumerate(lines, 1):
        if not ln.strip():
            continue
        r = ln.split()
        if len(r) != 2:
            raise InputError(f"queries line {t}: expected 'xq k'")
        qs.append((int(r[0]), int(r[1])))
    return qs

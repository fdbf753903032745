"""Brute-force reference implementations.

Each function restates a problem directly and shares no code with the fast
paths beyond the aggregation algebra. They are quadratic or exponential
on purpose; the caps below keep test runtimes small.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .agg import AggregateOp, fold
from .errors import (EmptyRange, PositionOutOfRange, RankExceedsEligible, RankOutOfRange)

MAX_EXHAUSTIVE_STATIONS = 20


# -- range aggregation ----------------------------------------------------------

def in_box(coords: Sequence[int], lo: Sequence[int], hi: Sequence[int]) -> bool:
    return all(a <= c <= b for a, c, b in zip(lo, coords, hi))


def naive_range_agg(points: Iterable, op: AggregateOp, lo: Sequence[int], hi: Sequence[int]):
    """Fold of the weights of the (coords, weight) pairs inside the box."""
    return fold(op, (w for c, w in points if in_box(c, lo, hi)))


def naive_cube_box(cells: dict, op: AggregateOp, lo, hi):
    """Fold over a cube given as {index tuple: value}."""
    return fold(op, (cells[c] for c in product(*(range(a, b + 1) for a, b in zip(lo, hi)))))


def naive_stamps(m: Sequence[int], stamps, op: AggregateOp) -> dict:
    """Apply every stamp cell by cell; returns {index tuple: value}."""
    cells = {c: op.neutral for c in product(*(range(1, x + 1) for x in m))}
    for st in stamps:
        for c in product(*(range(a, b + 1) for a, b in zip(st.lo, st.hi))):
            cells[c] = op.combine(st.u, cells[c])
    return cells


# -- rooted trees -------------------------------------------------------------

def naive_subtree_query(n: int, root: int, edges, weights, op: AggregateOp, i: int, d1: int, d2):
    """Walk i's subtree, measuring distance from i directly. ``d2=None`` is unbounded."""
    children: dict = {}
    for p, c, ln in edges:
        children.setdefault(p, []).append((c, ln))
    acc = op.neutral
    stack = [(i, 0)]
    while stack:
        v, dist = stack.pop()
        if dist >= d1 and (d2 is None or dist <= d2):
            acc = op.combine(acc, weights[v - 1])
        for c, ln in children.get(v, ()):
            stack.append((c, dist + ln))
    return acc


# -- station collapse ---------------------------------------------------------

def cascade_simulate(s: Sequence[int], r: Sequence[int], artificial: Iterable[int]) -> set[int]:
    """Stations (1-based) collapsed once the given ones are collapsed artificially.

    Data only flows forward, so one left-to-right pass reaches the fixed point.
    A collapsed station forwards its inflow plus its own rate; a working one
    absorbs everything, so its normal traffic adds no excess downstream.
    """
    art = set(artificial)
    collapsed = set()
    rr = 0
    for j in range(1, len(s) + 1):
        sj, rj = s[j - 1], r[j - 1]
        if j in art or rr > rj - sj:
            collapsed.add(j)
            rr = rr + sj
        else:
            rr = 0
    return collapsed


def exhaustive_min_effort(s: Sequence[int], r: Sequence[int], c: Sequence[int]) -> tuple[int, list[int]]:
    """Cheapest artificial set collapsing station n, over all 2^n subsets.

    Returns (effort, sorted first stations of all cheapest sets). Several
    starts can tie, e.g. when a zero-cost station joins an optimal set.
    Vectorized over subsets with numpy.
    """
    n = len(s)
    if n > MAX_EXHAUSTIVE_STATIONS:
        raise ValueError(f"exhaustive search capped at n = {MAX_EXHAUSTIVE_STATIONS}")
    masks = np.arange(1 << n, dtype=np.int64)
    rr = np.zeros(1 << n, dtype=np.int64)
    cost = np.zeros(1 << n, dtype=np.int64)
    down = np.zeros(1 << n, dtype=bool)
    for j in range(n):
        art = (masks >> j) & 1 == 1
        cost += np.where(art, c[j], 0)
        down = art | (rr > r[j] - s[j])
        rr = np.where(down, rr + s[j], 0)
    best = int(cost[down].min())
    # lowest set bit of each optimal mask = its first artificial station
    firsts = {(int(m) & -int(m)).bit_length() for m in masks[down & (cost == best)]}
    return best, sorted(firsts)


# -- selection ----------------------------------------------------------------

def merge_kth(sequences: Sequence[Sequence[int]], k: int):
    merged = list(heapq.merge(*sequences))
    if not 1 <= k <= len(merged):
        raise RankOutOfRange(f"rank {k} outside 1..{len(merged)}")
    return merged[k - 1]


# -- median -------------------------------------------------------------------

def naive_median_cube(coords: Sequence[Sequence[int]], cells: dict, lo, hi):
    """Exhaustive scan over in-box grid points; lexicographically smallest minimizer.

    Returns (P, cost) with P a tuple of coordinates.
    """
    box = list(product(*(range(a, b + 1) for a, b in zip(lo, hi))))
    if sum(cells[c] for c in box) == 0:
        raise EmptyRange("no weight inside the box")
    best = None
    for cand in box:
        p = tuple(coords[j][cand[j] - 1] for j in range(len(cand)))
        cost = sum(cells[c] * sum(abs(coords[j][c[j] - 1] - p[j]) for j in range(len(c)))
                   for c in box)
        if best is None or (cost, p) < best:
            best = (cost, p)
    return best[1], best[0]


def l1_cost(xs: Sequence, p) -> object:
    return sum(abs(x - p) for x in xs)


# -- sequence editor ------------------------------------------------------------

def naive_seq_sim(initial: Sequence[int], script) -> tuple[list, list]:
    """Flat-list editor. Returns (answers to Q ops, final sequence)."""
    seq = list(initial)
    out = []
    for op in script:
        kind = op[0]
        if kind == "R":
            _, i, j = op
            _check(seq, i, j)
            seq[i - 1:j] = seq[i - 1:j][::-1]
        elif kind == "C":
            _, i, j, p = op
            _check(seq, i, j)
            seg = seq[i - 1:j]
            rest = seq[:i - 1] + seq[j:]
            if p != -1:
                if not 0 <= p <= len(rest):
                    raise PositionOutOfRange(f"paste target {p} outside 0..{len(rest)}")
                rest[p:p] = seg
            seq = rest
        elif kind == "I":
            _, p, vals = op
            if not 0 <= p <= len(seq):
                raise PositionOutOfRange(f"insert position {p} outside 0..{len(seq)}")
            seq[p:p] = list(vals)
        elif kind == "Q":
            _, i = op
            if not 1 <= i <= len(seq):
                raise PositionOutOfRange(f"position {i} outside 1..{len(seq)}")
            out.append(seq[i - 1])
        else:
            raise ValueError(f"unknown op {kind!r}")
    return out, seq


def _check(seq, i, j):
    if not 1 <= i <= j <= len(seq):
        raise PositionOutOfRange(f"range [{i}, {j}] outside 1..{len(seq)}")


# -- rotating stack -------------------------------------------------------------

def naive_stack(k: int, script) -> list:
    """Bottom-to-top order; ``script`` items are ("P", x) or ("ROT",)."""
    st: list = []
    for op in script:
        if op[0] == "P":
            st.append(op[1])
        else:
            t = min(k, len(st))
            if t:
                st[-t:] = st[-t:][::-1]
    return st


# -- sweep selection ------------------------------------------------------------

def naive_kth_distance_sq(points: Sequence[tuple[int, int]], xq, k: int, qi: int = 0):
    """Squared distance of the k-th closest point with x <= xq to (xq, 0)."""
    d2 = sorted((Fraction(x) - xq) ** 2 + y * y for x, y in points if x <= xq)
    if k > len(d2):
        raise RankExceedsEligible(qi, k, len(d2))
    return d2[k - 1]


def naive_kth_distance(points, xq, k: int, qi: int = 0) -> float:
    return float(naive_kth_distance_sq(points, xq, k, qi)) ** 0.5


def distance_order(points: Sequence[tuple[int, int]], ids: Iterable[int], xd) -> list[int]:
    """Point ids sorted by squared distance to (xd, 0), ties by id."""
    return sorted(ids, key=lambda i: ((points[i][0] - xd) ** 2 + points[i][1] ** 2, i))

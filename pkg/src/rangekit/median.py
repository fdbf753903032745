"""Median solvers: 1D L1 and weighted least squares, and a dynamic grid range median.

The grid version keeps W (cell weights) and, per dimension j, D_j(c) =
x(j, c(j)) * W(c) in range-add/range-sum grids. Weighted L1 cost separates
by dimension, so each coordinate of the optimum is a weighted lower median
of the box's slab weights, found by binary search over cell indices.
"""
from __future__ import annotations

import math
from collections import Counter
from itertools import product
from typing import Optional, Sequence

from .agg import check_int64
from .errors import EmptyInput, EmptyRange, InputError, InvalidBox, NegativeWeight, ZeroTotalWeight


# -- 1D ---------------------------------------------------------------------------

def select_kth(xs: Sequence, k: int):
    """k-th smallest (0-based) in worst-case linear time (median of medians)."""
    xs = list(xs)
    while True:
        if len(xs) <= 10:
            return sorted(xs)[k]
        groups = [sorted(xs[i:i + 5]) for i in range(0, len(xs), 5)]
        medians = [g[len(g) // 2] for g in groups]
        pivot = select_kth(medians, len(medians) // 2)
        lows = [x for x in xs if x < pivot]
        highs = [x for x in xs if x > pivot]
        eq = len(xs) - len(lows) - len(highs)
        if k < len(lows):
            xs = lows
        elif k < len(lows) + eq:
            return pivot
        else:
            k -= len(lows) + eq
            xs = highs


def l1_median(xs: Sequence) -> tuple[object, tuple[object, object]]:
    """(location, optimal interval) minimizing sum |x - p|.

    Even n: the interval is [x(n/2), x(n/2 + 1)] and the location its left end.
    """
    n = len(xs)
    if n == 0:
        raise EmptyInput("median of zero points")
    if n % 2:
        m = select_kth(xs, n // 2)
        return m, (m, m)
    lo = select_kth(xs, n // 2 - 1)
    hi = select_kth(xs, n // 2)
    return lo, (lo, hi)


def weighted_lsq_point(xs: Sequence[float], ws: Sequence[float]) -> float:
    """Weighted mean, the minimizer of sum w(i) (x(i) - p)^2."""
    if len(xs) != len(ws):
        raise InputError("need one weight per coordinate")
    if not xs:
        raise EmptyInput("no points")
    if any(w < 0 for w in ws):
        raise NegativeWeight("weights must be nonnegative")
    total = math.fsum(ws)
    if total <= 0:
        raise ZeroTotalWeight("total weight is zero")
    return math.fsum(w * x for w, x in zip(ws, xs)) / total


def lsq_cost(xs: Sequence[float], ws: Sequence[float], p: float) -> float:
    return math.fsum(w * (x - p) ** 2 for w, x in zip(ws, xs))


# -- grid range-add / range-sum -----------------------------------------------------

class GridSum:
    """d-dimensional Fenwick trees supporting box add and box sum, exact on integers.

    With difference array D, the prefix sum at x is
    sum_{z <= x} D(z) * prod_j (x_j + 1 - z_j). Expanding the product gives
    2^d trees, tree S holding D(z) * prod_{j not in S} (-z_j).
    """

    def __init__(self, m: Sequence[int]):
        self.m = tuple(m)
        self.d = len(self.m)
        size = 1
        for x in self.m:
            size *= x + 1
        self.trees = [[0] * size for _ in range(1 << self.d)]
        st = [1] * self.d
        for j in range(self.d - 2, -1, -1):
            st[j] = st[j + 1] * (self.m[j + 1] + 1)
        self.strides = st

    def _offsets(self, idx: Sequence[int], up: bool) -> list[int]:
        """Flat offsets of the Fenwick cells touched from ``idx``."""
        per_dim = []
        for j, c in enumerate(idx):
            seq = []
            if up:
                while c <= self.m[j]:
                    seq.append(c * self.strides[j])
                    c += c & -c
            else:
                while c > 0:
                    seq.append(c * self.strides[j])
                    c -= c & -c
            per_dim.append(seq)
        return [sum(t) for t in product(*per_dim)]

    def _point_diff(self, z: Sequence[int], v: int) -> None:
        offs = self._offsets(z, True)
        for mask, tree in enumerate(self.trees):
            coef = v
            for j in range(self.d):
                if not mask >> j & 1:
                    coef *= -z[j]
            for o in offs:
                tree[o] += coef

    def add(self, lo: Sequence[int], hi: Sequence[int], v: int) -> None:
        for corner in range(1 << self.d):
            z, sign = [], 1
            for j in range(self.d):
                if corner >> j & 1:
                    z.append(hi[j] + 1)
                    sign = -sign
                else:
                    z.append(lo[j])
            if all(c <= mj for c, mj in zip(z, self.m)):
                self._point_diff(z, sign * v)

    def prefix(self, x: Sequence[int]) -> int:
        if any(c <= 0 for c in x):
            return 0
        offs = self._offsets(x, False)
        total = 0
        for mask, tree in enumerate(self.trees):
            s = sum(tree[o] for o in offs)
            if s:
                for j in range(self.d):
                    if mask >> j & 1:
                        s *= x[j] + 1
                total += s
        return total

    def sum(self, lo: Sequence[int], hi: Sequence[int]) -> int:
        total = 0
        for corner in range(1 << self.d):
            x, sign = [], 1
            for j in range(self.d):
                if corner >> j & 1:
                    x.append(lo[j] - 1)
                    sign = -sign
                else:
                    x.append(hi[j])
            total += sign * self.prefix(x)
        return total


# -- dynamic grid median --------------------------------------------------------------

class MedianCube:
    def __init__(self, coords: Sequence[Sequence[int]], weights: Optional[Sequence[int]] = None,
                 stats: Optional[Counter] = None):
        self.coords = [list(c) for c in coords]
        self.m = tuple(len(c) for c in self.coords)
        self.d = len(self.m)
        if self.d == 0 or any(x == 0 for x in self.m):
            raise InputError("every axis needs at least one cell")
        for j, xs in enumerate(self.coords):
            if any(a > b for a, b in zip(xs, xs[1:])):
                raise InputError(f"axis {j + 1} coordinates must be nondecreasing")
        self.stats = stats if stats is not None else Counter()
        self.W = GridSum(self.m)
        self.D = [GridSum(self.m) for _ in range(self.d)]
        if weights is not None:
            cells = list(product(*(range(1, x + 1) for x in self.m)))
            if len(weights) != len(cells):
                raise InputError(f"expected {len(cells)} weights, got {len(weights)}")
            for c, w in zip(cells, weights):
                if w < 0:
                    raise NegativeWeight(f"cell {c} has negative weight {w}")
                if w:
                    self._add_cell(c, w)

    def _check_box(self, lo, hi) -> None:
        if len(lo) != self.d or len(hi) != self.d:
            raise InvalidBox(f"box needs {self.d} bounds per side")
        for j, (a, b) in enumerate(zip(lo, hi)):
            if not 1 <= a <= b <= self.m[j]:
                raise InvalidBox(f"axis {j + 1}: need 1 <= {a} <= {b} <= {self.m[j]}")

    def _add_cell(self, c, delta) -> None:
        self.W.add(c, c, delta)
        for j in range(self.d):
            self.D[j].add(c, c, self.coords[j][c[j] - 1] * delta)
        self.stats["structure_updates"] += self.d + 1

    def cell_weight(self, c: Sequence[int]) -> int:
        c = tuple(c)
        self._check_box(c, c)
        return self.W.sum(c, c)

    def point_update(self, cell: Sequence[int], delta: int) -> None:
        cell = tuple(cell)
        self._check_box(cell, cell)
        if delta < 0 and self.W.sum(cell, cell) + delta < 0:
            raise NegativeWeight(f"cell {cell} would drop below zero")
        self._add_cell(cell, delta)

    def range_update(self, lo: Sequence[int], hi: Sequence[int], u: int) -> None:
        lo, hi = tuple(lo), tuple(hi)
        self._check_box(lo, hi)
        if u < 0:
            for c in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
                if self.W.sum(c, c) + u < 0:
                    raise NegativeWeight(f"cell {c} would drop below zero")
        self.W.add(lo, hi, u)
        self.stats["structure_updates"] += 1
        for j in range(self.d):
            xs = self.coords[j]
            for t in range(lo[j], hi[j] + 1):
                slo = lo[:j] + (t,) + lo[j + 1:]
                shi = hi[:j] + (t,) + hi[j + 1:]
                self.D[j].add(slo, shi, xs[t - 1] * u)
                self.stats["structure_updates"] += 1

    def query(self, lo: Sequence[int], hi: Sequence[int]) -> tuple[tuple, int]:
        """(P, cost): weighted lower median per dimension and the total weighted L1 cost."""
        lo, hi = tuple(lo), tuple(hi)
        self._check_box(lo, hi)
        total = self.W.sum(lo, hi)
        if total == 0:
            raise EmptyRange("no weight inside the box")
        half = (total + 1) // 2
        point, cost = [], 0
        for j in range(self.d):
            a, b = lo[j], hi[j]
            while a < b:
                t = (a + b) // 2
                if self.W.sum(lo, hi[:j] + (t,) + hi[j + 1:]) >= half:
                    b = t
                else:
                    a = t + 1
            slab_hi = hi[:j] + (a,) + hi[j + 1:]
            p = self.coords[j][a - 1]
            wl = self.W.sum(lo, slab_hi)
            sl = self.D[j].sum(lo, slab_hi)
            sr = self.D[j].sum(lo, hi) - sl
            cost += p * wl - sl + sr - p * (total - wl)
            point.append(p)
        return tuple(point), check_int64(cost)


def cube_point_update(mc: MedianCube, cell, delta) -> None:
    mc.point_update(cell, delta)


def cube_range_update(mc: MedianCube, lo, hi, u) -> None:
    mc.range_update(lo, hi, u)


def range_median_query(mc: MedianCube, lo, hi) -> tuple[tuple, int]:
    return mc.query(lo, hi)


def parse_median_cube(lines: Sequence[str]) -> MedianCube:
    rows = [ln.split() for ln in lines if ln.strip()]
    if not rows:
        raise InputError("empty median-cube file")
    d = int(rows[0][0])
    m = [int(v) for v in rows[0][1:]]
    if len(m) != d or len(rows) < d + 1:
        raise InputError("header must be 'd m1 ... md' followed by d coordinate lines")
    coords = [[int(v) for v in rows[1 + j]] for j in range(d)]
    for j in range(d):
        if len(coords[j]) != m[j]:
            raise InputError(f"axis {j + 1}: expected {m[j]} coordinates")
    weights = [int(v) for r in rows[d + 1:] for v in r]
    return MedianCube(coords, weights)

"""Semi-dynamic d-dimensional range trees and the 2D fractional-cascading index.

The outermost tree of a d-dimensional :class:`RangeTree` is keyed by the last
coordinate; every node nests a (d-1)-dimensional tree over the points it
covers, projected onto the leading d-1 coordinates. Keys live only at the
leaves. Points sharing all coordinates are merged on build; the merged point
keeps the fold of their weights and a multiplicity.

Range updates (weights increased by ``u``) are supported for SUM in any
dimension and for MIN/MAX when d = 1. For d >= 2 each node carries two
nested trees: ``full`` (T1) absorbs updates whose canonical decomposition
contains the node, ``inner`` (T2) holds the base weights plus the share of
updates decomposed strictly below the node. T1 records are also queued on the
node and pushed to the children the next time an update descends through it;
queries evaluate still-queued ancestor records by range counting instead of
pushing, so they never mutate the tree.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .agg import AggregateOp, check_int64, fold
from .errors import EmptyPointSet, InputError, InvalidBox, UnknownPoint, UnsupportedCombination, ZeroInProductCube

Coords = tuple


@dataclass
class PointSet:
    points: list  # (coords tuple, weight)

    @property
    def d(self) -> int:
        return len(self.points[0][0]) if self.points else 0

    def distinct_counts(self) -> list[int]:
        return [len({c[j] for c, _ in self.points}) for j in range(self.d)]

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "PointSet":
        pts = [(tuple(int(v) for v in r[:-1]), int(r[-1])) for r in rows]
        if pts and len({len(c) for c, _ in pts}) != 1:
            raise ValueError("points have differing dimension counts")
        return cls(pts)


def normalize_box(lo: Sequence[int], hi: Sequence[int], d: int) -> tuple[Coords, Coords]:
    lo, hi = tuple(lo), tuple(hi)
    if len(lo) != d or len(hi) != d:
        raise InvalidBox(f"box needs {d} lower and upper bounds")
    for j, (a, b) in enumerate(zip(lo, hi)):
        if a > b:
            raise InvalidBox(f"dimension {j + 1}: lower bound {a} exceeds upper bound {b}")
    return lo, hi


class RangeTreeNode:
    __slots__ = ("lo", "hi", "left", "right", "qagg", "uagg", "cnt",
                 "inner", "full", "pending", "ids", "groups")

    def __init__(self, lo, hi):
        self.lo = lo
        self.hi = hi
        self.left = self.right = None
        self.qagg = None
        self.uagg = 0
        self.cnt = 0
        self.inner = None
        self.full = None
        self.pending = None
        self.ids = None
        self.groups = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def __repr__(self) -> str:
        return f"RangeTreeNode([{self.lo}, {self.hi}])"


class RangeTree:
    def __init__(self, points: Iterable, op: AggregateOp, range_updates: bool = False,
                 stats: Optional[Counter] = None, *, _with_mult: bool = False):
        self.op = op
        self.range_updates = range_updates
        self.stats = stats if stats is not None else Counter()
        merged: dict = {}
        for item in points:
            if _with_mult:
                coords, w, c = item
            else:
                coords, w = item
                c = 1
            coords = tuple(coords)
            if coords in merged:
                mw, mc = merged[coords]
                merged[coords] = (op.combine(mw, w), mc + c)
            else:
                merged[coords] = (w, c)
        if not merged:
            raise EmptyPointSet("cannot build a range tree over zero points")
        dims = {len(c) for c in merged}
        if len(dims) != 1:
            raise ValueError("points have differing dimension counts")
        self.d = dims.pop()
        if self.d < 1:
            raise ValueError("points need at least one coordinate")
        if range_updates:
            if self.d >= 2 and op.name != "SUM":
                raise UnsupportedCombination(
                    f"range updates with {op.name} are only supported in one dimension")
            if op.name not in ("SUM", "MIN", "MAX") or op.mode != "int":
                raise UnsupportedCombination(f"range updates (add) are not supported for {op.name}")
        self.keys = sorted(merged, key=lambda t: (t[-1], t))
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.weights = [merged[k][0] for k in self.keys]
        self.mult = [merged[k][1] for k in self.keys]
        xs, buckets = [], []
        for i, k in enumerate(self.keys):
            if not xs or xs[-1] != k[-1]:
                xs.append(k[-1])
                buckets.append([])
            buckets[-1].append(i)
        self.xs = xs
        self._buckets = buckets
        self.root = self._build(0, len(xs))
        del self._buckets

    # -- construction -------------------------------------------------------

    def _build(self, i: int, j: int) -> RangeTreeNode:
        node = RangeTreeNode(self.xs[i], self.xs[j - 1])
        self.stats["nodes"] += 1
        if j - i > 1:
            mid = (i + j + 1) // 2
            node.left = self._build(i, mid)
            node.right = self._build(mid, j)
        if self.d == 1:
            if node.left is None:
                pid = self._buckets[i][0]
                node.qagg = self.weights[pid]
                node.cnt = self.mult[pid]
            else:
                node.qagg = self.op.combine(node.left.qagg, node.right.qagg)
                node.cnt = node.left.cnt + node.right.cnt
            return node
        ids = [pid for b in self._buckets[i:j] for pid in b]
        node.ids = ids
        groups: dict = {}
        for pid in ids:
            groups.setdefault(self.keys[pid][:-1], []).append(pid)
        node.groups = groups
        projected = [(self.keys[pid][:-1], self.weights[pid], self.mult[pid]) for pid in ids]
        node.inner = RangeTree(projected, self.op, self.range_updates, self.stats, _with_mult=True)
        if self.range_updates:
            zeros = [(p, 0, c) for p, _, c in projected]
            node.full = RangeTree(zeros, self.op, True, self.stats, _with_mult=True)
            node.pending = []
        return node

    # -- helpers ------------------------------------------------------------

    def _bump(self, x, u, cnt):
        """Value of an aggregate after adding ``u`` to each original point below it."""
        if self.op.name == "SUM":
            return check_int64(x + u * cnt)
        if x == self.op.neutral:
            return x
        return check_int64(x + u)

    def _lookup(self, coords) -> int:
        try:
            return self.index[tuple(coords)]
        except KeyError:
            raise UnknownPoint(f"no point at {tuple(coords)}") from None

    def _path(self, x) -> list[RangeTreeNode]:
        node, path = self.root, []
        while node is not None:
            path.append(node)
            if node.left is None:
                break
            node = node.left if x <= node.left.hi else node.right
        return path

    @property
    def n(self) -> int:
        return len(self.keys)

    # -- canonical decomposition --------------------------------------------

    def canonical_nodes(self, lo, hi) -> list[RangeTreeNode]:
        """Disjoint nodes exactly covering the keys of the outer level in [lo, hi]."""
        out: list[RangeTreeNode] = []
        if lo > hi:
            raise InvalidBox(f"lower bound {lo} exceeds upper bound {hi}")
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.hi < lo or node.lo > hi:
                continue
            if lo <= node.lo and node.hi <= hi:
                out.append(node)
            else:
                stack.append(node.right)
                stack.append(node.left)
        return out

    # -- queries ------------------------------------------------------------

    def query(self, lo: Sequence[int], hi: Sequence[int]):
        """Fold of the weights of all points inside the closed box."""
        lo, hi = normalize_box(lo, hi, self.d)
        return self._query(lo, hi)

    def _query(self, lo, hi):
        if self.d == 1:
            return self._query1(self.root, lo[0], hi[0], 0)
        return self._queryd(self.root, lo, hi, ())

    def _query1(self, node, a, b, acc):
        st = self.stats
        st["steps"] += 1
        if node.hi < a or node.lo > b:
            return self.op.neutral
        if a <= node.lo and node.hi <= b:
            st["visited"] += 1
            return self._bump(node.qagg, acc, node.cnt) if acc else node.qagg
        acc += node.uagg
        return self.op.combine(self._query1(node.left, a, b, acc),
                               self._query1(node.right, a, b, acc))

    def _queryd(self, node, lo, hi, pend):
        st = self.stats
        st["steps"] += 1
        x0, x1 = lo[-1], hi[-1]
        if node.hi < x0 or node.lo > x1:
            return self.op.neutral
        ilo, ihi = lo[:-1], hi[:-1]
        if x0 <= node.lo and node.hi <= x1:
            st["visited"] += 1
            res = node.inner._query(ilo, ihi)
            if self.range_updates:
                res = check_int64(res + node.full._query(ilo, ihi))
                for rlo, rhi, u in pend:
                    qlo = tuple(map(max, rlo, ilo))
                    qhi = tuple(map(min, rhi, ihi))
                    if all(a <= b for a, b in zip(qlo, qhi)):
                        st["pending_evals"] += 1
                        res = check_int64(res + u * node.inner._count(qlo, qhi))
            return res
        if node.pending:
            pend = pend + tuple(node.pending)
        return self.op.combine(self._queryd(node.left, lo, hi, pend),
                               self._queryd(node.right, lo, hi, pend))

    def count(self, lo: Sequence[int], hi: Sequence[int]) -> int:
        """Number of original (pre-merge) points inside the box."""
        lo, hi = normalize_box(lo, hi, self.d)
        return self._count(lo, hi)

    def _count(self, lo, hi) -> int:
        total = 0
        for node in self.canonical_nodes(lo[-1], hi[-1]):
            if self.d == 1:
                total += node.cnt
            else:
                total += node.inner._count(lo[:-1], hi[:-1])
        return total

    def weight_of(self, coords):
        """Current weight of the merged point at ``coords``."""
        self._lookup(coords)
        return self._query(tuple(coords), tuple(coords))

    # -- point updates ------------------------------------------------------

    def point_update(self, coords: Sequence[int], new_weight) -> None:
        """Set the (merged) point's weight; assigning ``op.neutral`` deletes it logically."""
        pid = self._lookup(coords)
        if self.range_updates and self.d >= 2:
            delta = check_int64(new_weight - self._query(self.keys[pid], self.keys[pid]))
            self._add(pid, delta)
        else:
            self._set(pid, new_weight)

    def _set(self, pid: int, w) -> None:
        self.weights[pid] = w
        key = self.keys[pid]
        path = self._path(key[-1])
        self.stats["update_steps"] += len(path)
        if self.d == 1:
            if self.range_updates:
                for node in path[:-1]:
                    if node.uagg:
                        for ch in (node.left, node.right):
                            ch.qagg = self._bump(ch.qagg, node.uagg, ch.cnt)
                            if ch.left is not None:
                                ch.uagg += node.uagg
                        node.uagg = 0
            path[-1].qagg = w
            f = self.op.combine
            for node in reversed(path[:-1]):
                node.qagg = f(node.left.qagg, node.right.qagg)
            return
        proj = key[:-1]
        for node in path:
            merged = fold(self.op, (self.weights[g] for g in node.groups[proj]))
            node.inner._set(node.inner.index[proj], merged)

    def _add(self, pid: int, delta) -> None:
        """SUM-only: add ``delta`` to the merged point's weight."""
        key = self.keys[pid]
        path = self._path(key[-1])
        self.stats["update_steps"] += len(path)
        if self.d == 1:
            for node in path:
                node.qagg = check_int64(node.qagg + delta)
            return
        proj = key[:-1]
        for node in path:
            node.inner._add(node.inner.index[proj], delta)

    # -- range updates ------------------------------------------------------

    def range_update(self, lo: Sequence[int], hi: Sequence[int], u) -> None:
        """Increase the weight of every original point inside the box by ``u``."""
        if not self.range_updates:
            raise UnsupportedCombination("tree was built without range-update support")
        lo, hi = normalize_box(lo, hi, self.d)
        if self.d == 1:
            self._radd1(self.root, lo[0], hi[0], u)
        else:
            self._raddd(self.root, lo, hi, u)

    def _radd1(self, node, a, b, u) -> None:
        self.stats["update_steps"] += 1
        if node.hi < a or node.lo > b:
            return
        if a <= node.lo and node.hi <= b:
            node.qagg = self._bump(node.qagg, u, node.cnt)
            if node.left is not None:
                node.uagg = check_int64(node.uagg + u)
            return
        self._radd1(node.left, a, b, u)
        self._radd1(node.right, a, b, u)
        node.qagg = self.op.combine(node.left.qagg, node.right.qagg)
        if node.uagg:
            node.qagg = self._bump(node.qagg, node.uagg, node.cnt)

    def _push(self, node) -> None:
        for rlo, rhi, u in node.pending:
            for ch in (node.left, node.right):
                ch.full._radd_inner(rlo, rhi, u)
                if ch.left is not None:
                    ch.pending.append((rlo, rhi, u))
        self.stats["pushed_records"] += len(node.pending)
        node.pending = []

    def _radd_inner(self, lo, hi, u) -> None:
        if self.d == 1:
            self._radd1(self.root, lo[0], hi[0], u)
        else:
            self._raddd(self.root, lo, hi, u)

    def _raddd(self, node, lo, hi, u) -> list[int]:
        """Returns the point ids covered below ``node`` (for the ancestors' T2)."""
        self.stats["update_steps"] += 1
        x0, x1 = lo[-1], hi[-1]
        if node.hi < x0 or node.lo > x1:
            return []
        ilo, ihi = lo[:-1], hi[:-1]
        if x0 <= node.lo and node.hi <= x1:
            node.full._radd_inner(ilo, ihi, u)
            if node.left is not None:
                node.pending.append((ilo, ihi, u))
            keys = self.keys
            return [pid for pid in node.ids
                    if all(a <= c <= b for a, c, b in zip(ilo, keys[pid], ihi))]
        if node.pending:
            self._push(node)
        hit = self._raddd(node.left, lo, hi, u) + self._raddd(node.right, lo, hi, u)
        inner = node.inner
        for pid in hit:
            inner._add(inner.index[self.keys[pid][:-1]], u * self.mult[pid])
        return hit


def build(ps: PointSet | Iterable, op: AggregateOp, range_updates_enabled: bool = False,
          stats: Optional[Counter] = None) -> RangeTree:
    points = ps.points if isinstance(ps, PointSet) else list(ps)
    return RangeTree(points, op, range_updates_enabled, stats)


def canonical_decomposition(tree: RangeTree, lo, hi) -> list[RangeTreeNode]:
    return tree.canonical_nodes(lo, hi)


# -- fractional cascading -----------------------------------------------------


class _SparseTable:
    """O(1) range min/max over a fixed array after O(n log n) preprocessing."""

    __slots__ = ("levels", "pick")

    def __init__(self, values: list, pick):
        self.pick = pick
        self.levels = [values]
        k = 1
        while 2 * k <= len(values):
            prev = self.levels[-1]
            self.levels.append([pick(prev[i], prev[i + k]) for i in range(len(prev) - k)])
            k *= 2

    def query(self, i: int, j: int):
        """Aggregate of values[i:j], j > i."""
        lvl = (j - i).bit_length() - 1
        row = self.levels[lvl]
        return self.pick(row[i], row[j - (1 << lvl)])


class CascadeNode:
    __slots__ = ("lo", "hi", "left", "right", "xs", "ids", "pagg", "table", "to_left")

    def __init__(self, lo, hi):
        self.lo = lo
        self.hi = hi
        self.left = self.right = None
        self.table = None
        self.pagg = None


class CascadeIndex2D:
    """Static 2D range aggregation with one binary search per query.

    The outer tree is keyed by the second coordinate. Each node keeps its
    points sorted by (first coordinate, point id), prefix aggregates for
    invertible ops, a sparse table for MIN/MAX, and ``to_left[i]``: how many
    of its first ``i`` points came from the left child. That count is the
    cascade link: a position in the parent maps to positions in both
    children in O(1).
    """

    def __init__(self, points: Iterable, op: AggregateOp, stats: Optional[Counter] = None):
        self.op = op
        self.stats = stats if stats is not None else Counter()
        merged: dict = {}
        for coords, w in points:
            coords = tuple(coords)
            if len(coords) != 2:
                raise ValueError("fractional cascading index needs 2D points")
            merged[coords] = op.combine(merged[coords], w) if coords in merged else w
        if not merged:
            raise EmptyPointSet("cannot build a cascade index over zero points")
        if op.name == "PRODUCT" and any(w == 0 for w in merged.values()):
            raise ZeroInProductCube("PRODUCT prefix aggregates need nonzero weights")
        if op.name not in ("MIN", "MAX") and not op.invertible:
            raise UnsupportedCombination(f"{op.name} needs an inverse or a min/max table")
        # point ids follow (x, y) order so ties on x resolve by id deterministically
        self.keys = sorted(merged)
        self.weights = [merged[k] for k in self.keys]
        self.ys = sorted({k[1] for k in self.keys})
        by_y: dict = {}
        for pid, k in enumerate(self.keys):
            by_y.setdefault(k[1], []).append(pid)
        self._by_y = by_y
        self.root = self._build(0, len(self.ys))
        del self._by_y

    def _build(self, i: int, j: int) -> CascadeNode:
        node = CascadeNode(self.ys[i], self.ys[j - 1])
        self.stats["nodes"] += 1
        if j - i == 1:
            ids = list(self._by_y[self.ys[i]])
        else:
            mid = (i + j + 1) // 2
            node.left = self._build(i, mid)
            node.right = self._build(mid, j)
            a, b = node.left.ids, node.right.ids
            ids, to_left = [], [0]
            p = q = 0
            while p < len(a) or q < len(b):
                if q == len(b) or (p < len(a) and a[p] < b[q]):
                    ids.append(a[p])
                    p += 1
                else:
                    ids.append(b[q])
                    q += 1
                to_left.append(p)
            node.to_left = to_left
        node.ids = ids
        node.xs = [self.keys[pid][0] for pid in ids]
        ws = [self.weights[pid] for pid in ids]
        op = self.op
        if op.name in ("MIN", "MAX"):
            node.table = _SparseTable(ws, op.combine)
        else:
            pagg = [op.neutral]
            for w in ws:
                pagg.append(op.combine(pagg[-1], w))
            node.pagg = pagg
        return node

    def _range_value(self, node: CascadeNode, u: int, v: int):
        if u >= v:
            return self.op.neutral
        if node.table is not None:
            return node.table.query(u, v)
        return self.op.combine(node.pagg[v], self.op.inverse(node.pagg[u]))

    def query(self, lo: Sequence[int], hi: Sequence[int]):
        (xa, ya), (xb, yb) = normalize_box(lo, hi, 2)
        st = self.stats
        root = self.root
        st["binary_searches"] += 1
        u = bisect_left(root.xs, xa)
        v = bisect_right(root.xs, xb)
        res = self.op.neutral
        f = self.op.combine
        stack = [(root, u, v)]
        while stack:
            node, u, v = stack.pop()
            st["visited"] += 1
            if node.hi < ya or node.lo > yb or u >= v:
                continue
            if ya <= node.lo and node.hi <= yb:
                res = f(res, self._range_value(node, u, v))
                continue
            tl = node.to_left
            lu, lv = tl[u], tl[v]
            stack.append((node.right, u - lu, v - lv))
            stack.append((node.left, lu, lv))
        return res


def fc_build(ps: PointSet | Iterable, op: AggregateOp, stats: Optional[Counter] = None) -> CascadeIndex2D:
    points = ps.points if isinstance(ps, PointSet) else list(ps)
    return CascadeIndex2D(points, op, stats)


def fc_range_query(ix: CascadeIndex2D, lo: Sequence[int], hi: Sequence[int]):
    return ix.query(lo, hi)


def parse_points_csv(lines: Sequence[str]) -> PointSet:
    """``x1,...,xd,w`` per line, no header."""
    rows = []
    for t, ln in enumerate(lines, 1):
        if not ln.strip():
            continue
        try:
            rows.append([int(v) for v in ln.split(",")])
        except ValueError:
            raise InputError(f"points line {t}: expected integers 'x1,...,xd,w'") from None
        if len(rows[-1]) < 2:
            raise InputError(f"points line {t}: need at least one coordinate and a weight")
    try:
        return PointSet.from_rows(rows)
    except ValueError as e:
        raise InputError(str(e)) from None

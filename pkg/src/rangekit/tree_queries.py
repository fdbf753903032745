"""Subtree and distance-band aggregates on a weighted rooted tree.

A preorder walk gives every vertex a DFS number; a subtree becomes the
interval [DFSnum(i), DFSmax(i)]. Mapping vertex p to the point
(DFSnum(p), droot(p)) turns "p below i with d1 <= dist(i, p) <= d2" into a
2D box query, answered by :class:`~rangekit.range_tree.CascadeIndex2D`.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .agg import INT64_MAX, AggregateOp
from .errors import CycleDetected, DisconnectedVertex, InvalidBox, TreeError, UnknownVertex
from .range_tree import CascadeIndex2D

UNBOUNDED = INT64_MAX


@dataclass
class RootedTree:
    """Vertices are 1..n. ``edges`` holds (parent, child, length) in input order."""

    n: int
    root: int
    edges: list
    weights: list
    children: dict = field(init=False, repr=False)
    parent: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise TreeError("a tree needs at least one vertex")
        if len(self.weights) != self.n:
            raise TreeError(f"expected {self.n} weights, got {len(self.weights)}")
        if not 1 <= self.root <= self.n:
            raise UnknownVertex(f"root {self.root} outside 1..{self.n}")
        self.children = {v: [] for v in range(1, self.n + 1)}
        self.parent = {}
        for p, c, ln in self.edges:
            for v in (p, c):
                if not 1 <= v <= self.n:
                    raise UnknownVertex(f"vertex {v} outside 1..{self.n}")
            if ln < 0:
                raise TreeError(f"edge ({p}, {c}) has negative length {ln}")
            if c == self.root or c in self.parent:
                raise CycleDetected(f"vertex {c} has more than one parent (or is the root)")
            self.parent[c] = (p, ln)
            self.children[p].append((c, ln))


@dataclass
class FlatTree:
    dfsnum: list  # index 0 unused
    dfsmax: list
    droot: list


def dfs_flatten(t: RootedTree) -> FlatTree:
    n = t.n
    dfsnum = [0] * (n + 1)
    dfsmax = [0] * (n + 1)
    droot = [0] * (n + 1)
    counter = 0
    # (vertex, next child index); children pushed lazily to keep input order
    stack = [(t.root, 0)]
    counter += 1
    dfsnum[t.root] = counter
    while stack:
        v, k = stack[-1]
        kids = t.children[v]
        if k < len(kids):
            stack[-1] = (v, k + 1)
            c, ln = kids[k]
            if dfsnum[c]:
                raise CycleDetected(f"vertex {c} reached twice")
            counter += 1
            dfsnum[c] = counter
            droot[c] = droot[v] + ln
            stack.append((c, 0))
        else:
            dfsmax[v] = counter
            stack.pop()
    if counter != n:
        missing = next(v for v in range(1, n + 1) if not dfsnum[v])
        seen, v = set(), missing
        while v in t.parent and v not in seen:
            seen.add(v)
            v = t.parent[v][0]
        if v in seen:
            raise CycleDetected(f"vertex {missing} hangs off a parent cycle through {v}")
        raise DisconnectedVertex(f"vertex {missing} is not reachable from root {t.root}")
    return FlatTree(dfsnum, dfsmax, droot)


@dataclass
class SubtreeIndex:
    tree: RootedTree
    flat: FlatTree
    index: CascadeIndex2D


def build_subtree_index(t: RootedTree, op: AggregateOp, stats: Optional[Counter] = None) -> SubtreeIndex:
    flat = dfs_flatten(t)
    pts = [((flat.dfsnum[v], flat.droot[v]), t.weights[v - 1]) for v in range(1, t.n + 1)]
    return SubtreeIndex(t, flat, CascadeIndex2D(pts, op, stats))


def subtree_dist_query(ix: SubtreeIndex, i: int, d1: int, d2: int = UNBOUNDED):
    """Fold of w(p) over p in subtree(i) with d1 <= dist(i, p) <= d2.

    ``d2`` of -1 or :data:`UNBOUNDED` lifts the upper limit.
    """
    flat = ix.flat
    if not 1 <= i <= ix.tree.n:
        raise UnknownVertex(f"vertex {i} outside 1..{ix.tree.n}")
    if d2 == -1:
        d2 = UNBOUNDED
    if d1 < 0 or d1 > d2:
        raise InvalidBox(f"need 0 <= d1 <= d2, got d1={d1}, d2={d2}")
    base = flat.droot[i]
    hi_y = UNBOUNDED if d2 >= UNBOUNDED - base else base + d2
    return ix.index.query((flat.dfsnum[i], base + d1), (flat.dfsmax[i], hi_y))


def parse_tree(lines: Sequence[str]) -> RootedTree:
    rows = [ln.split() for ln in lines if ln.strip()]
    if not rows:
        raise TreeError("empty tree file")
    n, root = int(rows[0][0]), int(rows[0][1])
    edges = [tuple(int(v) for v in r) for r in rows[1:n]]
    if len(rows) != n + 1 or any(len(e) != 3 for e in edges):
        raise TreeError(f"expected header, {n - 1} edge lines and one weight line")
    weights = [int(v) for v in rows[n]]
    return RootedTree(n, root, edges, weights)

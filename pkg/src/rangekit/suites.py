"""Seeded differential checks: every fast path against its oracle on random inputs.

Each suite takes a ``random.Random`` and a size scale, raises
:class:`Mismatch` on the first disagreement and returns how many
comparisons it made. ``selftest`` runs them at a small scale.
"""
from __future__ import annotations

import random
from collections import Counter
from itertools import product
from typing import Callable

from . import oracles
from .agg import MAX, MIN, PRODUCT, SUM, XOR
from .kth_selection import SequenceOracle, select
from .median import MedianCube, l1_median
from .prefix_cube import (DenseCube, RangeStamp, batched_range_updates, build_prefix_naive,
                          build_prefix_sweep, range_query)
from .range_tree import CascadeIndex2D, RangeTree
from .rotating_stack import run_rotstack
from .sequence_editor import default_group_size, run_script
from .stations import StationLine, compute_efforts, min_collapse_effort
from .sweep_select import solve_offline
from .tree_queries import RootedTree, build_subtree_index, subtree_dist_query


class Mismatch(AssertionError):
    pass


def _expect(got, want, what: str) -> None:
    if got != want:
        raise Mismatch(f"{what}: got {got!r}, expected {want!r}")


# -- generators --------------------------------------------------------------------

def random_cube(rng: random.Random, m, op) -> DenseCube:
    if op is PRODUCT:
        # mostly units: the naive builder multiplies up to 8 prefixes before
        # dividing, so the whole-cube product is kept at or below 2^6
        cells = [rng.choice([-1, 1]) for _ in range(_np(m))]
        for t in rng.sample(range(len(cells)), min(len(cells), 6)):
            cells[t] *= 2
    else:
        cells = [rng.randint(-20, 20) for _ in range(_np(m))]
    return DenseCube(tuple(m), cells, op)


def _np(m) -> int:
    out = 1
    for x in m:
        out *= x
    return out


def random_box(rng: random.Random, m):
    lo = [rng.randint(1, x) for x in m]
    hi = [rng.randint(a, x) for a, x in zip(lo, m)]
    return tuple(lo), tuple(hi)


def random_tree(rng: random.Random, n: int, max_len: int = 5) -> RootedTree:
    root = rng.randint(1, n)
    order = [root] + rng.sample([v for v in range(1, n + 1) if v != root], n - 1)
    edges = [(order[rng.randrange(t)], order[t], rng.randint(0, max_len)) for t in range(1, n)]
    rng.shuffle(edges)
    return RootedTree(n, root, edges, [rng.randint(-50, 50) for _ in range(n)])


def random_stations(rng: random.Random, n: int) -> StationLine:
    s = [rng.randint(1, 10) for _ in range(n)]
    r = [x + rng.randint(1, 20) for x in s]
    return StationLine(s, r, [rng.randint(0, 50) for _ in range(n)])


def random_sequences(rng: random.Random, n: int, max_b: int) -> list[list[int]]:
    span = rng.choice([2, 4, 50])
    return [sorted(rng.sample(range(span * max_b), rng.randint(1, max_b))) for _ in range(n)]


def random_edit_script(rng: random.Random, n0: int, m: int):
    init = [rng.randint(-99, 99) for _ in range(n0)]
    n, ops = n0, []
    for _ in range(m):
        kind = rng.choice("RCIQ") if n else "I"
        if kind == "R":
            i = rng.randint(1, n)
            ops.append(("R", i, rng.randint(i, n)))
        elif kind == "C":
            i = rng.randint(1, n)
            j = rng.randint(i, n)
            rest = n - (j - i + 1)
            p = -1 if rng.random() < 0.25 else rng.randint(0, rest)
            ops.append(("C", i, j, p))
            if p == -1:
                n = rest
        elif kind == "I":
            k = rng.randint(1, 4)
            ops.append(("I", rng.randint(0, n), [rng.randint(-99, 99) for _ in range(k)]))
            n += k
        else:
            ops.append(("Q", rng.randint(1, n)))
    return init, ops


def random_stack_script(rng: random.Random, m: int):
    p_push = rng.random()
    return [("P", rng.randint(0, 999)) if rng.random() < p_push else ("ROT",) for _ in range(m)]


def random_sweep(rng: random.Random, n: int, m: int, c: int):
    pts = [(rng.randint(-c, c), rng.randint(0, c)) for _ in range(n)]
    qs = [(rng.randint(-c, c), rng.randint(1, max(1, n // 2))) for _ in range(m)]
    return pts, qs


# -- suites ------------------------------------------------------------------------------

def suite_prefix(rng: random.Random, scale: int = 1) -> int:
    checks = 0
    for _ in range(10 * scale):
        d = rng.randint(1, 4)
        m = [rng.randint(1, 6 if d < 4 else 4) for _ in range(d)]
        op = rng.choice([SUM, XOR, PRODUCT])
        cube = random_cube(rng, m, op)
        ps = build_prefix_sweep(cube)
        _expect(build_prefix_naive(cube).cells, ps.cells, f"prefix builders {op.name} {m}")
        cells = dict(zip(cube.indices(), cube.cells))
        for _ in range(5):
            lo, hi = random_box(rng, m)
            _expect(range_query(ps, lo, hi), oracles.naive_cube_box(cells, op, lo, hi), "box query")
            checks += 1
    return checks


def suite_stamps(rng: random.Random, scale: int = 1) -> int:
    checks = 0
    for _ in range(3 * scale):
        m = (rng.randint(1, 6), rng.randint(1, 6), rng.randint(1, 6))
        op = rng.choice([SUM, XOR])
        stamps = [RangeStamp(*random_box(rng, m), rng.randint(-9, 9)) for _ in range(20)]
        got = batched_range_updates(m, stamps, op)
        want = oracles.naive_stamps(m, stamps, op)
        _expect(got.cells, [want[c] for c in got.indices()], f"batched stamps {op.name}")
        checks += 1
    return checks


def suite_range_tree(rng: random.Random, scale: int = 1) -> int:
    checks = 0
    for _ in range(2 * scale):
        d = rng.randint(1, 3)
        op = rng.choice([SUM, MIN, MAX, XOR])
        ranged = op is SUM or (d == 1 and op is not XOR)
        pts = [[tuple(rng.randint(1, 8) for _ in range(d)), rng.randint(-50, 50)]
               for _ in range(rng.randint(1, 40))]
        tree = RangeTree([tuple(p) for p in pts], op, ranged)
        for _ in range(100):
            lo = tuple(rng.randint(0, 9) for _ in range(d))
            hi = tuple(rng.randint(a, 9) for a in lo)
            r = rng.random()
            if r < 0.3:
                c = rng.choice(pts)[0]
                w = rng.randint(-50, 50)
                group = [p for p in pts if p[0] == c]
                for p in group:
                    p[1] = op.neutral
                group[0][1] = w
                tree.point_update(c, w)
            elif r < 0.5 and ranged:
                u = rng.randint(-5, 5)
                tree.range_update(lo, hi, u)
                for p in pts:
                    if oracles.in_box(p[0], lo, hi) and (op is SUM or p[1] != op.neutral):
                        p[1] += u
            else:
                _expect(tree.query(lo, hi), oracles.naive_range_agg(pts, op, lo, hi),
                        f"range tree d={d} {op.name}")
                checks += 1
    return checks


def suite_cascade(rng: random.Random, scale: int = 1) -> int:
    checks = 0
    for _ in range(scale):
        op = rng.choice([SUM, MIN, MAX, XOR])
        pts = [((rng.randint(1, 30), rng.randint(1, 30)), rng.randint(-50, 50)) for _ in range(60)]
        st = Counter()
        ix = CascadeIndex2D(pts, op, st)
        tree = RangeTree(pts, op)
        for _ in range(50):
            lo = (rng.randint(0, 31), rng.randint(0, 31))
            hi = (rng.randint(lo[0], 31), rng.randint(lo[1], 31))
            before = st["binary_searches"]
            _expect(ix.query(lo, hi), tree.query(lo, hi), f"cascade {op.name}")
            _expect(st["binary_searches"] - before, 1, "binary searches per query")
            checks += 1
    return checks


def suite_subtree(rng: random.Random, scale: int = 1) -> int:
    checks = 0
    for _ in range(scale):
        t = random_tree(rng, rng.randint(1, 60))
        for op in (SUM, MIN, XOR):
            ix = build_subtree_index(t, op)
            for _ in range(20):
                i = rng.randint(1, t.n)
                d1 = rng.randint(0, 10)
                d2 = -1 if rng.random() < 0.1 else rng.randint(d1, 20)
                want = oracles.naive_subtree_query(t.n, t.root, t.edges, t.weights, op, i, d1,
                                                   None if d2 == -1 else d2)
                _expect(subtree_dist_query(ix, i, d1, d2), want, f"subtree {op.name}")
                checks += 1
    return checks


def suite_stations(rng: random.Random, scale: int = 1) -> int:
    checks = 0
    for _ in range(10 * scale):
        line = random_stations(rng, rng.randint(1, 12))
        _expect(compute_efforts(line, method="batched"), compute_efforts(line), "effort paths")
        effort, start = min_collapse_effort(line)
        best, starts = oracles.exhaustive_min_effort(line.s, line.r, line.c)
        _expect(effort, best, "min effort")
        if start not in starts:
            raise Mismatch(f"start {start} not among optimal first stations {starts}")
        checks += 1
    return checks


def suite_kth(rng: random.Random, scale: int = 1) -> int:
    checks = 0
    for _ in range(5 * scale):
        seqs = random_sequences(rng, rng.randint(1, 8), 64)
        total = sum(map(len, seqs))
        for k in {1, total, rng.randint(1, total)}:
            o = SequenceOracle(seqs)
            got, _ = select(o, k)
            _expect(got, oracles.merge_kth(seqs, k), "kth of sequences")
            _expect(len(o.probe_log), o.query_counter, "duplicate probes")
            checks += 1
    return checks


def suite_median(rng: random.Random, scale: int = 1) -> int:
    checks = 0
    for _ in range(20 * scale):
        xs = [rng.randint(-30, 30) for _ in range(rng.randint(1, 25))]
        loc, _ = l1_median(xs)
        _expect(oracles.l1_cost(xs, loc), min(oracles.l1_cost(xs, c) for c in xs), "l1 median")
        checks += 1
    for _ in range(scale):
        m = (rng.randint(1, 6), rng.randint(1, 6))
        coords = [sorted(rng.randint(-10, 20) for _ in range(x)) for x in m]
        cells = {c: rng.randint(0, 5) for c in product(range(1, m[0] + 1), range(1, m[1] + 1))}
        mc = MedianCube(coords, [cells[c] for c in sorted(cells)])
        for _ in range(30):
            lo, hi = random_box(rng, m)
            if rng.random() < 0.3:
                u = rng.randint(0, 3)
                mc.range_update(lo, hi, u)
                for c in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
                    cells[c] += u
            elif sum(cells[c] for c in product(*(range(a, b + 1) for a, b in zip(lo, hi)))):
                _expect(mc.query(lo, hi), oracles.naive_median_cube(coords, cells, lo, hi), "median cube")
                checks += 1
    return checks


def suite_seqedit(rng: random.Random, scale: int = 1) -> int:
    checks = 0
    for _ in range(20 * scale):
        init, ops = random_edit_script(rng, rng.randint(0, 32), rng.randint(0, 48))
        want = oracles.naive_seq_sim(init, ops)
        for z in (None, 1, default_group_size(len(init), len(ops)), max(1, len(ops))):
            got = run_script(init, ops, z)
            _expect(tuple(got), tuple(want), f"sequence editor z={z}")
            checks += 1
    return checks


def suite_rotstack(rng: random.Random, scale: int = 1) -> int:
    checks = 0
    for _ in range(20 * scale):
        m = rng.randint(0, 200)
        k = rng.randint(1, 8)
        script = random_stack_script(rng, m)
        _expect(run_rotstack(k, m, script), oracles.naive_stack(k, script), "rotating stack")
        checks += 1
    return checks


def suite_sweep(rng: random.Random, scale: int = 1) -> int:
    checks = 0
    for _ in range(scale):
        pts, qs = random_sweep(rng, 40, 40, rng.choice([10, 1000]))
        res = solve_offline(pts, qs)
        for j, (xq, k) in enumerate(qs):
            try:
                want = oracles.naive_kth_distance_sq(pts, xq, k, j)
            except Exception:
                if j not in res.errors:
                    raise Mismatch(f"query {j} should exceed the eligible count") from None
                continue
            _expect(res.squared[j], want, "sweep k-th distance")
            checks += 1
    return checks


SUITES: dict[str, Callable[[random.Random, int], int]] = {
    "prefix_cube": suite_prefix,
    "batched_updates": suite_stamps,
    "range_tree": suite_range_tree,
    "cascade": suite_cascade,
    "subtree": suite_subtree,
    "stations": suite_stations,
    "kth_selection": suite_kth,
    "median": suite_median,
    "sequence_editor": suite_seqedit,
    "rotating_stack": suite_rotstack,
    "sweep_select": suite_sweep,
}

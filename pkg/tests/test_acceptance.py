"""Acceptance criteria, one check per criterion at full scale.

Each check returns (ok, detail) and prints ``criterion N: PASS|FAIL - detail``.
Run ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
"""
import inspect
import io
import math
import random
import time
from collections import Counter
from fractions import Fraction
from itertools import product

import pytest

from rangekit import oracles
from rangekit.agg import MAX, MIN, PRODUCT, SUM, XOR
from rangekit.cli import main
from rangekit.kth_selection import SequenceOracle, select
from rangekit.median import MedianCube, l1_median, lsq_cost, weighted_lsq_point
from rangekit.prefix_cube import (RangeStamp, batched_range_updates, build_prefix_naive,
                                  build_prefix_sweep, range_query)
from rangekit.range_tree import CascadeIndex2D, RangeTree, fc_range_query
from rangekit.rotating_stack import RotStack
from rangekit.sequence_editor import GroupedEditor, IntervalList
from rangekit.stations import compute_efforts, min_collapse_effort
from rangekit.suites import (random_box, random_cube, random_edit_script, random_sequences,
                             random_stack_script, random_stations, random_sweep, random_tree)
from rangekit.sweep_select import solve_offline
from rangekit.tree_queries import build_subtree_index, subtree_dist_query


def c1_prefix_builders():
    rng = random.Random(101)
    cubes = 0
    for _ in range(120):
        d = rng.randint(1, 4)
        m = [rng.randint(1, 6) for _ in range(d)]
        op = rng.choice([SUM, XOR, PRODUCT])
        cube = random_cube(rng, m, op)
        if build_prefix_naive(cube).cells != build_prefix_sweep(cube).cells:
            return False, f"builders differ on {op.name} {m}"
        cubes += 1
    return True, f"{cubes} cubes, naive == sweep"


def c2_box_queries():
    rng = random.Random(102)
    boxes = 0
    for op in (SUM, XOR):
        cube = random_cube(rng, (4, 4, 4), op)
        ps = build_prefix_sweep(cube)
        cells = dict(zip(cube.indices(), cube.cells))
        spans = [(a, b) for a in range(1, 5) for b in range(a, 5)]
        for s in product(spans, repeat=3):
            lo, hi = tuple(a for a, _ in s), tuple(b for _, b in s)
            if range_query(ps, lo, hi) != oracles.naive_cube_box(cells, op, lo, hi):
                return False, f"{op.name} box {lo}-{hi}"
            boxes += 1
    return True, f"all {boxes} boxes of two 4x4x4 cubes"


def c3_batched_updates():
    rng = random.Random(103)
    m = (6, 6, 6)
    for t in range(60):
        op = SUM if t % 2 else XOR
        stamps = [RangeStamp(*random_box(rng, m), rng.randint(-30, 30)) for _ in range(rng.randint(1, 40))]
        c = Counter()
        got = batched_range_updates(m, stamps, op, c)
        want = oracles.naive_stamps(m, stamps, op)
        if got.cells != [want[x] for x in got.indices()]:
            return False, f"stamp set {t} ({op.name}) differs from per-cell application"
        expected = 0
        for s in stamps:
            expected += math.prod(1 + (h < 6) for h in s.hi)
        if c["stamped_corners"] != expected:
            return False, f"stamp set {t}: {c['stamped_corners']} corners, expected {expected}"
    return True, "60 stamp sets over 6x6x6, corner counts exact"


def c4_range_tree():
    rng = random.Random(104)
    ops_done = 0
    for d in (1, 2, 3):
        for op in (SUM, MIN, MAX, XOR):
            ranged = op is SUM or (d == 1 and op is not XOR)
            n = rng.randint(1, 256)
            span = max(2, round(n ** (1 / d)) + 2)
            pts = [[tuple(rng.randint(1, span) for _ in range(d)), rng.randint(-99, 99)] for _ in range(n)]
            tree = RangeTree([tuple(p) for p in pts], op, ranged)
            for _ in range(120):
                lo = tuple(rng.randint(0, span + 1) for _ in range(d))
                hi = tuple(rng.randint(a, span + 1) for a in lo)
                r = rng.random()
                if r < 0.3:
                    cc = rng.choice(pts)[0]
                    w = rng.randint(-99, 99)
                    group = [p for p in pts if p[0] == cc]
                    for p in group:
                        p[1] = op.neutral
                    group[0][1] = w
                    tree.point_update(cc, w)
                elif r < 0.55 and ranged:
                    u = rng.randint(-9, 9)
                    tree.range_update(lo, hi, u)
                    for p in pts:
                        if oracles.in_box(p[0], lo, hi) and (op is SUM or p[1] != op.neutral):
                            p[1] += u
                elif tree.query(lo, hi) != oracles.naive_range_agg(pts, op, lo, hi):
                    return False, f"d={d} {op.name} query {lo}-{hi}"
                ops_done += 1
    n = 1024
    bound = 4 * (math.ceil(math.log2(n)) + 1) ** 2
    st = Counter()
    pts = [((rng.randint(1, 10 ** 9), rng.randint(1, 10 ** 9)), 1) for _ in range(n)]
    tree = RangeTree(pts, SUM, stats=st)
    worst = 0
    for _ in range(500):
        lo = (rng.randint(1, 10 ** 9), rng.randint(1, 10 ** 9))
        hi = (rng.randint(lo[0], 10 ** 9), rng.randint(lo[1], 10 ** 9))
        before = st["visited"]
        tree.query(lo, hi)
        worst = max(worst, st["visited"] - before)
    if worst > bound:
        return False, f"visited {worst} > {bound}"
    return True, f"{ops_done} interleaved ops exact; max visited {worst} <= {bound} at n=1024, d=2"


def c5_fractional_cascading():
    rng = random.Random(105)
    boxes = 0
    for op in (SUM, MIN, MAX, XOR):
        pts = [((rng.randint(1, 200), rng.randint(1, 200)), rng.randint(-999, 999)) for _ in range(300)]
        st = Counter()
        ix = CascadeIndex2D(pts, op, st)
        tree = RangeTree(pts, op)
        if op in (MIN, MAX) and ix.root.table is None:
            return False, f"{op.name} index lacks its O(1) range table"
        for _ in range(150):
            lo = (rng.randint(0, 201), rng.randint(0, 201))
            hi = (rng.randint(lo[0], 201), rng.randint(lo[1], 201))
            before = st["binary_searches"]
            if fc_range_query(ix, lo, hi) != tree.query(lo, hi):
                return False, f"{op.name} box {lo}-{hi}"
            if st["binary_searches"] - before != 1:
                return False, "more than one binary search in a query"
            boxes += 1
    return True, f"{boxes} boxes (SUM/MIN/MAX/XOR), 1 binary search each"


def c6_subtree_queries():
    rng = random.Random(106)
    queries = 0
    for op in (SUM, MIN, XOR):
        for _ in range(3):
            t = random_tree(rng, rng.randint(1, 500))
            ix = build_subtree_index(t, op)
            for _ in range(120):
                i, d1 = rng.randint(1, t.n), rng.randint(0, 20)
                d2 = rng.choice([-1, rng.randint(d1, 60)])
                want = oracles.naive_subtree_query(t.n, t.root, t.edges, t.weights, op, i, d1,
                                                   None if d2 == -1 else d2)
                if subtree_dist_query(ix, i, d1, d2) != want:
                    return False, f"{op.name} query ({i}, {d1}, {d2})"
                queries += 1
    return True, f"{queries} queries exact for SUM/MIN/XOR"


def c7_station_collapse():
    rng = random.Random(107)
    for t in range(520):
        line = random_stations(rng, rng.randint(1, 18))
        if compute_efforts(line) != compute_efforts(line, method="batched"):
            return False, f"instance {t}: e computations disagree"
        effort, start = min_collapse_effort(line)
        best, starts = oracles.exhaustive_min_effort(line.s, line.r, line.c)
        if effort != best or start not in starts:
            return False, f"instance {t}: got ({effort}, {start}), optimum {best} from {starts}"
    return True, "520 instances (n <= 18) match exhaustive optimum; e paths agree"


def c8_kth_sequences():
    rng = random.Random(108)
    runs = 0
    for _ in range(520):
        seqs = random_sequences(rng, rng.randint(1, 8), 64)
        total = sum(map(len, seqs))
        for k in {1, total, rng.randint(1, total), rng.randint(1, total)}:
            o = SequenceOracle(seqs)
            got, state = select(o, k)
            if got != oracles.merge_kth(seqs, k):
                return False, f"wrong answer for k={k}"
            if len(o.probe_log) != o.query_counter:
                return False, "a position was probed twice"
            budget = 1 + len(seqs) * (math.ceil(math.log2(max(o.b))) + 1)
            if any(it["probes"] > budget for it in state.iterations):
                return False, f"iteration exceeded probe budget {budget}"
            runs += 1
    return True, f"{runs} runs on 520 instances; no duplicate probes; budget held"


def c9_median():
    rng = random.Random(109)
    for _ in range(1000):
        xs = [rng.randint(-10 ** 6, 10 ** 6) for _ in range(rng.randint(1, 40))]
        loc, _ = l1_median(xs)
        if oracles.l1_cost(xs, loc) != min(oracles.l1_cost(xs, c) for c in xs):
            return False, f"l1_median not optimal on {xs}"
    for _ in range(500):
        xs = [rng.uniform(-100, 100) for _ in range(rng.randint(1, 20))]
        ws = [rng.uniform(0.01, 10) for _ in xs]
        p = weighted_lsq_point(xs, ws)
        c = lsq_cost(xs, ws, p)
        if any(c > lsq_cost(xs, ws, p + e) * (1 + 1e-9) for e in (1e-6, -1e-6)):
            return False, "weighted_lsq_point beaten by a perturbation"
    boxes = 0
    while boxes < 520:
        coords = [sorted(rng.randint(-50, 50) for _ in range(8)) for _ in range(2)]
        cells = {c: rng.randint(0, 6) for c in product(range(1, 9), repeat=2)}
        mc = MedianCube(coords, [cells[c] for c in sorted(cells)])
        for _ in range(200):
            lo, hi = random_box(rng, (8, 8))
            box = list(product(*(range(a, b + 1) for a, b in zip(lo, hi))))
            r = rng.random()
            if r < 0.2:
                cc = rng.choice(box)
                delta = rng.randint(-cells[cc], 6)
                mc.point_update(cc, delta)
                cells[cc] += delta
            elif r < 0.35:
                u = rng.randint(0, 3)
                mc.range_update(lo, hi, u)
                for cc in box:
                    cells[cc] += u
            elif sum(cells[cc] for cc in box):
                if mc.query(lo, hi) != oracles.naive_median_cube(coords, cells, lo, hi):
                    return False, f"MedianCube box {lo}-{hi}"
                boxes += 1
    return True, f"1000 L1 multisets, 500 LSQ checks, {boxes} MedianCube boxes exact"


def _apply_len(n, op):
    if op[0] == "I":
        return n + len(op[2])
    if op[0] == "C" and op[3] == -1:
        return n - (op[2] - op[1] + 1)
    return n


def c10_sequence_editor():
    rng = random.Random(110)
    for t in range(10000):
        init, ops = random_edit_script(rng, rng.randint(0, 64), rng.randint(0, 128))
        want = oracles.naive_seq_sim(init, ops)
        m = len(ops)
        zs = [None, 1, math.ceil(math.sqrt(max(len(init), 1))), max(m, 1)]
        for z in zs:
            ed = IntervalList(init) if z is None else GroupedEditor(init, z)
            n, answers = len(init), []
            for op in ops:
                v = ed.apply(op)
                if v is not None:
                    answers.append(v)
                n = _apply_len(n, op)
                if len(ed) != n:
                    return False, f"script {t}, z={z}: length {len(ed)} != {n}"
            if (answers, ed.materialize()) != want:
                return False, f"script {t}, z={z}: differs from naive simulator"
    return True, "10000 scripts x {ungrouped, 1, ceil(sqrt n), m} match the naive simulator"


def c11_rotating_stack():
    rng = random.Random(111)
    for fn in (RotStack.push, RotStack.rotate):
        src = inspect.getsource(fn)
        if "for " in src or "while " in src:
            return False, f"{fn.__name__} contains a loop"
    worst = 0
    for t in range(10000):
        m = int(10 ** rng.uniform(0, 4))
        k = rng.randint(1, 8)
        script = random_stack_script(rng, m)
        st = RotStack(k, m)
        for op in script:
            before = st.steps
            if op[0] == "P":
                st.push(op[1])
            else:
                st.rotate()
            worst = max(worst, st.steps - before)
        if st.finish() != oracles.naive_stack(k, script):
            return False, f"script {t} (K={k}, M={m}) differs from naive stack"
    if worst > 2:
        return False, f"an op took {worst} steps"
    return True, f"10000 scripts exact; push/rotate loop-free, max {worst} steps per op"


def c12_sweep():
    rng = random.Random(112)
    runs = 20
    worst_rel = 0.0
    for t in range(runs):
        n = m = 200
        pts, qs = random_sweep(rng, n, m, rng.choice([50, 10 ** 4]))
        xs = [x for x, _ in pts] + [x for x, _ in qs]
        audits = sorted({Fraction(rng.randint(min(xs) * 97, max(xs) * 97), 97) for _ in range(120)})[:110]
        res = solve_offline(pts, qs, explicit_delete=bool(t % 2), audit_at=audits)
        if res.stats["audits"] < 100:
            return False, f"run {t}: only {res.stats['audits']} audits landed between events"
        if res.audit_failures:
            return False, f"run {t}: order audit failed at {res.audit_failures[0]}"
        if res.stats["swaps"] > n * (n - 1) // 2:
            return False, f"run {t}: {res.stats['swaps']} swap events"
        for j, (xq, k) in enumerate(qs):
            if j in res.errors:
                if k <= sum(x <= xq for x, _ in pts):
                    return False, f"run {t}: spurious rank error on query {j}"
                continue
            want = oracles.naive_kth_distance_sq(pts, xq, k, j)
            if res.squared[j] != want:
                return False, f"run {t}: query {j} squared distance differs"
            ref = math.sqrt(want)
            if ref:
                worst_rel = max(worst_rel, abs(res.answers[j] - ref) / ref)
    if worst_rel > 1e-12:
        return False, f"distance relative error {worst_rel}"
    return True, f"{runs} runs of 200 points x 200 queries exact; audits pass; swaps within n(n-1)/2"


def c13_cli():
    outs = []
    for _ in range(2):
        out, err = io.StringIO(), io.StringIO()
        code = main(["selftest", "--seed", "7"], out, err)
        if code != 0:
            return False, f"selftest exit {code}: {err.getvalue().strip()}"
        outs.append(out.getvalue())
    if outs[0] != outs[1]:
        return False, "selftest output differs between runs"
    return True, "selftest exit 0; two runs byte-identical"


CRITERIA = [c1_prefix_builders, c2_box_queries, c3_batched_updates, c4_range_tree,
            c5_fractional_cascading, c6_subtree_queries, c7_station_collapse, c8_kth_sequences,
            c9_median, c10_sequence_editor, c11_rotating_stack, c12_sweep, c13_cli]


def run_criterion(num: int):
    t0 = time.perf_counter()
    ok, detail = CRITERIA[num - 1]()
    secs = time.perf_counter() - t0
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail} ({secs:.1f}s)"
    return ok, line, secs


@pytest.mark.parametrize("num", range(1, len(CRITERIA) + 1))
def test_criterion(num, capsys):
    ok, line, secs = run_criterion(num)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert secs < 60, f"criterion {num} took {secs:.1f}s"


if __name__ == "__main__":
    for i in range(1, len(CRITERIA) + 1):
        print(run_criterion(i)[1], flush=True)

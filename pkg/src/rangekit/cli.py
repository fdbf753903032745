"""Command-line front end: one subcommand per solver, plus ``selftest`` and ``bench``.

Exit codes: 0 success, 1 input or domain error (reported per line on
stderr), 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import random
import sys
import time
from collections import Counter
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import oracles, suites
from .agg import get_op
from .errors import CapExceeded, InputError, RangeKitError
from .kth_selection import SequenceOracle, ShiftedOracle, parse_sequences, select
from .median import MedianCube, parse_median_cube
from .prefix_cube import (batched_range_updates, build_prefix_sweep, parse_box, parse_cube,
                          parse_stamps, range_query)
from .range_tree import CascadeIndex2D, RangeTree, parse_points_csv
from .rotating_stack import RotStack, parse_rotstack, run_rotstack
from .sequence_editor import parse_script, run_script
from .stations import min_collapse_effort, parse_stations
from .sweep_select import parse_points, parse_queries, solve_offline
from .tree_queries import build_subtree_index, parse_tree, subtree_dist_query

DOMAIN_ERRORS = (RangeKitError, ValueError, OverflowError, ArithmeticError)


class LineErrors:
    """Collects per-line failures; the command exits 1 if any were seen."""

    def __init__(self, err):
        self.err = err
        self.count = 0

    def report(self, where: str, e: Exception) -> None:
        self.count += 1
        print(f"error: {where}: {e}", file=self.err)


def _lines(path: Optional[str], what: str) -> list[str]:
    if path is None:
        raise InputError(f"missing --{what}")
    try:
        return Path(path).read_text().splitlines()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _numbered(lines: Sequence[str]):
    for t, ln in enumerate(lines, 1):
        r = ln.split()
        if r:
            yield t, r


def _ints(tokens: Sequence[str]) -> list[int]:
    try:
        return [int(v) for v in tokens]
    except ValueError:
        raise InputError(f"expected integers, got {' '.join(tokens)!r}") from None


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


# -- subcommands ----------------------------------------------------------------------
# each takes (args, errors) and returns the output lines

def cmd_cube_query(a, errs: LineErrors) -> list[str]:
    cube = parse_cube(_lines(a.input, "input"), get_op(a.agg))
    ps = build_prefix_sweep(cube)
    out = []
    for t, r in _numbered(_lines(a.queries, "queries")):
        try:
            lo, hi = parse_box(r, cube.d)
            out.append(_fmt(range_query(ps, lo, hi)))
        except DOMAIN_ERRORS as e:
            errs.report(f"query line {t}", e)
    return out


def cmd_cube_batch_update(a, errs: LineErrors) -> list[str]:
    op = get_op(a.agg)
    cube = parse_cube(_lines(a.input, "input"), op)
    stamps = parse_stamps(_lines(a.updates, "updates"), cube.d)
    res = batched_range_updates(cube.m, stamps, op, start=cube)
    row = cube.m[-1]
    out = [" ".join(map(str, (cube.d, *cube.m)))]
    for s in range(0, len(res.cells), row):
        out.append(" ".join(_fmt(v) for v in res.cells[s:s + row]))
    return out


def cmd_rtree_query(a, errs: LineErrors) -> list[str]:
    """Query lines: ``Q lo1 hi1 ... lod hid``, ``U x1 ... xd w`` or ``RU lo1 hi1 ... u``."""
    op = get_op(a.agg)
    ps = parse_points_csv(_lines(a.input, "input"))
    ops = list(_numbered(_lines(a.queries, "queries")))
    ranged = any(r[0].upper() == "RU" for _, r in ops)
    if a.fc:
        if ranged or any(r[0].upper() == "U" for _, r in ops):
            raise InputError("--fc answers static queries only")
        index = CascadeIndex2D(ps.points, op)
        ask = index.query
    else:
        tree = RangeTree(ps.points, op, ranged)
        ask = tree.query
    d = ps.d
    out = []
    for t, r in ops:
        kind, vals = r[0].upper(), r[1:]
        try:
            if kind.lstrip("-").isdigit():  # bare box line
                kind, vals = "Q", r
            if kind == "Q":
                out.append(_fmt(ask(*parse_box(vals, d))))
            elif kind == "U":
                v = _ints(vals)
                if len(v) != d + 1:
                    raise InputError(f"U needs {d} coordinates and a weight")
                tree.point_update(tuple(v[:-1]), v[-1])
            elif kind == "RU":
                v = _ints(vals)
                tree.range_update(*parse_box(vals[:-1], d), v[-1])
            else:
                raise InputError(f"unknown op {r[0]!r}")
        except DOMAIN_ERRORS as e:
            errs.report(f"query line {t}", e)
    return out


def cmd_tree_subtree(a, errs: LineErrors) -> list[str]:
    ix = build_subtree_index(parse_tree(_lines(a.input, "input")), get_op(a.agg))
    out = []
    for t, r in _numbered(_lines(a.queries, "queries")):
        try:
            v = _ints(r)
            if len(v) != 3:
                raise InputError("expected 'i d1 d2'")
            out.append(_fmt(subtree_dist_query(ix, *v)))
        except DOMAIN_ERRORS as e:
            errs.report(f"query line {t}", e)
    return out


def cmd_stations(a, errs: LineErrors) -> list[str]:
    effort, start = min_collapse_effort(parse_stations(_lines(a.input, "input")))
    return [f"{effort} {start}"]


def cmd_kth_seq(a, errs: LineErrors) -> list[str]:
    """Query lines: ``k`` or ``k a1 b1 ... an bn`` (per-sequence subranges)."""
    seqs = parse_sequences(_lines(a.input, "input"))
    out = []
    for t, r in _numbered(_lines(a.queries, "queries")):
        try:
            v = _ints(r)
            base = SequenceOracle(seqs)
            oracle = base
            if len(v) > 1:
                if len(v) != 1 + 2 * len(seqs):
                    raise InputError(f"expected k or k plus {len(seqs)} subrange pairs")
                oracle = ShiftedOracle(base, v[1::2], v[2::2])
            ans, _ = select(oracle, v[0])
            out.append(f"{ans} {base.query_counter}")
        except DOMAIN_ERRORS as e:
            errs.report(f"query line {t}", e)
    return out


def _median_ops(mc, lines, errs: LineErrors, out: Optional[list], label: str) -> None:
    d = mc.d
    for t, r in _numbered(lines):
        kind = r[0].upper()
        try:
            v = _ints(r[1:])
            if kind == "Q":
                p, cost = mc.query(*parse_box(r[1:], d))
                if out is None:
                    raise InputError("queries belong in --queries")
                out.append(" ".join(map(str, (*p, cost))))
            elif kind == "U":
                if len(v) != d + 1:
                    raise InputError(f"U needs {d} cell indices and a delta")
                mc.point_update(v[:-1], v[-1])
            elif kind == "RU":
                mc.range_update(*parse_box(r[1:-1], d), v[-1])
            else:
                raise InputError(f"unknown op {r[0]!r}")
        except DOMAIN_ERRORS as e:
            errs.report(f"{label} line {t}", e)


def cmd_median(a, errs: LineErrors) -> list[str]:
    mc = parse_median_cube(_lines(a.input, "input"))
    if a.updates is not None:
        _median_ops(mc, _lines(a.updates, "updates"), errs, None, "update")
    out: list[str] = []
    _median_ops(mc, _lines(a.queries, "queries"), errs, out, "query")
    return out


def cmd_seqedit(a, errs: LineErrors) -> list[str]:
    init, ops = parse_script(_lines(a.input, "input"))
    if a.z is not None and a.z < 1:
        raise InputError("--z must be >= 1")
    answers, _ = run_script(init, ops, a.z)
    return [str(v) for v in answers]


def cmd_rotstack(a, errs: LineErrors) -> list[str]:
    k, m, script = parse_rotstack(_lines(a.input, "input"))
    return [" ".join(map(str, run_rotstack(k, m, script)))]


def cmd_sweep_kth(a, errs: LineErrors) -> list[str]:
    res = solve_offline(parse_points(_lines(a.input, "input")),
                        parse_queries(_lines(a.queries, "queries")))
    return [f"ERR {res.errors[j].k}" if ans is None else repr(ans)
            for j, ans in enumerate(res.answers)]


# -- selftest -----------------------------------------------------------------------------

def corpus_root():
    return resources.files("rangekit") / "corpus"


def golden_cases():
    """(name, argv, expected stdout, case dir) for every case in the shipped corpus."""
    root = corpus_root()
    for sub in sorted(root.iterdir(), key=lambda p: p.name):
        if not sub.is_dir():
            continue
        for case in sorted(sub.iterdir(), key=lambda p: p.name):
            if not case.is_dir():
                continue
            argv = case.joinpath("args").read_text().split()
            yield f"{sub.name}/{case.name}", argv, case.joinpath("expected").read_text(), case


def run_golden(argv: Sequence[str], case_dir) -> tuple[int, str]:
    with resources.as_file(case_dir) as d:
        resolved = [str(Path(d) / v) if (Path(d) / v).is_file() else v for v in argv]
        out, err = io.StringIO(), io.StringIO()
        code = main(resolved, out, err)
    return code, out.getvalue()


def cmd_selftest(a, errs: LineErrors) -> list[str]:
    out = []
    for name, argv, want, case in golden_cases():
        code, got = run_golden(argv, case)
        ok = code == 0 and got == want
        out.append(f"golden {name} {'ok' if ok else 'FAIL'}")
        if not ok:
            errs.report(f"golden {name}", InputError(f"exit {code}, output {got!r}, expected {want!r}"))
    for name, suite in suites.SUITES.items():
        rng = random.Random(f"{a.seed}:{name}")
        try:
            n = suite(rng, 1)
            out.append(f"suite {name} ok {n} checks")
        except Exception as e:  # a crash inside a suite is a failure, not an abort
            out.append(f"suite {name} FAIL")
            errs.report(f"suite {name}", e)
    return out


# -- bench ------------------------------------------------------------------------------------

BENCH_COLUMNS = ["case", "n", "d", "param", "ops", "fast_counter", "oracle_counter",
                 "fast_ms", "oracle_ms", "ratio", "answer_hash"]
BENCH_CAPS = {"rtree-query": 1 << 14, "fc-query": 1 << 14, "cube-query": 64, "tree-subtree": 1 << 14,
              "kth-seq": 64, "median": 32, "seqedit": 4096, "rotstack": 1 << 16, "sweep-kth": 400}


def _timed(f: Callable):
    t0 = time.perf_counter()
    r = f()
    return r, (time.perf_counter() - t0) * 1000


def _bench_rtree(rng, n, d, param, ops, fc=False):
    pts = [(tuple(rng.randint(1, 4 * n) for _ in range(d)), rng.randint(-100, 100)) for _ in range(n)]
    boxes = []
    for _ in range(ops):
        lo = tuple(rng.randint(1, 4 * n) for _ in range(d))
        boxes.append((lo, tuple(rng.randint(x, 4 * n) for x in lo)))
    st = Counter()
    op = get_op("SUM")
    s = CascadeIndex2D(pts, op, st) if fc else RangeTree(pts, op, stats=st)
    fast = [s.query(lo, hi) for lo, hi in boxes]
    return fast, st["visited"], lambda: [oracles.naive_range_agg(pts, op, lo, hi) for lo, hi in boxes], n * ops


def _bench_cube(rng, n, d, param, ops):
    op = get_op("SUM")
    m = (n,) * d
    cube = suites.random_cube(rng, m, op)
    boxes = [suites.random_box(rng, m) for _ in range(ops)]
    st = Counter()
    ps = build_prefix_sweep(cube)
    fast = [range_query(ps, lo, hi, st) for lo, hi in boxes]
    cells = dict(zip(cube.indices(), cube.cells))
    scanned = 0
    for lo, hi in boxes:
        vol = 1
        for x, y in zip(lo, hi):
            vol *= y - x + 1
        scanned += vol
    return fast, st["corners"], lambda: [oracles.naive_cube_box(cells, op, lo, hi) for lo, hi in boxes], scanned


def _bench_subtree(rng, n, d, param, ops):
    t = suites.random_tree(rng, n)
    op = get_op("SUM")
    st = Counter()
    ix = build_subtree_index(t, op, st)
    qs = [(rng.randint(1, n), rng.randint(0, 5), rng.randint(5, 20)) for _ in range(ops)]
    fast = [subtree_dist_query(ix, *q) for q in qs]
    return fast, st["visited"], lambda: [oracles.naive_subtree_query(n, t.root, t.edges, t.weights, op, *q)
                                         for q in qs], n * ops


def _bench_kth(rng, n, d, param, ops):
    seqs = suites.random_sequences(rng, n, max(1, param))
    total = sum(map(len, seqs))
    ks = [rng.randint(1, total) for _ in range(ops)]
    probes, fast = 0, []
    for k in ks:
        o = SequenceOracle(seqs)
        fast.append(select(o, k)[0])
        probes += o.query_counter
    return fast, probes, lambda: [oracles.merge_kth(seqs, k) for k in ks], total * ops


def _bench_median(rng, n, d, param, ops):
    m = (n,) * d
    coords = [sorted(rng.randint(-50, 50) for _ in range(n)) for _ in range(d)]
    weights = [rng.randint(1, 5) for _ in range(n ** d)]
    st = Counter()
    mc = MedianCube(coords, weights, st)
    boxes = [suites.random_box(rng, m) for _ in range(ops)]
    fast = [mc.query(lo, hi) for lo, hi in boxes]
    cells = dict(zip(product(*(range(1, x + 1) for x in m)), weights))
    return fast, st["structure_updates"], lambda: [oracles.naive_median_cube(coords, cells, lo, hi)
                                                   for lo, hi in boxes], n ** d * ops


def _bench_seqedit(rng, n, d, param, ops):
    init, script = suites.random_edit_script(rng, n, ops)
    st = Counter()
    fast = run_script(init, script, param or None, st)
    moved = Counter()

    def slow():
        ans = oracles.naive_seq_sim(init, script)
        moved["elements"] = len(init) * len(script)
        return ans
    return fast, st["touched"], slow, moved


def _bench_rotstack(rng, n, d, param, ops):
    k = max(1, param)
    script = suites.random_stack_script(rng, ops)
    st = RotStack(k, ops)
    for op in script:
        st.push(op[1]) if op[0] == "P" else st.rotate()
    fast = st.finish()
    naive_work = sum(1 if op[0] == "P" else k for op in script)
    return fast, st.steps, lambda: oracles.naive_stack(k, script), naive_work


def _bench_sweep(rng, n, d, param, ops):
    pts, qs = suites.random_sweep(rng, n, ops, max(1, param) or 1000)
    res = solve_offline(pts, qs)
    events = res.stats["swaps"] + res.stats["shifted"] + n
    fast = res.squared

    def slow():
        out = []
        for j, (xq, k) in enumerate(qs):
            try:
                out.append(oracles.naive_kth_distance_sq(pts, xq, k, j))
            except RangeKitError:
                out.append(None)
        return out
    return fast, events, slow, n * ops


BENCH_CASES = {
    "rtree-query": _bench_rtree,
    "fc-query": lambda rng, n, d, p, ops: _bench_rtree(rng, n, 2, p, ops, fc=True),
    "cube-query": _bench_cube,
    "tree-subtree": _bench_subtree,
    "kth-seq": _bench_kth,
    "median": _bench_median,
    "seqedit": _bench_seqedit,
    "rotstack": _bench_rotstack,
    "sweep-kth": _bench_sweep,
}


def bench_rows(config_lines: Sequence[str], seed: int) -> list[list]:
    rows = []
    for t, r in _numbered(config_lines):
        if r[0].startswith("#"):
            continue
        if len(r) != 5:
            raise InputError(f"config line {t}: expected 'case n d param ops'")
        case = r[0]
        n, d, param, ops = _ints(r[1:])
        if case not in BENCH_CASES:
            raise InputError(f"config line {t}: unknown case {case!r} (known: {', '.join(BENCH_CASES)})")
        if n < 1 or d < 1 or ops < 0:
            raise InputError(f"config line {t}: need n >= 1, d >= 1, ops >= 0")
        if n > BENCH_CAPS[case] or d > 4 or ops > 1 << 16:
            raise CapExceeded(f"config line {t}: {case} caps n at {BENCH_CAPS[case]}, d at 4, ops at 65536")
        # param is left out so rows differing only in it share an instance
        rng = random.Random(f"{seed}:{case}:{n}:{d}:{ops}")
        (fast, fast_counter, slow, oracle_counter), fast_ms = _timed(lambda: BENCH_CASES[case](rng, n, d, param, ops))
        want, oracle_ms = _timed(slow)
        if isinstance(oracle_counter, Counter):  # filled in while the oracle ran
            oracle_counter = oracle_counter["elements"]
        if _norm(fast) != _norm(want):
            raise suites.Mismatch(f"config line {t}: {case} disagrees with its oracle")
        digest = hashlib.sha256(repr(_norm(fast)).encode()).hexdigest()[:16]
        ratio = fast_counter / oracle_counter if oracle_counter else 0.0
        rows.append([case, n, d, param, ops, fast_counter, oracle_counter,
                     f"{fast_ms:.3f}", f"{oracle_ms:.3f}", f"{ratio:.6f}", digest])
    return rows


def _norm(x):
    if isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], list):
        return [list(v) for v in x]  # editor (answers, final)
    return x


def cmd_bench(a, errs: LineErrors) -> list[str]:
    lines = _lines(a.input, "input") if a.input else []
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_COLUMNS)
    w.writerows(bench_rows(lines, a.seed))
    return buf.getvalue().splitlines()


COMMANDS = {
    "cube-query": (cmd_cube_query, "box aggregates over a dense cube"),
    "cube-batch-update": (cmd_cube_batch_update, "apply a batch of box stamps to a cube"),
    "rtree-query": (cmd_rtree_query, "orthogonal range aggregates over weighted points"),
    "tree-subtree": (cmd_tree_subtree, "subtree aggregates within a distance band"),
    "stations": (cmd_stations, "cheapest station collapse"),
    "kth-seq": (cmd_kth_seq, "k-th smallest across sorted sequences"),
    "median": (cmd_median, "L1 median of a weighted grid box"),
    "seqedit": (cmd_seqedit, "reverse / cut-paste / insert / read script"),
    "rotstack": (cmd_rotstack, "stack with top-K reversal"),
    "sweep-kth": (cmd_sweep_kth, "offline k-th distance queries"),
    "selftest": (cmd_selftest, "golden corpus plus seeded differential suites"),
    "bench": (cmd_bench, "counter and timing table as CSV"),
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that writes usage errors to a chosen stream."""

    err_stream = None

    def _print_message(self, message, file=None):
        if message:
            (self.err_stream if file is sys.stderr and self.err_stream else file or sys.stderr).write(message)


def make_parser(err=None) -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--agg", default="SUM", help="SUM, PRODUCT, XOR, MIN or MAX")
    common.add_argument("--input")
    common.add_argument("--queries")
    common.add_argument("--updates")
    common.add_argument("--z", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "csv"), default="text")
    p = _Parser(prog="rangekit", description="Range aggregation and selection toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, helptext) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=helptext)
        if name == "rtree-query":
            sp.add_argument("--fc", action="store_true", help="use the cascaded 2D index (static)")
    for q in [p, common, *sub.choices.values()]:
        q.err_stream = err
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        a = make_parser(err).parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    errs = LineErrors(err)
    try:
        lines = COMMANDS[a.command][0](a, errs)
    except DOMAIN_ERRORS as e:
        print(f"error: {e}", file=err)
        return 1
    if a.format == "csv" and a.command != "bench":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["answer"])
        w.writerows([ln] for ln in lines)
    else:
        for ln in lines:
            print(ln, file=out)
    return 1 if errs.count else 0


if __name__ == "__main__":
    sys.exit(main())

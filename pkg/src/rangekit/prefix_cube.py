"""Dense d-dimensional cubes: prefix-aggregate construction, inclusion-exclusion
box queries and batched range updates by corner stamping.

Cells are addressed with 1-based index tuples ``(c1, ..., cd)`` and stored
row-major with dimension 1 outermost. Index 0 along any axis is a virtual
cell holding the neutral element.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

from .agg import AggregateOp, fold
from .errors import InputError, InvalidBox, NotInvertible, ZeroInProductCube, ZeroUpdateInProductMode


def _strides(m: Sequence[int]) -> tuple[int, ...]:
    s = [1] * len(m)
    for j in range(len(m) - 2, -1, -1):
        s[j] = s[j + 1] * m[j + 1]
    return tuple(s)


@dataclass
class DenseCube:
    m: tuple[int, ...]
    cells: list
    op: AggregateOp
    strides: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        self.m = tuple(int(x) for x in self.m)
        if not self.m or any(x < 1 for x in self.m):
            raise ValueError(f"axis sizes must be >= 1, got {self.m}")
        if len(self.cells) != self.size:
            raise ValueError(f"expected {self.size} cells for shape {self.m}, got {len(self.cells)}")
        self.strides = _strides(self.m)

    @classmethod
    def filled(cls, m: Sequence[int], op: AggregateOp, value=None) -> "DenseCube":
        np_ = 1
        for x in m:
            np_ *= x
        v = op.neutral if value is None else value
        return cls(tuple(m), [v] * np_, op)

    @property
    def d(self) -> int:
        return len(self.m)

    @property
    def size(self) -> int:
        n = 1
        for x in self.m:
            n *= x
        return n

    def offset(self, c: Sequence[int]) -> int:
        off = 0
        for cj, mj, sj in zip(c, self.m, self.strides):
            if not 1 <= cj <= mj:
                raise IndexError(f"cell {tuple(c)} outside shape {self.m}")
            off += (cj - 1) * sj
        return off

    def __getitem__(self, c: Sequence[int]):
        return self.cells[self.offset(c)]

    def __setitem__(self, c: Sequence[int], value) -> None:
        self.cells[self.offset(c)] = value

    def indices(self):
        """All index tuples in row-major (lexicographic) order."""
        return product(*(range(1, mj + 1) for mj in self.m))

    def copy(self) -> "DenseCube":
        return DenseCube(self.m, list(self.cells), self.op)


class PrefixCube(DenseCube):
    """Entry ``c`` holds the fold of every cell dominated by ``c``."""


def _require_invertible(op: AggregateOp) -> None:
    if not op.invertible:
        raise NotInvertible(f"{op.name} is not invertible; use a range tree for it")


def _check_product_cells(cube: DenseCube) -> None:
    if cube.op.name == "PRODUCT" and any(v == 0 for v in cube.cells):
        raise ZeroInProductCube("PRODUCT prefix cubes need nonzero cells")


def build_prefix_naive(cube: DenseCube, counters: Optional[Counter] = None) -> PrefixCube:
    """Fill entries in lexicographic order, each from its 2^d - 1 lower neighbours."""
    op = cube.op
    _require_invertible(op)
    _check_product_cells(cube)
    d, m, st = cube.d, cube.m, cube.strides
    f = op.combine
    # (offset, dims touched, odd?) for every nonempty subset of axes
    subsets = []
    for mask in range(1, 1 << d):
        dims = [j for j in range(d) if mask >> j & 1]
        subsets.append((sum(st[j] for j in dims), dims, len(dims) % 2 == 1))
    ps = [None] * cube.size
    calls = 0
    for off, c in enumerate(cube.indices()):
        acc = cube.cells[off]
        neg = None
        for delta, dims, odd in subsets:
            if any(c[j] == 1 for j in dims):
                continue
            v = ps[off - delta]
            if odd:
                acc = f(acc, v)
                calls += 1
            elif neg is None:
                neg = v
            else:
                neg = f(neg, v)
                calls += 1
        if neg is not None:
            acc = f(acc, op.inverse(neg))
            calls += 2
        ps[off] = acc
    if counters is not None:
        counters["combine"] += calls
    return PrefixCube(m, ps, op)


def build_prefix_sweep(cube: DenseCube, counters: Optional[Counter] = None) -> PrefixCube:
    """One running fold per axis, d passes over the array."""
    op = cube.op
    _require_invertible(op)
    _check_product_cells(cube)
    ps = _sweep(list(cube.cells), cube.m, cube.strides, op.combine, counters)
    return PrefixCube(cube.m, ps, op)


def _sweep(cells: list, m, strides, f, counters: Optional[Counter]) -> list:
    calls = 0
    n = len(cells)
    for j, (mj, sj) in enumerate(zip(m, strides)):
        block = mj * sj
        for base in range(0, n, block):
            for off in range(base + sj, base + block):
                cells[off] = f(cells[off], cells[off - sj])
                calls += 1
    if counters is not None:
        counters["combine"] += calls
    return cells


def check_box(m: Sequence[int], lo: Sequence[int], hi: Sequence[int]) -> None:
    if len(lo) != len(m) or len(hi) != len(m):
        raise InvalidBox(f"box has {len(lo)}/{len(hi)} bounds for {len(m)} dimensions")
    for j, (a, b, mj) in enumerate(zip(lo, hi, m)):
        if not 1 <= a <= b <= mj:
            raise InvalidBox(f"axis {j + 1}: need 1 <= {a} <= {b} <= {mj}")


def range_query(ps: PrefixCube, lo: Sequence[int], hi: Sequence[int],
                counters: Optional[Counter] = None):
    """Aggregate of the cells in ``[lo1,hi1] x ... x [lod,hid]`` from 2^d prefix entries."""
    check_box(ps.m, lo, hi)
    op = ps.op
    d, st = ps.d, ps.strides
    pos, neg = [], []
    for mask in range(1 << d):
        off = 0
        for j in range(d):
            s = lo[j] - 1 if mask >> j & 1 else hi[j]
            if s == 0:
                break
            off += (s - 1) * st[j]
        else:
            (neg if bin(mask).count("1") % 2 else pos).append(ps.cells[off])
    if counters is not None:
        counters["corners"] += len(pos) + len(neg)
    # all additive terms first so PRODUCT divides exactly once
    total = fold(op, pos)
    if neg:
        total = op.combine(total, op.inverse(fold(op, neg)))
    return total


@dataclass(frozen=True)
class RangeStamp:
    lo: tuple[int, ...]
    hi: tuple[int, ...]
    u: object


def batched_range_updates(m: Sequence[int], updates: Sequence[RangeStamp], op: AggregateOp,
                          counters: Optional[Counter] = None,
                          start: Optional[DenseCube] = None) -> DenseCube:
    """Apply every stamp by marking its 2^d corners, then take one prefix sweep.

    Corners past the upper border of an axis are dropped. ``start``, when
    given, is combined cellwise into the result (the stamps are applied on
    top of it).
    """
    _require_invertible(op)
    m = tuple(m)
    cube = DenseCube.filled(m, op)
    d, st = cube.d, cube.strides
    cells = cube.cells
    f = op.combine
    stamped = 0
    for upd in updates:
        check_box(m, upd.lo, upd.hi)
        if op.name == "PRODUCT" and upd.u == 0:
            raise ZeroUpdateInProductMode("PRODUCT batched updates need nonzero u")
        u_inv = op.inverse(upd.u)
        for mask in range(1 << d):
            off = 0
            for j in range(d):
                s = upd.hi[j] + 1 if mask >> j & 1 else upd.lo[j]
                if s > m[j]:
                    break
                off += (s - 1) * st[j]
            else:
                val = u_inv if bin(mask).count("1") % 2 else upd.u
                cells[off] = f(val, cells[off])
                stamped += 1
    if counters is not None:
        counters["stamped_corners"] += stamped
    _sweep(cells, m, st, f, counters)
    if start is not None:
        if start.m != m:
            raise ValueError(f"start cube shape {start.m} differs from {m}")
        cells[:] = [f(a, b) for a, b in zip(start.cells, cells)]
    return cube


def parse_cube(lines: Sequence[str], op: AggregateOp) -> DenseCube:
    """Line 1: ``d m1 ... md``; then Np integers in row-major order."""
    rows = [ln.split() for ln in lines if ln.strip()]
    if not rows:
        raise InputError("empty cube file")
    head = [int(v) for v in rows[0]]
    d, m = head[0], tuple(head[1:])
    if len(m) != d:
        raise InputError(f"header declares d = {d} but lists {len(m)} axis sizes")
    cells = [int(v) for r in rows[1:] for v in r]
    np_ = 1
    for x in m:
        np_ *= x
    if len(cells) != np_:
        raise InputError(f"expected {np_} cells, got {len(cells)}")
    return DenseCube(m, cells, op)


def parse_box(tokens: Sequence[str], d: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``lo1 hi1 ... lod hid`` into (lo, hi)."""
    vals = [int(v) for v in tokens]
    if len(vals) != 2 * d:
        raise InputError(f"expected {2 * d} box bounds, got {len(vals)}")
    return tuple(vals[0::2]), tuple(vals[1::2])


def parse_stamps(lines: Sequence[str], d: int) -> list[RangeStamp]:
    out = []
    for t, ln in enumerate(lines, 1):
        r = ln.split()
        if not r:
            continue
        if len(r) != 2 * d + 1:
            raise InputError(f"stamp line {t}: expected {2 * d} bounds and u")
        lo, hi = parse_box(r[:-1], d)
        out.append(RangeStamp(lo, hi, int(r[-1])))
    return out

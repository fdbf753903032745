"""Cheapest way to make the last station of a forward-only bus line collapse.

Collapsing station i artificially forwards the whole inflow ps(j-1) - ps(i-1)
to every later station j. Station j then collapses on its own exactly when
that inflow exceeds r(j) - s(j), i.e. when i < prev(j). So starting the
cascade at i costs c(i) plus c(j) for every later j that would not fall by
itself, and e(j) collects those costs through interval additions over
[prev(i), i].
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Sequence

from .agg import SUM, check_int64
from .errors import InputError
from .prefix_cube import RangeStamp, batched_range_updates


@dataclass
class StationLine:
    s: list
    r: list
    c: list
    ps: list = field(init=False)

    def __post_init__(self):
        if not (len(self.s) == len(self.r) == len(self.c)) or not self.s:
            raise InputError("need n >= 1 stations with s, r and c each")
        for i, (s, r, c) in enumerate(zip(self.s, self.r, self.c), 1):
            if not 0 < s < r:
                raise InputError(f"station {i}: need 0 < s < r, got s={s}, r={r}")
            if c < 0:
                raise InputError(f"station {i}: negative cost {c}")
        self.ps = [0, *accumulate(self.s)]

    @property
    def n(self) -> int:
        return len(self.s)


def compute_prev(line: StationLine) -> list[int]:
    """prev[i-1] = smallest p with ps(i) - ps(p-1) <= r(i)."""
    ps = line.ps
    # ps(p-1) >= ps(i) - r(i), searched among ps(0..i-1)
    return [bisect_left(ps, ps[i] - line.r[i - 1], 0, i) + 1 for i in range(1, line.n + 1)]


class _AddTree:
    """Segment tree with range add and root-to-leaf point read."""

    def __init__(self, n: int):
        self.size = 1
        while self.size < n:
            self.size *= 2
        self.uagg = [0] * (2 * self.size)

    def range_add(self, lo: int, hi: int, u: int) -> None:
        """Add ``u`` over 1-based [lo, hi] by marking its canonical nodes."""
        a, b = lo - 1 + self.size, hi + self.size
        while a < b:
            if a & 1:
                self.uagg[a] = check_int64(self.uagg[a] + u)
                a += 1
            if b & 1:
                b -= 1
                self.uagg[b] = check_int64(self.uagg[b] + u)
            a //= 2
            b //= 2

    def point(self, i: int) -> int:
        v = i - 1 + self.size
        total = 0
        while v:
            total = check_int64(total + self.uagg[v])
            v //= 2
        return total


def compute_efforts(line: StationLine, prev: Sequence[int] | None = None,
                    method: str = "segment") -> list[int]:
    """e[j-1] = sum of c(i) over i >= j with prev(i) <= j.

    ``method`` is "segment" (range adds, then leaf-to-root sums) or "batched"
    (corner stamps plus one prefix sweep).
    """
    prev = compute_prev(line) if prev is None else prev
    n = line.n
    if method == "segment":
        tree = _AddTree(n)
        for i in range(1, n + 1):
            tree.range_add(prev[i - 1], i, line.c[i - 1])
        return [tree.point(j) for j in range(1, n + 1)]
    if method == "batched":
        stamps = [RangeStamp((prev[i - 1],), (i,), line.c[i - 1]) for i in range(1, n + 1)]
        return list(batched_range_updates((n,), stamps, SUM).cells)
    raise ValueError(f"unknown method {method!r}")


def min_collapse_effort(line: StationLine) -> tuple[int, int]:
    """(minimum effort, 1-based start station); ties go to the smallest index."""
    e = compute_efforts(line)
    best = min(e)
    return best, e.index(best) + 1


def collapses_from(line: StationLine, i: int, j: int, prev: Sequence[int] | None = None) -> bool:
    """Whether j > i falls by itself once stations i..j-1 are all down.

    This is the contiguous-inflow test i < prev(j); the cascade started at
    i reaches j only if it also reaches every station between them.
    """
    prev = compute_prev(line) if prev is None else prev
    return i < prev[j - 1]


def parse_stations(lines: Sequence[str]) -> StationLine:
    rows = [ln.split() for ln in lines if ln.strip()]
    if not rows:
        raise InputError("empty stations file")
    n = int(rows[0][0])
    body = rows[1:]
    if len(body) != n or any(len(r) != 3 for r in body):
        raise InputError(f"expected {n} lines of 's r c'")
    s, r, c = zip(*((int(a), int(b), int(x)) for a, b, x in body)) if n else ((), (), ())
    return StationLine(list(s), list(r), list(c))

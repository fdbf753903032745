"""Sequence editing (reverse, cut-paste, insert, read) over an interval list.

The current sequence is a list of runs ``(a, b, dir)`` over an append-only
store ``So``: the run contributes So[a..b] forwards when dir = +1, backwards
when dir = -1. Edits first isolate their endpoints as single-element runs
(``find``), then only reorder runs. Every operation costs O(number of runs);
:class:`GroupedEditor` flattens the sequence every z operations so the run
list stays short.
"""
from __future__ import annotations

from bisect import bisect_left
from collections import Counter
from itertools import accumulate
from math import isqrt
from typing import Iterable, Optional, Sequence

from .errors import BadPasteTarget, InputError, PositionOutOfRange


class IntervalList:
    def __init__(self, values: Iterable[int], stats: Optional[Counter] = None):
        self.so = list(values)
        self.n = len(self.so)
        self.entries: list[tuple[int, int, int]] = [(1, self.n, 1)] if self.n else []
        self.stats = stats if stats is not None else Counter()

    def __len__(self) -> int:
        return self.n

    def _locate(self, i: int) -> tuple[int, int]:
        """0-based run index u and 1-based offset q of position i inside it."""
        self.stats["touched"] += len(self.entries)
        ends = list(accumulate(b - a + 1 for a, b, _ in self.entries))
        u = bisect_left(ends, i)
        a, b, _ = self.entries[u]
        return u, i - (ends[u] - (b - a + 1))

    def _check_pos(self, i: int, lo: int = 1) -> None:
        if not lo <= i <= self.n:
            raise PositionOutOfRange(f"position {i} outside {lo}..{self.n}")

    def find(self, i: int) -> int:
        """Split so position i is a run of its own; returns its 1-based run index (0 for i = 0)."""
        self._check_pos(i, 0)
        if i == 0:
            return 0
        u, q = self._locate(i)
        a, b, d = self.entries[u]
        if d == 1:
            parts = [(a, a + q - 2), (a + q - 1, a + q - 1), (a + q, b)]
        else:
            parts = [(b - q + 2, b), (b - q + 1, b - q + 1), (a, b - q)]
        head = 1 if parts[0][0] <= parts[0][1] else 0
        self.entries[u:u + 1] = [(x, y, d) for x, y in parts if x <= y]
        return u + head + 1

    def get(self, i: int) -> int:
        self._check_pos(i)
        u, q = self._locate(i)
        a, b, d = self.entries[u]
        return self.so[a + q - 2] if d == 1 else self.so[b - q]

    def reverse(self, i: int, j: int) -> None:
        self._check_range(i, j)
        u = self.find(i)
        v = self.find(j)
        self.entries[u - 1:v] = [(a, b, -d) for a, b, d in reversed(self.entries[u - 1:v])]

    def cut_paste(self, i: int, j: int, p: int) -> None:
        """Move S(i..j) after position p of the remaining sequence; p = -1 deletes."""
        self._check_range(i, j)
        rest = self.n - (j - i + 1)
        if p != -1 and not 0 <= p <= rest:
            raise BadPasteTarget(f"paste target {p} outside -1 or 0..{rest}")
        u = self.find(i)
        v = self.find(j)
        seg = self.entries[u - 1:v]
        del self.entries[u - 1:v]
        self.n = rest
        if p == -1:
            return
        w = self.find(p)
        self.entries[w:w] = seg
        self.n += j - i + 1

    def insert(self, p: int, values: Sequence[int]) -> None:
        """Insert ``values`` after position p (p = 0 means in front)."""
        self._check_pos(p, 0)
        if not values:
            raise InputError("insert needs at least one value")
        self.so.extend(values)
        # new run indexes the store, whose length can exceed n after deletions
        top = len(self.so)
        self.n += len(values)
        w = self.find(p)
        self.entries.insert(w, (top - len(values) + 1, top, 1))

    def materialize(self) -> list[int]:
        so = self.so
        out: list[int] = []
        for a, b, d in self.entries:
            if d == 1:
                out.extend(so[a - 1:b])
            else:
                out.extend(so[b - 1:a - 2 if a > 1 else None:-1])
        self.stats["touched"] += len(self.entries)
        return out

    def _check_range(self, i: int, j: int) -> None:
        if not 1 <= i <= j <= self.n:
            raise PositionOutOfRange(f"range [{i}, {j}] outside 1..{self.n}")

    def apply(self, op: tuple):
        """Run one parsed op; returns the read value for Q, else None."""
        kind = op[0]
        if kind == "R":
            self.reverse(op[1], op[2])
        elif kind == "C":
            self.cut_paste(op[1], op[2], op[3])
        elif kind == "I":
            self.insert(op[1], op[2])
        elif kind == "Q":
            return self.get(op[1])
        else:
            raise InputError(f"unknown op {kind!r}")
        return None


class GroupedEditor:
    """Interval list that is flattened into a fresh store every ``z`` operations."""

    def __init__(self, values: Iterable[int], z: int, stats: Optional[Counter] = None):
        if z < 1:
            raise ValueError("group size z must be >= 1")
        self.z = z
        self.stats = stats if stats is not None else Counter()
        self.inner = IntervalList(values, self.stats)
        self.pending = 0

    def apply(self, op: tuple):
        out = self.inner.apply(op)
        self.pending += 1
        if self.pending == self.z:
            self.flush()
        return out

    def flush(self) -> None:
        self.inner = IntervalList(self.inner.materialize(), self.stats)
        self.pending = 0
        self.stats["flushes"] += 1

    def materialize(self) -> list[int]:
        return self.inner.materialize()

    def __len__(self) -> int:
        return len(self.inner)


def default_group_size(n0: int, m: int) -> int:
    """ceil(sqrt(max(n0, m))), at least 1."""
    x = max(n0, m, 1)
    r = isqrt(x)
    return r + (r * r < x)


def run_script(initial: Sequence[int], ops: Sequence[tuple], z: Optional[int] = None,
               stats: Optional[Counter] = None) -> tuple[list[int], list[int]]:
    """(answers to Q ops, final sequence). ``z=None`` runs the ungrouped editor."""
    ed = IntervalList(initial, stats) if z is None else GroupedEditor(initial, z, stats)
    answers = []
    for op in ops:
        v = ed.apply(op)
        if v is not None:
            answers.append(v)
    return answers, ed.materialize()


def grouped_run(initial: Sequence[int], ops: Sequence[tuple], z: Optional[int] = None,
                stats: Optional[Counter] = None) -> list[int]:
    if z is None:
        z = default_group_size(len(initial), len(ops))
    return run_script(initial, ops, z, stats)[0]


def parse_script(lines: Sequence[str]) -> tuple[list[int], list[tuple]]:
    rows = [ln.split() for ln in lines if ln.strip()]
    if not rows:
        raise InputError("empty script")
    head = [int(v) for v in rows[0]]
    if head[0] != len(head) - 1:
        raise InputError(f"header declares {head[0]} values but lists {len(head) - 1}")
    ops = []
    for t, r in enumerate(rows[1:], 2):
        kind, args = r[0].upper(), [int(v) for v in r[1:]]
        want = {"R": 2, "C": 3, "Q": 1}
        if kind in want:
            if len(args) != want[kind]:
                raise InputError(f"line {t}: {kind} takes {want[kind]} arguments")
            ops.append((kind, *args))
        elif kind == "I":
            if len(args) < 2 or args[1] != len(args) - 2:
                raise InputError(f"line {t}: I needs 'p k v1 ... vk'")
            ops.append(("I", args[0], args[2:]))
        else:
            raise InputError(f"line {t}: unknown op {r[0]!r}")
    return head[1:], ops

"""Stack with push and reverse-the-top-K in O(1) per operation.

The top window lives in a buffer between two cursors: ``up`` at the top
element and ``down`` at the K-th from the top. Pushing writes one step past
``up`` in the current direction; once more than K elements exist the element
at ``down`` leaves the window for good and is appended to the settled output.
Reversing the window just swaps the cursors and flips the direction.
"""
from __future__ import annotations

from typing import Sequence

from .errors import CapacityExceeded, InputError


class RotStack:
    def __init__(self, k: int, m: int):
        if k < 1:
            raise ValueError("window size K must be >= 1")
        if m < 0:
            raise ValueError("operation bound M must be >= 0")
        self.k = k
        self.m = m
        self.v = [None] * (2 * m)  # writes stay within [0, 2M)
        self.down = m
        self.up = m - 1
        self.dir = 1
        self.settled: list = []
        self.push_count = 0
        self.steps = 0  # unit operations, for the O(1)-per-op check
        self._done = False

    def push(self, x) -> None:
        if self.push_count >= self.m:
            raise CapacityExceeded(f"more than M = {self.m} pushes")
        self.up += self.dir
        self.v[self.up] = x
        self.push_count += 1
        self.steps += 1
        if self.push_count >= self.k + 1:
            self.settled.append(self.v[self.down])
            self.down += self.dir
            self.steps += 1

    def rotate(self) -> None:
        self.up, self.down = self.down, self.up
        self.dir = -self.dir
        self.steps += 1

    def finish(self) -> list:
        """Bottom-to-top contents. Single use: the window is drained into the output."""
        if self._done:
            raise RuntimeError("finish() already called")
        self._done = True
        out = self.settled
        i = self.down
        for _ in range(self.push_count - len(out)):
            out.append(self.v[i])
            i += self.dir
        return out


def run_rotstack(k: int, m: int, script: Sequence[tuple]) -> list:
    st = RotStack(k, m)
    for op in script:
        if op[0] == "P":
            st.push(op[1])
        else:
            st.rotate()
    return st.finish()


def parse_rotstack(lines: Sequence[str]) -> tuple[int, int, list[tuple]]:
    rows = [ln.split() for ln in lines if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise InputError("header must be 'K M'")
    k, m = int(rows[0][0]), int(rows[0][1])
    script = []
    for t, r in enumerate(rows[1:], 2):
        if r[0].upper() == "P" and len(r) == 2:
            script.append(("P", int(r[1])))
        elif r[0].upper() == "ROT" and len(r) == 1:
            script.append(("ROT",))
        else:
            raise InputError(f"line {t}: expected 'P x' or 'ROT'")
    return k, m, script

"""Aggregation algebra: associative combine, neutral element, optional inverse.

Integer mode works on exact Python ints constrained to the signed 64-bit
range; leaving that range raises ``OverflowError`` instead of wrapping.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .errors import NotInvertible

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

Weight = int  # float in float mode; Fraction transiently for PRODUCT inverses


def check_int64(x):
    if type(x) is int and (x > INT64_MAX or x < INT64_MIN):
        raise OverflowError(f"integer result {x} leaves the 64-bit range")
    return x


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _add(a, b):
    r = a + b
    if type(r) is int and (r > INT64_MAX or r < INT64_MIN):
        raise OverflowError(f"integer result {r} leaves the 64-bit range")
    return r


def _mul(a, b):
    r = _normalize(a * b)
    if type(r) is int and (r > INT64_MAX or r < INT64_MIN):
        raise OverflowError(f"integer result {r} leaves the 64-bit range")
    return r


def _xor(a, b):
    return a ^ b


def _neg(a):
    return check_int64(-a)


def _recip_int(a):
    if a == 0:
        raise ZeroDivisionError("PRODUCT inverse of zero")
    return _normalize(Fraction(1, 1) / a)


def _recip_float(a):
    if a == 0:
        raise ZeroDivisionError("PRODUCT inverse of zero")
    return 1.0 / a


def _same(a):
    return a


@dataclass(frozen=True)
class AggregateOp:
    name: str
    combine: Callable
    neutral: object
    inverse: Optional[Callable] = None
    mode: str = "int"

    @property
    def invertible(self) -> bool:
        return self.inverse is not None

    def __repr__(self) -> str:
        return f"AggregateOp({self.name}, mode={self.mode})"


SUM = AggregateOp("SUM", _add, 0, _neg)
PRODUCT = AggregateOp("PRODUCT", _mul, 1, _recip_int)
XOR = AggregateOp("XOR", _xor, 0, _same)
MIN = AggregateOp("MIN", min, INT64_MAX)
MAX = AggregateOp("MAX", max, INT64_MIN)

FSUM = AggregateOp("SUM", lambda a, b: a + b, 0.0, lambda a: -a, mode="float")
FPRODUCT = AggregateOp("PRODUCT", lambda a, b: a * b, 1.0, _recip_float, mode="float")
FMIN = AggregateOp("MIN", min, float("inf"), mode="float")
FMAX = AggregateOp("MAX", max, float("-inf"), mode="float")

_INT_OPS = {op.name: op for op in (SUM, PRODUCT, XOR, MIN, MAX)}
_FLOAT_OPS = {op.name: op for op in (FSUM, FPRODUCT, FMIN, FMAX)}

OP_NAMES = tuple(_INT_OPS)


def get_op(name: str, mode: str = "int") -> AggregateOp:
    """Look up an operation by name, case-insensitively."""
    if mode not in ("int", "float"):
        raise ValueError(f"unknown weight mode {mode!r}")
    table = _INT_OPS if mode == "int" else _FLOAT_OPS
    try:
        return table[name.upper()]
    except KeyError:
        raise ValueError(f"unknown aggregate {name!r} for {mode} mode "
                         f"(expected one of {', '.join(table)})") from None


def combine(op: AggregateOp, a, b):
    return op.combine(a, b)


def inverse_element(op: AggregateOp, b):
    if op.inverse is None:
        raise NotInvertible(f"{op.name} has no inverse")
    return op.inverse(b)


def invert(op: AggregateOp, c, b):
    """Return ``a`` with ``combine(op, a, b) == c``."""
    if op.inverse is None:
        raise NotInvertible(f"{op.name} has no inverse")
    return op.combine(c, op.inverse(b))


def fold(op: AggregateOp, ws: Iterable) -> object:
    acc = op.neutral
    f = op.combine
    for w in ws:
        acc = f(acc, w)
    return acc

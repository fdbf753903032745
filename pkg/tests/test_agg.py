import pytest

from rangekit.agg import (INT64_MAX, MAX, MIN, PRODUCT, SUM, XOR, check_int64, combine, fold, get_op,
                          invert)
from rangekit.errors import NotInvertible


@pytest.mark.parametrize("op, a, b, want", [
    (SUM, 3, 4, 7),
    (MAX, MAX.neutral, 5, 5),
    (XOR, 6, 6, 0),
])
def test_combine(op, a, b, want):
    assert combine(op, a, b) == want


@pytest.mark.parametrize("op, c, b, want", [(SUM, 7, 4, 3), (XOR, 5, 5, 0), (PRODUCT, 24, 4, 6)])
def test_invert(op, c, b, want):
    assert invert(op, c, b) == want


def test_min_has_no_inverse():
    with pytest.raises(NotInvertible):
        invert(MIN, 1, 2)


@pytest.mark.parametrize("op, ws, want", [(SUM, [], 0), (PRODUCT, [2, 3, 4], 24), (MAX, [-5], -5)])
def test_fold(op, ws, want):
    assert fold(op, ws) == want


def test_names_case_insensitive():
    assert get_op("xor") is XOR
    with pytest.raises(ValueError):
        get_op("median")


def test_overflow_is_an_error():
    with pytest.raises(OverflowError):
        combine(SUM, INT64_MAX, 1)
    assert check_int64(INT64_MAX) == INT64_MAX


def test_product_inverse_stays_integral():
    assert type(invert(PRODUCT, -12, -3)) is int

import random
from collections import Counter
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from rangekit import oracles
from rangekit.agg import PRODUCT, SUM, XOR, MIN
from rangekit.errors import InvalidBox, NotInvertible, ZeroInProductCube
from rangekit.prefix_cube import (DenseCube, RangeStamp, batched_range_updates, build_prefix_naive,
                                  build_prefix_sweep, parse_box, parse_cube, range_query)
from rangekit.suites import random_cube


@pytest.mark.parametrize("build", [build_prefix_naive, build_prefix_sweep])
def test_small_builds(build):
    assert build(DenseCube((3,), [1, 2, 3], SUM)).cells == [1, 3, 6]
    assert build(DenseCube((2, 2), [1, 2, 3, 4], SUM)).cells == [1, 3, 4, 10]
    assert build(DenseCube((1,), [5], XOR)).cells == [5]


def test_builders_agree_3d_xor_and_4d_sum():
    rng = random.Random(1)
    for m, op in [((3, 3, 3), XOR), ((4, 4, 4, 4), SUM)]:
        cube = random_cube(rng, m, op)
        assert build_prefix_naive(cube).cells == build_prefix_sweep(cube).cells


def test_box_query_examples():
    ps = build_prefix_sweep(DenseCube((2, 2), [1, 2, 3, 4], SUM))
    assert ps.cells == [1, 3, 4, 10]
    c = Counter()
    assert range_query(ps, (2, 2), (2, 2), c) == 4
    assert c["corners"] == 4
    assert range_query(ps, (1, 1), (2, 2)) == 10


def test_random_boxes_3d_xor():
    rng = random.Random(2)
    m = (5, 4, 6)
    cube = random_cube(rng, m, XOR)
    ps = build_prefix_sweep(cube)
    cells = dict(zip(cube.indices(), cube.cells))
    for _ in range(1000):
        lo = tuple(rng.randint(1, x) for x in m)
        hi = tuple(rng.randint(a, x) for a, x in zip(lo, m))
        assert range_query(ps, lo, hi) == oracles.naive_cube_box(cells, XOR, lo, hi)


def test_bad_boxes():
    ps = build_prefix_sweep(DenseCube((2, 2), [1, 2, 3, 4], SUM))
    for lo, hi in [((0, 1), (1, 1)), ((2, 1), (1, 1)), ((1, 1), (3, 1)), ((1,), (1,))]:
        with pytest.raises(InvalidBox):
            range_query(ps, lo, hi)


def test_product_rejects_zero_and_min_rejects_queries():
    with pytest.raises(ZeroInProductCube):
        build_prefix_sweep(DenseCube((2,), [1, 0], PRODUCT))
    with pytest.raises(NotInvertible):
        ps = build_prefix_sweep(DenseCube((2,), [1, 2], MIN))
        range_query(ps, (2,), (2,))


def test_stamp_examples():
    c = Counter()
    whole = batched_range_updates((2, 3), [RangeStamp((1, 1), (2, 3), 7)], SUM, c)
    assert whole.cells == [7] * 6
    assert c["stamped_corners"] == 1  # every upper corner falls off the grid
    one = batched_range_updates((2, 2), [RangeStamp((1, 1), (1, 1), 5)], SUM)
    assert one.cells == [5, 0, 0, 0]


def test_stamp_corner_count():
    rng = random.Random(3)
    m = (6, 6, 6)
    for _ in range(50):
        lo, hi = tuple(rng.randint(1, 6) for _ in m), None
        hi = tuple(rng.randint(a, 6) for a in lo)
        c = Counter()
        batched_range_updates(m, [RangeStamp(lo, hi, 1)], SUM, c)
        inside = [1 + (h < 6) for h in hi]
        assert c["stamped_corners"] == inside[0] * inside[1] * inside[2]


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_stamps_match_naive(data):
    d = data.draw(st.integers(1, 3))
    m = tuple(data.draw(st.lists(st.integers(1, 5), min_size=d, max_size=d)))
    op = data.draw(st.sampled_from([SUM, XOR]))
    stamps = []
    for _ in range(data.draw(st.integers(0, 8))):
        lo = tuple(data.draw(st.integers(1, x)) for x in m)
        hi = tuple(data.draw(st.integers(a, x)) for a, x in zip(lo, m))
        stamps.append(RangeStamp(lo, hi, data.draw(st.integers(-50, 50))))
    got = batched_range_updates(m, stamps, op)
    want = oracles.naive_stamps(m, stamps, op)
    assert got.cells == [want[c] for c in product(*(range(1, x + 1) for x in m))]


def test_stamps_on_top_of_start():
    start = DenseCube((2,), [10, 20], SUM)
    assert batched_range_updates((2,), [RangeStamp((2,), (2,), 1)], SUM, start=start).cells == [10, 21]


def test_parsers():
    cube = parse_cube(["2 2 2", "1 2", "3 4"], SUM)
    assert cube.m == (2, 2) and cube.cells == [1, 2, 3, 4]
    assert parse_box("1 2 3 4".split(), 2) == ((1, 3), (2, 4))
    with pytest.raises(ValueError):
        parse_cube(["2 2 2", "1 2 3"], SUM)

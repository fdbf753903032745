import math
import random
from fractions import Fraction

import pytest

from rangekit import oracles
from rangekit.errors import InputError, NoCrossover, RankExceedsEligible
from rangekit.suites import random_sweep
from rangekit.sweep_select import SweepState, parse_points, parse_queries, solve_offline, xsod


def test_xsod():
    x = xsod((0, 3), (4, 0))
    assert x == Fraction(7, 8)
    assert (0 - x) ** 2 + 9 == (4 - x) ** 2 == Fraction(625, 64)
    assert xsod((1, 5), (7, 5)) == 4
    with pytest.raises(NoCrossover):
        xsod((2, 1), (2, 3))


def test_examples():
    assert solve_offline([(0, 0)], [(5, 1)]).answers == [5.0]
    res = solve_offline([(0, 3), (4, 0)], [(4, 1), (10, 1)])
    assert res.answers == [0.0, 6.0]
    res = solve_offline([(3, 1)], [(0, 1), (5, 2), (5, 1)])
    assert isinstance(res.errors[0], RankExceedsEligible) and res.errors[0].eligible == 0
    assert res.errors[1].k == 2 and res.answers[2] == math.sqrt(5)


def test_insert_into_empty():
    st = SweepState([(1, 2)])
    st.seed([], 0)
    st.handle_insert(0)
    assert st.od == [0] and not st.heap


@pytest.mark.parametrize("explicit", [False, True])
def test_fuzz_vs_sort(explicit):
    rng = random.Random(19)
    for _ in range(10):
        n, m = rng.randint(1, 60), rng.randint(1, 60)
        pts, qs = random_sweep(rng, n, m, rng.choice([5, 100]))
        lo, hi = min(x for x, _ in pts + qs), max(x for x, _ in pts + qs)
        audits = [Fraction(rng.randint(lo * 64, hi * 64), 64) for _ in range(30)]
        res = solve_offline(pts, qs, explicit_delete=explicit, audit_at=audits)
        assert not res.audit_failures
        assert res.stats["swaps"] <= n * (n - 1) // 2
        for j, (xq, k) in enumerate(qs):
            eligible = sum(x <= xq for x, _ in pts)
            if k > eligible:
                assert res.errors[j].eligible == eligible
            else:
                assert res.squared[j] == oracles.naive_kth_distance_sq(pts, xq, k, j)


def test_validation_and_parsers():
    with pytest.raises(InputError):
        solve_offline([(0, -1)], [(0, 1)])
    with pytest.raises(InputError):
        solve_offline([(0, 1)], [(0, 0)])
    assert solve_offline([(0, 1)], []).answers == []
    assert parse_points(["1 2", "", "3 4"]) == [(1, 2), (3, 4)]
    assert parse_queries(["5 1"]) == [(5, 1)]
    with pytest.raises(InputError):
        parse_queries(["5"])

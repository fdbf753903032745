import inspect
import random

import pytest

from rangekit import oracles
from rangekit.errors import CapacityExceeded, InputError
from rangekit.rotating_stack import RotStack, parse_rotstack, run_rotstack
from rangekit.suites import random_stack_script


def test_settle_rule():
    st = RotStack(3, 5)
    st.push(1)
    assert st.settled == []
    for x in (2, 3, 4):
        st.push(x)
    assert st.settled == [1]
    st.push(5)
    assert st.settled == [1, 2]
    assert st.finish() == [1, 2, 3, 4, 5]


@pytest.mark.parametrize("k, m, script, want", [
    (3, 3, [("P", 1), ("P", 2), ("P", 3), ("ROT",)], [3, 2, 1]),
    (3, 2, [("P", 1), ("P", 2), ("ROT",), ("ROT",)], [1, 2]),
    (3, 1, [("ROT",), ("P", 7)], [7]),
    (2, 3, [("P", 1), ("P", 2), ("ROT",), ("P", 3)], [2, 1, 3]),
    (1, 0, [], []),
])
def test_examples(k, m, script, want):
    assert run_rotstack(k, m, script) == want == oracles.naive_stack(k, script)


def test_capacity_and_reuse():
    st = RotStack(2, 1)
    st.push(1)
    with pytest.raises(CapacityExceeded):
        st.push(2)
    st.finish()
    with pytest.raises(RuntimeError):
        st.finish()
    with pytest.raises(ValueError):
        RotStack(0, 1)


def test_fuzz_and_constant_steps():
    rng = random.Random(18)
    for _ in range(2000):
        k = rng.randint(1, 8)
        m = rng.randint(0, 300)
        script = random_stack_script(rng, m)
        st = RotStack(k, m)
        for op in script:
            before = st.steps
            st.push(op[1]) if op[0] == "P" else st.rotate()
            assert st.steps - before <= 2
        assert st.finish() == oracles.naive_stack(k, script)


def test_push_and_rotate_are_loop_free():
    for fn in (RotStack.push, RotStack.rotate):
        src = inspect.getsource(fn)
        assert "for " not in src and "while " not in src


def test_parse():
    assert parse_rotstack(["3 3", "P 1", "rot"]) == (3, 3, [("P", 1), ("ROT",)])
    with pytest.raises(InputError):
        parse_rotstack(["3", "P 1"])
    with pytest.raises(InputError):
        parse_rotstack(["3 3", "PUSH 1"])

import numpy as np
import pytest
from hypothesis import given, strategies as st

from krue.bits import Bits, concat, random_bits


@st.composite
def bitstrings(draw, max_len=80):
    n = draw(st.integers(0, max_len))
    return Bits(draw(st.integers(0, (1 << n) - 1)), n)


def test_index_zero_is_most_significant():
    b = Bits.from_str("1000")
    assert b.value == 8
    assert b[0] == 1 and b[3] == 0
    assert str(b) == "1000"


def test_concat_puts_left_part_high():
    assert concat(Bits.from_str("10"), Bits.from_str("011")) == Bits.from_str("10011")


def test_rejects_overflow():
    with pytest.raises(ValueError):
        Bits(4, 2)
    with pytest.raises(ValueError):
        Bits.from_str("10") ^ Bits.from_str("1")


@given(bitstrings(), bitstrings())
def test_concat_then_split(a, b):
    left, right = a.concat(b).split([a.length, b.length])
    assert (left, right) == (a, b)


@given(bitstrings())
def test_round_trips(a):
    assert Bits.from_list(a.to_list()) == a
    assert Bits.from_array(a.to_array()) == a
    assert Bits.from_str(str(a)) == a
    assert Bits.from_hex(a.to_hex(), a.length) == a


@given(bitstrings(), st.data())
def test_prefix_suffix(a, data):
    i = data.draw(st.integers(0, a.length))
    assert a.prefix(i).concat(a.suffix(a.length - i)) == a


@given(bitstrings())
def test_weight_and_flip(a):
    assert a.weight() == sum(a.to_list())
    for i in range(a.length):
        assert a.flip(i).weight() == a.weight() + (1 if a[i] == 0 else -1)


def test_random_bits_are_balanced(rng):
    arr = np.concatenate([random_bits(rng, 100).to_array() for _ in range(200)])
    assert abs(arr.mean() - 0.5) < 4 * 0.5 / np.sqrt(arr.size)

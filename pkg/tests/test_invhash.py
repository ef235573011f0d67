import random

import pytest
from hypothesis import given, strategies as st

from krue import invhash
from krue.bits import Bits
from krue.gf2field import field_spec
from krue.selftest import _hash_counts


def test_inversion_exhaustive_gf16():
    spec = field_spec(4)
    for u in range(1, 16):
        for c in range(4):
            for r in range(4):
                p = invhash.invert(spec.element(u), Bits(c, 2), Bits(r, 2))
                assert invhash.forward(spec.element(u), p) == Bits(c, 2).concat(Bits(r, 2))
                assert invhash.pa(spec.element(u), p, 2) == Bits(c, 2)


def test_inversion_random_gf2_64():
    spec = field_spec(64)
    rnd = random.Random(64)
    for _ in range(10_000):
        u = spec.element(rnd.getrandbits(64) or 1)
        ell = rnd.randint(0, 64)
        c, r = Bits(rnd.getrandbits(ell), ell), Bits(rnd.getrandbits(64 - ell), 64 - ell)
        assert invhash.pa(u, invhash.invert(u, c, r), ell) == c


def test_zero_seed_rejected():
    spec = field_spec(4)
    with pytest.raises(invhash.DegenerateSeed):
        invhash.invert(spec.zero(), Bits(0, 2), Bits(0, 2))
    with pytest.raises(invhash.DegenerateSeed):
        invhash.pa(spec.zero(), Bits(1, 4), 2)


def test_distinct_fillers_give_distinct_preimages():
    spec = field_spec(8)
    u = spec.element(0x53)
    pre = {invhash.invert(u, Bits(5, 3), Bits(r, 5)) for r in range(32)}
    assert len(pre) == 32


def test_collision_bound_exhaustive():
    # at most 2^(nu-ell) of the 16 seeds collide any pair of inputs
    for x in range(16):
        for x2 in range(x + 1, 16):
            assert _hash_counts(4, 2, x, x2).trace() <= 4


def test_nonzero_input_output_uniform_over_seeds():
    for x in range(1, 16):
        counts = _hash_counts(4, 2, x, x).diagonal()
        assert list(counts) == [4, 4, 4, 4]


@given(st.integers(1, 255), st.integers(0, 255))
def test_forward_is_field_product(u, x):
    spec = field_spec(8)
    assert invhash.forward(spec.element(u), Bits(x, 8)).value == (spec.element(u) * spec.element(x)).value

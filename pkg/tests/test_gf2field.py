import random

import pytest
from hypothesis import given, strategies as st

from krue import gf2field
from krue.gf2field import FieldMismatch, FieldSpec, NonInvertible, field_spec


def schoolbook(a, b, poly, nu):
    """Shift-and-add multiply, reducing after each shift."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a >> nu:
            a ^= poly
    return acc


def test_known_product_gf16():
    spec = field_spec(4)
    assert spec.reduction_poly == 0b10011
    want = schoolbook(0b0010, 0b1001, 0b10011, 4)
    assert (spec.element(0b0010) * spec.element(0b1001)).value == want == 0b0001


def test_aes_field_product():
    # FIPS-197 worked example: {57} x {83} = {c1}
    spec = field_spec(8)
    assert (spec.element(0x57) * spec.element(0x83)).value == 0xC1


def test_add_is_xor():
    spec = field_spec(4)
    assert (spec.element(0b1010) + spec.element(0b0110)).value == 0b1100


@pytest.mark.parametrize("nu", [4, 8, 16, 32, 64, 128, 7, 31])
def test_mul_matches_schoolbook(nu):
    spec = field_spec(nu)
    rnd = random.Random(nu)
    for _ in range(10_000 if nu <= 64 else 2_000):
        a, b = rnd.getrandbits(nu), rnd.getrandbits(nu)
        assert (spec.element(a) * spec.element(b)).value == schoolbook(a, b, spec.reduction_poly, nu)


def test_every_inverse_gf256():
    spec = field_spec(8)
    for a in range(1, 256):
        x = spec.element(a)
        assert (x * x.inv()).value == 1
        assert x.inv() == x ** 254


def test_zero_has_no_inverse():
    with pytest.raises(NonInvertible):
        field_spec(8).zero().inv()


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        field_spec(4).one() * field_spec(8).one()


def test_reducible_poly_rejected():
    with pytest.raises(ValueError):
        FieldSpec(4, 0b10101)  # (x^2 + x + 1)^2
    with pytest.raises(ValueError):
        FieldSpec(4, 0b1011)  # wrong degree


def test_trial_division_agrees_with_rabin():
    for p in range(1 << 8, 1 << 10):
        assert gf2field.is_irreducible(p) == gf2field.is_irreducible_trial(p)


@pytest.mark.parametrize("nu", sorted(gf2field.REDUCTION_POLYS))
def test_table_polys_irreducible(nu):
    poly = gf2field.REDUCTION_POLYS[nu]
    assert gf2field.degree(poly) == nu
    assert gf2field.is_irreducible(poly)


elements64 = st.integers(0, (1 << 64) - 1)


@given(elements64, elements64, elements64)
def test_field_axioms_gf2_64(a, b, c):
    s = field_spec(64)
    x, y, z = s.element(a), s.element(b), s.element(c)
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if a:
        assert x * x.inv() == s.one()

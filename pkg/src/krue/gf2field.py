"""Arithmetic in GF(2^nu).

Polynomials over GF(2) are plain ints: bit ``i`` is the coefficient of
``x**i``.  A :class:`FieldSpec` pins the width and the reduction polynomial;
:class:`FieldElement` wraps a reduced value together with its spec.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .bits import Bits

# One pinned irreducible polynomial per width.  All are standard low-weight
# choices (x^8 one is the AES polynomial, x^128 the GCM one).
REDUCTION_POLYS: dict[int, int] = {
    4: (1 << 4) | 0b11,  # x^4 + x + 1
    8: (1 << 8) | 0x1B,  # x^8 + x^4 + x^3 + x + 1
    16: (1 << 16) | 0x2B,  # x^16 + x^5 + x^3 + x + 1
    32: (1 << 32) | 0x8D,  # x^32 + x^7 + x^3 + x^2 + 1
    64: (1 << 64) | 0x1B,  # x^64 + x^4 + x^3 + x + 1
    128: (1 << 128) | 0x87,  # x^128 + x^7 + x^2 + x + 1
    256: (1 << 256) | 0x425,  # x^256 + x^10 + x^5 + x^2 + 1
}

MAX_NU = 512
TRIAL_DIVISION_MAX_NU = 32


class FieldError(ValueError):
    pass


class FieldMismatch(FieldError):
    pass


class NonInvertible(ArithmeticError):
    pass


# -- GF(2)[x] helpers ---------------------------------------------------------

def degree(p: int) -> int:
    return p.bit_length() - 1


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] polynomials."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_divmod(a: int, m: int) -> tuple[int, int]:
    if m == 0:
        raise ZeroDivisionError("polynomial division by zero")
    dm = degree(m)
    q = 0
    while a and degree(a) >= dm:
        shift = degree(a) - dm
        q |= 1 << shift
        a ^= m << shift
    return q, a


def poly_mod(a: int, m: int) -> int:
    dm = degree(m)
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _mulmod(a: int, b: int, m: int) -> int:
    return poly_mod(clmul(a, b), m)


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(p: int) -> bool:
    """Rabin's irreducibility test for a GF(2)[x] polynomial."""
    n = degree(p)
    if n < 1:
        return False
    if n == 1:
        return True
    if not p & 1:
        return False

    def x_pow_2k(k: int) -> int:
        r = 0b10
        for _ in range(k):
            r = _mulmod(r, r, p)
        return r

    if x_pow_2k(n) != 0b10:
        return False
    for q in _prime_factors(n):
        if poly_gcd(p, x_pow_2k(n // q) ^ 0b10) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def is_irreducible_trial(p: int) -> bool:
    """Irreducibility by trial division against every polynomial of degree <= deg/2."""
    n = degree(p)
    if n < 1:
        return False
    if n > 1 and not p & 1:
        return False  # divisible by x
    for q in range(3, 1 << (n // 2 + 1), 2):
        if poly_mod(p, q) == 0:
            return False
    return True


def smallest_irreducible(nu: int) -> int:
    for low in range(1, 1 << nu, 2):
        p = (1 << nu) | low
        if is_irreducible(p):
            return p
    raise FieldError(f"no irreducible polynomial of degree {nu}")  # pragma: no cover


# -- fields --------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    nu: int
    reduction_poly: int

    def __post_init__(self) -> None:
        if not 1 <= self.nu <= MAX_NU:
            raise FieldError(f"nu={self.nu} outside [1, {MAX_NU}]")
        if degree(self.reduction_poly) != self.nu:
            raise FieldError(f"reduction polynomial {self.reduction_poly:#x} does not have degree {self.nu}")
        if self.nu <= TRIAL_DIVISION_MAX_NU:
            ok = is_irreducible_trial(self.reduction_poly)
        elif REDUCTION_POLYS.get(self.nu) == self.reduction_poly:
            ok = True
        else:
            ok = is_irreducible(self.reduction_poly)
        if not ok:
            raise FieldError(f"reduction polynomial {self.reduction_poly:#x} is reducible")

    @property
    def order(self) -> int:
        return 1 << self.nu

    def element(self, value: int | Bits) -> FieldElement:
        return FieldElement(value, self)

    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    def one(self) -> FieldElement:
        return FieldElement(1, self)


_spec_cache: dict[tuple[int, int], FieldSpec] = {}


def field_spec(nu: int, reduction_poly: int | None = None) -> FieldSpec:
    """The field GF(2^nu), using the pinned table polynomial unless overridden.

    Widths missing from the table get the lexicographically smallest
    irreducible polynomial of that degree.
    """
    if reduction_poly is None:
        reduction_poly = REDUCTION_POLYS.get(nu)
        if reduction_poly is None:
            reduction_poly = smallest_irreducible(nu)
    key = (nu, reduction_poly)
    spec = _spec_cache.get(key)
    if spec is None:
        spec = FieldSpec(nu, reduction_poly)
        _spec_cache[key] = spec
    return spec


class FieldElement:
    __slots__ = ("value", "spec")

    def __init__(self, value: int | Bits, spec: FieldSpec):
        if isinstance(value, Bits):
            if value.length != spec.nu:
                raise FieldError(f"{value.length}-bit string is not an element of GF(2^{spec.nu})")
            value = value.value
        if not 0 <= value < spec.order:
            raise FieldError(f"{value:#x} is not reduced for GF(2^{spec.nu})")
        self.value = value
        self.spec = spec

    @property
    def bits(self) -> Bits:
        return Bits(self.value, self.spec.nu)

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            raise FieldMismatch("operands belong to different fields")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.value ^ other.value, self.spec)

    __sub__ = __add__

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(_mulmod(self.value, other.value, self.spec.reduction_poly), self.spec)

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inv() ** (-e)
        result, base = 1, self.value
        m = self.spec.reduction_poly
        while e:
            if e & 1:
                result = _mulmod(result, base, m)
            base = _mulmod(base, base, m)
            e >>= 1
        return FieldElement(result, self.spec)

    def inv(self) -> FieldElement:
        if self.value == 0:
            raise NonInvertible("zero has no multiplicative inverse")
        # extended Euclid on (value, modulus); invariant s*value == r (mod m)
        r0, r1 = self.spec.reduction_poly, self.value
        s0, s1 = 0, 1
        while r1 != 1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 ^ clmul(q, s1)
        return FieldElement(poly_mod(s1, self.spec.reduction_poly), self.spec)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return self * other.inv()

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.spec == other.spec and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.value, self.spec))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"GF2^{self.spec.nu}({self.value:#x})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inv()

"""Invertible multiplicative hash family F_u(x) = u*x over GF(2^nu).

Truncating F_u to its ``ell`` most significant bits gives a pairwise
independent family from nu bits to ell bits; because F_u is a bijection
for u != 0, a preimage of any ell-bit output is obtained by appending
nu - ell filler bits and dividing by u.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bits import Bits
from .gf2field import FieldElement, FieldSpec, field_spec


class DegenerateSeed(ValueError):
    """u = 0 makes F_u constant and therefore not invertible."""


@dataclass(frozen=True)
class HashSpec:
    nu: int
    ell: int
    field: FieldSpec

    def __post_init__(self) -> None:
        if self.field.nu != self.nu:
            raise ValueError(f"field width {self.field.nu} != nu={self.nu}")
        if not 1 <= self.ell <= self.nu:
            raise ValueError(f"need 1 <= ell <= nu, got ell={self.ell}, nu={self.nu}")

    @classmethod
    def make(cls, nu: int, ell: int, reduction_poly: int | None = None) -> HashSpec:
        return cls(nu, ell, field_spec(nu, reduction_poly))


def _seed(u: FieldElement) -> FieldElement:
    if not u:
        raise DegenerateSeed("hash seed u must be nonzero")
    return u


def forward(u: FieldElement, x: Bits) -> Bits:
    _seed(u)
    return (u * u.spec.element(x)).bits


def pa(u: FieldElement, x: Bits, ell: int) -> Bits:
    """Privacy amplification: the ``ell`` most significant bits of u*x."""
    return forward(u, x).prefix(ell)


def invert(u: FieldElement, c: Bits, r: Bits) -> Bits:
    """Return p with forward(u, p) == c || r, so that pa(u, p, len(c)) == c."""
    _seed(u)
    target = c.concat(r)
    if target.length != u.spec.nu:
        raise ValueError(f"|c|+|r| = {target.length} != nu = {u.spec.nu}")
    return (u.inv() * u.spec.element(target)).bits

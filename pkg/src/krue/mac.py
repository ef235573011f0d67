"""Polynomial-evaluation MAC over GF(2^lambda).

The message is cut into lambda-bit blocks m_1..m_d (last one zero-padded on
the right), followed by a block holding the message length in bits.  With
key u the tag is  m_1*u + m_2*u^2 + ... + m_d*u^d + len*u^(d+1).  For two
distinct messages the tag difference is a nonzero polynomial in u of degree
at most ``block_count``, so a substitution succeeds for at most that many
keys out of 2^lambda.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bits import Bits
from .gf2field import FieldSpec, field_spec


@dataclass(frozen=True)
class MacSpec:
    lam: int
    msg_len: int
    field: FieldSpec

    def __post_init__(self) -> None:
        if self.msg_len <= 0:
            raise ValueError("MAC message length must be positive")
        if self.field.nu != self.lam:
            raise ValueError(f"field width {self.field.nu} != lambda={self.lam}")

    @classmethod
    def make(cls, lam: int, msg_len: int, reduction_poly: int | None = None) -> MacSpec:
        return cls(lam, msg_len, field_spec(lam, reduction_poly))

    @property
    def block_count(self) -> int:
        """Message blocks plus the trailing length block."""
        return -(-self.msg_len // self.lam) + 1


def _blocks(spec: MacSpec, msg: Bits) -> list[int]:
    lam = spec.lam
    pad = (-msg.length) % lam
    v = msg.value << pad
    d = (msg.length + pad) // lam
    mask = (1 << lam) - 1
    out = [(v >> (lam * (d - 1 - i))) & mask for i in range(d)]
    out.append(msg.length & mask)
    return out


def _horner(spec: MacSpec, key: Bits, blocks: list[int]) -> Bits:
    f = spec.field
    u = f.element(key.value)
    acc = f.zero()
    for blk in reversed(blocks):
        acc = (acc + f.element(blk)) * u
    return acc.bits


def _check_key(spec: MacSpec, key: Bits) -> None:
    if key.length != spec.lam:
        raise ValueError(f"MAC key has length {key.length}, expected {spec.lam}")


def tag(spec: MacSpec, key: Bits, msg: Bits) -> Bits:
    _check_key(spec, key)
    if msg.length != spec.msg_len:
        raise ValueError(f"message has length {msg.length}, expected {spec.msg_len}")
    return _horner(spec, key, _blocks(spec, msg))


def verify(spec: MacSpec, key: Bits, msg: Bits, claimed: Bits) -> bool:
    return tag(spec, key, msg) == claimed


def tag_feedback(spec: MacSpec, key: Bits, masked_bit: int) -> Bits:
    """Tag of a single bit carried in the low bit of one block: bit*u + 1*u^2."""
    _check_key(spec, key)
    if masked_bit not in (0, 1):
        raise ValueError("feedback must be a single bit")
    return _horner(spec, key, [masked_bit, 1])


def verify_feedback(spec: MacSpec, key: Bits, masked_bit: int, claimed: Bits) -> bool:
    return tag_feedback(spec, key, masked_bit) == claimed

"""Fixed-length bitstrings backed by Python ints.

Index 0 is the leftmost (most significant) bit, so ``a.concat(b)`` places
``a`` in the high-order positions and ``x.prefix(l)`` returns the ``l`` most
significant bits. When a bitstring is read as a GF(2) polynomial, bit ``i``
of ``value`` is the coefficient of ``x**i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True, slots=True)
class Bits:
    value: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError(f"negative length {self.length}")
        if self.value < 0 or self.value >> self.length:
            raise ValueError(f"value {self.value:#x} does not fit in {self.length} bits")

    @classmethod
    def zeros(cls, length: int) -> Bits:
        return cls(0, length)

    @classmethod
    def ones(cls, length: int) -> Bits:
        return cls((1 << length) - 1, length)

    @classmethod
    def from_str(cls, s: str) -> Bits:
        s = s.replace("_", "").replace(" ", "")
        if s and set(s) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {s!r}")
        return cls(int(s, 2) if s else 0, len(s))

    @classmethod
    def from_list(cls, bits: Iterable[int]) -> Bits:
        value = 0
        length = 0
        for b in bits:
            value = (value << 1) | (int(b) & 1)
            length += 1
        return cls(value, length)

    @classmethod
    def from_hex(cls, s: str, length: int) -> Bits:
        return cls(int(s, 16) if s else 0, length)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> Bits:
        arr = np.asarray(arr, dtype=np.uint8)
        if arr.size == 0:
            return cls(0, 0)
        return cls(int.from_bytes(np.packbits(arr).tobytes(), "big") >> ((-arr.size) % 8), int(arr.size))

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def __repr__(self) -> str:
        return f"Bits('{self}')"

    def to_hex(self) -> str:
        return format(self.value, f"0{(self.length + 3) // 4}x") if self.length else ""

    def to_list(self) -> list[int]:
        return [(self.value >> (self.length - 1 - i)) & 1 for i in range(self.length)]

    def to_array(self) -> np.ndarray:
        if self.length == 0:
            return np.zeros(0, dtype=np.uint8)
        nbytes = (self.length + 7) // 8
        raw = np.frombuffer((self.value << (nbytes * 8 - self.length)).to_bytes(nbytes, "big"), dtype=np.uint8)
        return np.unpackbits(raw)[: self.length]

    def __getitem__(self, idx: int | slice) -> int | Bits:
        if isinstance(idx, slice):
            start, stop, step = idx.indices(self.length)
            if step != 1:
                raise ValueError("strided slices are not supported")
            stop = max(stop, start)
            width = stop - start
            return Bits((self.value >> (self.length - stop)) & ((1 << width) - 1), width)
        if idx < 0:
            idx += self.length
        if not 0 <= idx < self.length:
            raise IndexError(idx)
        return (self.value >> (self.length - 1 - idx)) & 1

    def __xor__(self, other: Bits) -> Bits:
        if not isinstance(other, Bits):
            return NotImplemented
        if other.length != self.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return Bits(self.value ^ other.value, self.length)

    def concat(self, *others: Bits) -> Bits:
        value, length = self.value, self.length
        for o in others:
            value = (value << o.length) | o.value
            length += o.length
        return Bits(value, length)

    def prefix(self, n: int) -> Bits:
        """The ``n`` most significant bits."""
        if not 0 <= n <= self.length:
            raise ValueError(f"prefix {n} out of range for length {self.length}")
        return Bits(self.value >> (self.length - n), n)

    def suffix(self, n: int) -> Bits:
        if not 0 <= n <= self.length:
            raise ValueError(f"suffix {n} out of range for length {self.length}")
        return Bits(self.value & ((1 << n) - 1), n)

    def split(self, sizes: Sequence[int]) -> list[Bits]:
        if sum(sizes) != self.length:
            raise ValueError(f"sizes {list(sizes)} do not sum to {self.length}")
        out = []
        rest = self.length
        for s in sizes:
            rest -= s
            out.append(Bits((self.value >> rest) & ((1 << s) - 1), s))
        return out

    def weight(self) -> int:
        return self.value.bit_count()

    def flip(self, i: int) -> Bits:
        return Bits(self.value ^ (1 << (self.length - 1 - i)), self.length)


def concat(*parts: Bits) -> Bits:
    if not parts:
        return Bits(0, 0)
    return parts[0].concat(*parts[1:])


def random_bits(rng: np.random.Generator, n: int) -> Bits:
    """Uniform ``n``-bit string drawn from ``rng``."""
    if n == 0:
        return Bits(0, 0)
    nbytes = (n + 7) // 8
    value = int.from_bytes(rng.bytes(nbytes), "big") >> (nbytes * 8 - n)
    return Bits(value, n)

"""Classical-statistics model of the qubit channel.

Alice and Bob share the basis sequence, so on an honest channel Bob's
measurement returns Alice's bit and any disturbance shows up as a bit flip.
That reduces noise to a binary symmetric channel on the payload.  The
intercept-resend attacker is modelled from measurement statistics: when
Eve guesses the wrong basis her resent state gives Bob a uniformly random
outcome.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bits import Bits


class Encoding(enum.Enum):
    FOUR_STATE = "four-state"
    SIX_STATE = "six-state"

    @property
    def basis_count(self) -> int:
        return 2 if self is Encoding.FOUR_STATE else 3

    @classmethod
    def parse(cls, s: str | Encoding) -> Encoding:
        if isinstance(s, Encoding):
            return s
        key = s.strip().lower().replace("_", "-")
        aliases = {"4": "four-state", "4-state": "four-state", "bb84": "four-state",
                   "6": "six-state", "6-state": "six-state"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown encoding {s!r}") from None


@dataclass(frozen=True)
class BasisSeq:
    bases: tuple[int, ...]
    basis_count: int

    def __post_init__(self) -> None:
        if self.basis_count not in (2, 3):
            raise ValueError("basis_count must be 2 or 3")
        if any(not 0 <= b < self.basis_count for b in self.bases):
            raise ValueError("basis index out of range")

    def __len__(self) -> int:
        return len(self.bases)

    @classmethod
    def random(cls, rng: np.random.Generator, n: int, encoding: Encoding) -> BasisSeq:
        return cls(tuple(int(v) for v in rng.integers(0, encoding.basis_count, n)), encoding.basis_count)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.bases, dtype=np.int64)


class ChannelKind(enum.Enum):
    IDEAL = "ideal"
    BSC = "bsc"
    INTERCEPT_RESEND = "intercept_resend"


@dataclass(frozen=True)
class ChannelModel:
    kind: ChannelKind = ChannelKind.IDEAL
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= 0.5:
            raise ValueError(f"gamma={self.gamma} outside [0, 1/2]")

    @classmethod
    def ideal(cls) -> ChannelModel:
        return cls(ChannelKind.IDEAL)

    @classmethod
    def bsc(cls, gamma: float) -> ChannelModel:
        return cls(ChannelKind.BSC, gamma)

    @classmethod
    def intercept_resend(cls) -> ChannelModel:
        return cls(ChannelKind.INTERCEPT_RESEND)

    @classmethod
    def parse(cls, kind: str, gamma: float = 0.0) -> ChannelModel:
        key = kind.strip().lower().replace("-", "_")
        if key == "none":
            key = "ideal"
        try:
            k = ChannelKind(key)
        except ValueError:
            raise ValueError(f"unknown channel model {kind!r}") from None
        return cls(k, gamma if k is ChannelKind.BSC else 0.0)


def flip_mask(x: Bits, b: BasisSeq, model: ChannelModel, rng: np.random.Generator) -> np.ndarray:
    """Boolean array marking which of Bob's outcomes differ from Alice's bits."""
    n = x.length
    if len(b) != n:
        raise ValueError(f"basis sequence has length {len(b)}, payload has {n}")
    if model.kind is ChannelKind.IDEAL:
        return np.zeros(n, dtype=bool)
    if model.kind is ChannelKind.BSC:
        return rng.random(n) < model.gamma
    eve_basis = rng.integers(0, b.basis_count, n)
    wrong = eve_basis != b.to_array()
    # Wrong basis: Eve's resent state is unbiased in Bob's basis.
    return wrong & (rng.integers(0, 2, n) == 1)


def transmit(x: Bits, b: BasisSeq, model: ChannelModel, rng: np.random.Generator) -> Bits:
    if model.kind is ChannelKind.IDEAL:
        if len(b) != x.length:
            raise ValueError(f"basis sequence has length {len(b)}, payload has {x.length}")
        return x
    mask = flip_mask(x, b, model, rng)
    return x ^ Bits.from_array(mask.astype(np.uint8))


def induced_error_rate(model: ChannelModel, encoding: Encoding) -> float:
    if model.kind is ChannelKind.IDEAL:
        return 0.0
    if model.kind is ChannelKind.BSC:
        return model.gamma
    nb = encoding.basis_count
    return float(Fraction(nb - 1, nb) * Fraction(1, 2))

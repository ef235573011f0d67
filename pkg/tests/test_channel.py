import numpy as np
import pytest

from krue.bits import Bits, random_bits
from krue.channel import BasisSeq, ChannelModel, Encoding, flip_mask, induced_error_rate, transmit


def _rate(model, encoding, n=200_000, seed=0):
    rng = np.random.default_rng(seed)
    x = random_bits(rng, n)
    b = BasisSeq.random(rng, n, encoding)
    return flip_mask(x, b, model, rng).mean()


def test_ideal_is_identity(rng):
    x = random_bits(rng, 63)
    assert transmit(x, BasisSeq.random(rng, 63, Encoding.FOUR_STATE), ChannelModel.ideal(), rng) == x


@pytest.mark.parametrize("gamma", [0.0, 0.05, 0.2])
def test_bsc_flip_rate(gamma):
    n = 200_000
    sigma = np.sqrt(gamma * (1 - gamma) / n)
    assert abs(_rate(ChannelModel.bsc(gamma), Encoding.FOUR_STATE, n) - gamma) <= 4 * sigma + 1e-12


@pytest.mark.parametrize("encoding,want", [(Encoding.FOUR_STATE, 0.25), (Encoding.SIX_STATE, 1 / 3)])
def test_intercept_resend_disturbance(encoding, want):
    model = ChannelModel.intercept_resend()
    assert induced_error_rate(model, encoding) == pytest.approx(want, abs=1e-15)
    n = 200_000
    assert abs(_rate(model, encoding, n) - want) <= 4 * np.sqrt(want * (1 - want) / n)


def test_same_seed_same_noise():
    model = ChannelModel.bsc(0.1)
    x = Bits.zeros(500)
    b = BasisSeq((0,) * 500, 2)
    a1 = transmit(x, b, model, np.random.default_rng(7))
    a2 = transmit(x, b, model, np.random.default_rng(7))
    assert a1 == a2 and a1.weight() > 0


def test_basis_sequences():
    rng = np.random.default_rng(1)
    b = BasisSeq.random(rng, 30_000, Encoding.SIX_STATE)
    counts = np.bincount(b.to_array(), minlength=3)
    assert counts.min() > 9_500
    with pytest.raises(ValueError):
        BasisSeq((0, 2), 2)


def test_parsing():
    assert Encoding.parse("6-state") is Encoding.SIX_STATE
    assert Encoding.parse("four-state") is Encoding.FOUR_STATE
    assert ChannelModel.parse("none") == ChannelModel.ideal()
    assert ChannelModel.parse("bsc", 0.05) == ChannelModel.bsc(0.05)
    with pytest.raises(ValueError):
        ChannelModel.bsc(0.7)
    with pytest.raises(ValueError):
        Encoding.parse("eight-state")


def test_length_mismatch(rng):
    with pytest.raises(ValueError):
        transmit(Bits.zeros(5), BasisSeq((0,) * 4, 2), ChannelModel.bsc(0.1), rng)

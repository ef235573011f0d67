import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from krue import ecc
from krue.bits import Bits
from krue.ecc import CodeError, DecodeFailure, get_code

# textbook systematic generator [I | P] for the [7,4] Hamming code
G74 = np.array([
    [1, 0, 0, 0, 1, 1, 0],
    [0, 1, 0, 0, 1, 0, 1],
    [0, 0, 1, 0, 0, 1, 1],
    [0, 0, 0, 1, 1, 1, 1],
])


def nearest_codeword_oracle(code, received):
    """Exhaustive nearest-codeword decoding of many words at once, same tie rule."""
    words = np.array([ecc.encode(code, Bits(p, code.k)).value for p in range(1 << code.k)], dtype=np.uint64)
    received = np.asarray(list(received), dtype=np.uint64)
    out = []
    for chunk in np.array_split(received, max(1, len(received) // 1024)):
        d = np.bitwise_count(chunk[:, None] ^ words[None, :])
        best = d.argmin(axis=1)  # first minimum, i.e. smallest message
        out += [None if d[i, b] > code.t else Bits(int(b), code.k) for i, b in enumerate(best)]
    return out


def _decode_or_none(code, x):
    try:
        return ecc.decode(code, x)[0]
    except DecodeFailure:
        return None


def test_hamming_matches_generator_matrix():
    code = get_code("hamming7_4")
    for m in itertools.product((0, 1), repeat=4):
        want = (np.array(m) @ G74) % 2
        assert ecc.encode(code, Bits.from_list(m)).to_list() == list(want)


def test_hamming_parity_check_columns_distinct():
    code = get_code("hamming7_4")
    cols = {ecc.syndrome(code, Bits(1 << i, 7)).value for i in range(7)}
    assert len(cols) == 7 and 0 not in cols


@pytest.mark.parametrize("code_id", ["identity6", "hamming7_4", "bch7_4"])
def test_decode_equals_packaged_brute_force(code_id):
    code = get_code(code_id)
    for w in range(1 << code.n):
        x = Bits(w, code.n)
        try:
            want = ecc.brute_force_decode(code, x)
        except DecodeFailure:
            want = None
        assert _decode_or_none(code, x) == want, (code_id, str(x))


@pytest.mark.parametrize("code_id", ["identity8", "hamming7_4", "hamming7_4x2", "bch15_11", "bch15_7", "bch15_5"])
def test_decode_equals_nearest_codeword_exhaustive(code_id):
    code = get_code(code_id)
    want = nearest_codeword_oracle(code, range(1 << code.n))
    for w in range(1 << code.n):
        assert _decode_or_none(code, Bits(w, code.n)) == want[w], (code_id, w)


def test_blockwise_hamming_random_against_oracle():
    code = ecc.hamming_blocks(3)  # [21,12], t = 1 overall
    rnd = random.Random(21)
    received = [rnd.getrandbits(21) for _ in range(10_000)]
    for w, want in zip(received, nearest_codeword_oracle(code, received)):
        assert _decode_or_none(code, Bits(w, 21)) == want


@pytest.mark.parametrize("code_id,n,k,t", [
    ("bch15_7", 15, 7, 2), ("bch31_16", 31, 16, 3), ("bch63_30", 63, 30, 6),
    ("bch63_45", 63, 45, 3), ("bch31_26", 31, 26, 1),
])
def test_bch_parameters(code_id, n, k, t):
    code = get_code(code_id)
    assert (code.n, code.k, code.t) == (n, k, t)


@pytest.mark.parametrize("code_id", ["bch31_16", "bch63_30"])
def test_bch_corrects_up_to_t(code_id):
    code = get_code(code_id)
    rnd = random.Random(code.n)
    for _ in range(300):
        p = Bits(rnd.getrandbits(code.k), code.k)
        w = rnd.randint(0, code.t)
        err = 0
        for i in rnd.sample(range(code.n), w):
            err |= 1 << i
        got, corrected = ecc.decode(code, ecc.encode(code, p) ^ Bits(err, code.n))
        assert got == p and corrected == w


def test_beyond_t_never_decodes_to_wrong_close_word():
    code = get_code("bch15_7")
    rnd = random.Random(3)
    for _ in range(500):
        p = Bits(rnd.getrandbits(7), 7)
        err = 0
        for i in rnd.sample(range(15), 3):
            err |= 1 << i
        try:
            q, c = ecc.decode(code, ecc.encode(code, p) ^ Bits(err, 15))
        except DecodeFailure:
            continue
        assert q != p and c <= code.t


@settings(max_examples=200)
@given(st.integers(0, (1 << 45) - 1), st.integers(0, (1 << 45) - 1))
def test_encoding_is_linear(a, b):
    code = get_code("bch63_45")
    pa, pb = Bits(a, 45), Bits(b, 45)
    assert ecc.encode(code, pa ^ pb) == ecc.encode(code, pa) ^ ecc.encode(code, pb)


@given(st.integers(0, 127))
def test_encoding_is_systematic(m):
    code = get_code("bch15_7")
    assert ecc.encode(code, Bits(m, 7)).prefix(7) == Bits(m, 7)


def test_identity_code_has_no_redundancy():
    code = get_code("identity5")
    assert ecc.encode(code, Bits(19, 5)) == Bits(19, 5)
    with pytest.raises(CodeError):
        ecc.CodeSpec(5, 5, 1, (0,) * 5)


def test_file_round_trip(tmp_path):
    for code_id in ("hamming7_4", "bch31_16", "identity4"):
        code = get_code(code_id)
        path = tmp_path / f"{code_id}.code"
        path.write_text(ecc.dump_code(code))
        loaded = ecc.load_code(path)
        assert loaded == code
        p = Bits((1 << code.k) - 3, code.k)
        assert ecc.encode(loaded, p) == ecc.encode(code, p)


def test_file_rejects_overclaimed_t():
    text = ecc.dump_code(get_code("hamming7_4")).replace("t = 1", "t = 2")
    with pytest.raises(CodeError):
        ecc.parse_code(text)


def test_unknown_code_ids():
    for bad in ("bch16_8", "bch15_9", "golay"):
        with pytest.raises(CodeError):
            get_code(bad)

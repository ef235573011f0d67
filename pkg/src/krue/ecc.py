"""Systematic binary linear codes with bounded-distance decoding.

A codeword is ``p || Red(p)`` where ``Red(p) = p * Gamma`` over GF(2) and
Gamma is the k x (n-k) redundancy part of the systematic generator.  Row
``i`` of Gamma belongs to message bit ``i`` (string index, MSB first).

Every decoder is strictly bounded-distance: it returns the codeword within
Hamming distance ``t`` of the received word if there is one and raises
:class:`DecodeFailure` otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
from pathlib import Path

from .bits import Bits
from .gf2field import clmul, poly_mod

# Primitive polynomials for the BCH locator fields.
PRIMITIVE_POLYS = {
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
}

MAX_SYNDROME_TABLE = 2_000_000


class DecodeFailure(Exception):
    """No codeword lies within the correction radius."""


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class BchParams:
    m: int
    prim_poly: int
    generator: int


@dataclass(frozen=True, eq=False)
class CodeSpec:
    n: int
    k: int
    t: int
    generator_redundancy: tuple[int, ...]
    name: str = ""
    bch: BchParams | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.n:
            raise CodeError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if self.t < 0:
            raise CodeError("t must be non-negative")
        if len(self.generator_redundancy) != self.k:
            raise CodeError(f"Gamma has {len(self.generator_redundancy)} rows, expected k={self.k}")
        r = self.n - self.k
        for row in self.generator_redundancy:
            if not 0 <= row < (1 << r) or (r == 0 and row):
                raise CodeError(f"Gamma row {row:#x} does not fit in n-k={r} bits")
        if self.t > 0 and self.n <= 20:
            d = self.min_distance()
            if d < 2 * self.t + 1:
                raise CodeError(f"minimum distance {d} cannot correct t={self.t} errors")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CodeSpec):
            return NotImplemented
        return (self.n, self.k, self.t, self.generator_redundancy) == (
            other.n, other.k, other.t, other.generator_redundancy)

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.t, self.generator_redundancy))

    @property
    def r(self) -> int:
        return self.n - self.k

    def red(self, p: int) -> int:
        """Redundancy bits of message value ``p``."""
        if self.bch is not None:
            return poly_mod(p << self.r, self.bch.generator)
        out = 0
        rows = self.generator_redundancy
        k = self.k
        while p:
            low = p & -p
            out ^= rows[k - low.bit_length()]
            p ^= low
        return out

    def min_distance(self) -> int:
        """Exhaustive minimum weight over all nonzero codewords (Gray-code walk)."""
        best = self.n
        red = 0
        rows = self.generator_redundancy
        msg = 0
        for i in range(1, 1 << self.k):
            bit = (i & -i).bit_length() - 1  # Gray code flips message bit `bit`
            msg ^= 1 << bit
            red ^= rows[self.k - 1 - bit]
            w = msg.bit_count() + red.bit_count()
            if w < best:
                best = w
        return best

    @cached_property
    def _syndrome_table(self) -> dict[int, int]:
        size = sum(comb(self.n, w) for w in range(self.t + 1))
        if size > MAX_SYNDROME_TABLE:
            raise CodeError(f"syndrome table with {size} entries is too large for {self.name or 'code'}")
        table: dict[int, int] = {}
        for w in range(self.t + 1):
            for pos in combinations(range(self.n), w):
                e = 0
                for i in pos:
                    e |= 1 << i
                s = self._syndrome_value(e)
                table.setdefault(s, e)
        return table

    def _syndrome_value(self, x: int) -> int:
        return self.red(x >> self.r) ^ (x & ((1 << self.r) - 1))


# -- operations -----------------------------------------------------------------

def _check_len(bits: Bits, expected: int, what: str) -> None:
    if bits.length != expected:
        raise ValueError(f"{what} has length {bits.length}, expected {expected}")


def encode(spec: CodeSpec, p: Bits) -> Bits:
    _check_len(p, spec.k, "message")
    return Bits((p.value << spec.r) | spec.red(p.value), spec.n)


def syndrome(spec: CodeSpec, x: Bits) -> Bits:
    _check_len(x, spec.n, "received word")
    return Bits(spec._syndrome_value(x.value), spec.r)


def decode(spec: CodeSpec, x: Bits) -> tuple[Bits, int]:
    """Bounded-distance decode; returns (message, number of corrected bits)."""
    _check_len(x, spec.n, "received word")
    if spec.r == 0:
        return x, 0
    if spec.bch is not None:
        err = _bch_error(spec, x.value)
    else:
        s = spec._syndrome_value(x.value)
        try:
            err = spec._syndrome_table[s]
        except KeyError:
            raise DecodeFailure(f"syndrome {s:#x} has no coset leader of weight <= {spec.t}") from None
    corrected = x.value ^ err
    return Bits(corrected >> spec.r, spec.k), err.bit_count()


def brute_force_decode(spec: CodeSpec, x: Bits) -> Bits:
    """Nearest-codeword search; ties go to the smallest message."""
    _check_len(x, spec.n, "received word")
    if spec.n > 24:
        raise ValueError("brute force decoding is limited to n <= 24")
    best_d, best_p = spec.n + 1, 0
    for p in range(1 << spec.k):
        d = (((p << spec.r) | spec.red(p)) ^ x.value).bit_count()
        if d < best_d:
            best_d, best_p = d, p
    if best_d > spec.t:
        raise DecodeFailure(f"nearest codeword at distance {best_d} > t={spec.t}")
    return Bits(best_p, spec.k)


# -- BCH -----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _gf_tables(m: int) -> tuple[list[int], list[int]]:
    prim = PRIMITIVE_POLYS[m]
    q = (1 << m) - 1
    exp = [0] * (2 * q)
    log = [0] * (q + 1)
    a = 1
    for i in range(q):
        exp[i] = a
        log[a] = i
        a <<= 1
        if a >> m:
            a ^= prim
    if a != 1 or len(set(exp[:q])) != q:
        raise CodeError(f"polynomial {prim:#x} is not primitive")
    exp[q:] = exp[:q]
    return exp, log


def _gmul(a: int, b: int, exp: list[int], log: list[int]) -> int:
    if a == 0 or b == 0:
        return 0
    return exp[log[a] + log[b]]


def _bch_generator(m: int, t: int) -> int:
    q = (1 << m) - 1
    exp, log = _gf_tables(m)
    roots: set[int] = set()
    for j in range(1, 2 * t + 1):
        e = j % q
        while e not in roots:
            roots.add(e)
            e = (2 * e) % q
    # product of (x - alpha^e) with GF(2^m) coefficients, lowest degree first
    g = [1]
    for e in sorted(roots):
        root = exp[e]
        nxt = [0] * (len(g) + 1)
        for i, c in enumerate(g):
            nxt[i + 1] ^= c
            nxt[i] ^= _gmul(c, root, exp, log)
        g = nxt
    if any(c > 1 for c in g):
        raise CodeError("BCH generator has non-binary coefficients")  # pragma: no cover
    return sum(c << i for i, c in enumerate(g))


def bch_code(m: int, t: int, name: str | None = None) -> CodeSpec:
    """Narrow-sense primitive BCH code of length 2^m - 1 correcting t errors."""
    n = (1 << m) - 1
    g = _bch_generator(m, t)
    r = g.bit_length() - 1
    k = n - r
    if k < 1:
        raise CodeError(f"BCH(m={m}, t={t}) has no message bits")
    rows = tuple(poly_mod(1 << (k - 1 - i + r), g) for i in range(k))
    return CodeSpec(n, k, t, rows, name or f"bch{n}_{k}", BchParams(m, PRIMITIVE_POLYS[m], g))


def _bch_error(spec: CodeSpec, x: int) -> int:
    bch = spec.bch
    assert bch is not None
    m, t, n = bch.m, spec.t, spec.n
    q = (1 << m) - 1
    exp, log = _gf_tables(m)

    positions = []
    v = x
    while v:
        low = v & -v
        positions.append(low.bit_length() - 1)
        v ^= low
    synd = []
    for j in range(1, 2 * t + 1):
        s = 0
        for i in positions:
            s ^= exp[(i * j) % q]
        synd.append(s)
    if not any(synd):
        return 0

    # Berlekamp-Massey
    C, B = [1], [1]
    L, shift, b = 0, 1, 1
    for step in range(2 * t):
        d = synd[step]
        for i in range(1, L + 1):
            if i < len(C):
                d ^= _gmul(C[i], synd[step - i], exp, log)
        if d == 0:
            shift += 1
            continue
        coef = _gmul(d, exp[(q - log[b]) % q], exp, log)
        T = list(C)
        need = len(B) + shift
        if len(C) < need:
            C.extend([0] * (need - len(C)))
        for i, bi in enumerate(B):
            C[i + shift] ^= _gmul(coef, bi, exp, log)
        if 2 * L <= step:
            L = step + 1 - L
            B, b, shift = T, d, 1
        else:
            shift += 1
    while len(C) > 1 and C[-1] == 0:
        C.pop()
    if L > t or len(C) - 1 != L:
        raise DecodeFailure(f"error locator degree {L} exceeds t={t}")

    # Chien search: position i is in error iff Lambda(alpha^-i) = 0
    err = 0
    found = 0
    for i in range(n):
        acc = 0
        for j, c in enumerate(C):
            if c:
                acc ^= exp[(log[c] - i * j) % q]
        if acc == 0:
            err |= 1 << i
            found += 1
    if found != L:
        raise DecodeFailure("error locator does not split over the field")
    if spec._syndrome_value(x ^ err):
        raise DecodeFailure("correction did not reach a codeword")  # pragma: no cover
    return err


# -- registry --------------------------------------------------------------------

HAMMING_7_4_GAMMA = (0b110, 0b101, 0b011, 0b111)


def identity_code(k: int) -> CodeSpec:
    return CodeSpec(k, k, 0, (0,) * k, f"identity{k}")


def hamming_blocks(blocks: int = 1) -> CodeSpec:
    """[7,4] Hamming code repeated over ``blocks`` message chunks (t = 1 overall)."""
    k, r = 4 * blocks, 3 * blocks
    rows = []
    for blk in range(blocks):
        for row in HAMMING_7_4_GAMMA:
            rows.append(row << (3 * (blocks - 1 - blk)))
    name = "hamming7_4" if blocks == 1 else f"hamming7_4x{blocks}"
    return CodeSpec(k + r, k, 1, tuple(rows), name)


@lru_cache(maxsize=None)
def get_code(code_id: str) -> CodeSpec:
    """Look up a code by id: ``identityK``, ``hamming7_4[xB]`` or ``bchN_K``."""
    if mo := re.fullmatch(r"identity[-_]?(\d+)", code_id):
        return identity_code(int(mo.group(1)))
    if mo := re.fullmatch(r"hamming7_4(?:x(\d+))?", code_id):
        return hamming_blocks(int(mo.group(1) or 1))
    if mo := re.fullmatch(r"bch(\d+)_(\d+)", code_id):
        n, k = int(mo.group(1)), int(mo.group(2))
        m = (n + 1).bit_length() - 1
        if (1 << m) - 1 != n or m not in PRIMITIVE_POLYS:
            raise CodeError(f"no primitive BCH code of length {n}")
        for t in range(1, n // 2 + 1):
            g = _bch_generator(m, t)
            dim = n - (g.bit_length() - 1)
            if dim == k:
                return bch_code(m, t, code_id)
            if dim < k:
                break
        raise CodeError(f"no narrow-sense BCH code with n={n}, k={k}")
    raise CodeError(f"unknown code id {code_id!r}")


# -- file format -----------------------------------------------------------------

def dump_code(spec: CodeSpec) -> str:
    lines = [f"n = {spec.n}", f"k = {spec.k}", f"t = {spec.t}"]
    if spec.name:
        lines.insert(0, f"name = {spec.name}")
    width = (spec.r + 3) // 4
    lines += [f"row = {row:0{width}x}" if spec.r else "row = " for row in spec.generator_redundancy]
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> CodeSpec:
    """Parse ``key = value`` lines (n, k, t, optional name, one ``row`` per Gamma row in hex)."""
    fields: dict[str, str] = {}
    rows: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CodeError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "row":
            rows.append(int(value, 16) if value else 0)
        elif key in ("n", "k", "t", "name"):
            fields[key] = value
        else:
            raise CodeError(f"line {lineno}: unknown key {key!r}")
    missing = {"n", "k", "t"} - fields.keys()
    if missing:
        raise CodeError(f"missing fields: {sorted(missing)}")
    try:
        n, k, t = int(fields["n"]), int(fields["k"]), int(fields["t"])
    except ValueError as exc:
        raise CodeError(str(exc)) from None
    return CodeSpec(n, k, t, tuple(rows), fields.get("name", ""))


def load_code(path: str | Path) -> CodeSpec:
    return parse_code(Path(path).read_text())

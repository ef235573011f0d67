"""Exhaustive small-parameter self checks run by ``krue selftest``."""

from __future__ import annotations

import itertools
import random
from typing import Callable

import numpy as np

from . import ecc, gf2field, invhash
from .analysis import correctable, p_corr
from .bits import Bits


class SelfTestFailure(AssertionError):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise SelfTestFailure(msg)


def _mul_table(spec: gf2field.FieldSpec) -> np.ndarray:
    size = spec.order
    tab = np.zeros((size, size), dtype=np.int64)
    for a in range(size):
        ea = spec.element(a)
        for b in range(a, size):
            tab[a, b] = tab[b, a] = (ea * spec.element(b)).value
    return tab


def field_axioms() -> None:
    for nu, poly in sorted(gf2field.REDUCTION_POLYS.items()):
        _require(gf2field.degree(poly) == nu, f"table entry for nu={nu} has wrong degree")
        ok = gf2field.is_irreducible_trial(poly) if nu <= 32 else gf2field.is_irreducible(poly)
        _require(ok, f"table polynomial for nu={nu} is reducible")
    for nu in (4, 8):
        spec = gf2field.FieldSpec(nu, gf2field.REDUCTION_POLYS[nu])
        tab = _mul_table(spec)
        elems = np.arange(spec.order)
        _require(bool(np.all(tab[1] == elems)), f"GF(2^{nu}): 1 is not the identity")
        _require(bool(np.all(tab[0] == 0)), f"GF(2^{nu}): 0 is not absorbing")
        xor = elems[:, None] ^ elems[None, :]
        for a in range(spec.order):
            row = tab[a]
            _require(bool(np.array_equal(tab[row], row[tab])), f"GF(2^{nu}): associativity fails at a={a}")
            _require(bool(np.array_equal(row[xor], row[:, None] ^ row[None, :])),
                     f"GF(2^{nu}): distributivity fails at a={a}")
        for a in range(1, spec.order):
            _require((spec.element(a) * spec.element(a).inv()).value == 1, f"GF(2^{nu}): bad inverse of {a}")


def _hash_counts(nu: int, ell: int, x: int, x2: int) -> np.ndarray:
    spec = gf2field.field_spec(nu)
    counts = np.zeros((1 << ell, 1 << ell), dtype=int)
    for u in range(1 << nu):
        fu = spec.element(u)
        y = (fu * spec.element(x)).value >> (nu - ell)
        y2 = (fu * spec.element(x2)).value >> (nu - ell)
        counts[y, y2] += 1
    return counts


def hash_pairwise(nu: int = 4, ell: int = 2) -> None:
    """Strict pairwise independence: one key per (x != x', y, y') cell.

    This is known not to hold for the bare prefix-of-product family (x = 0
    always hashes to 0, for a start); the suite reports it as measured.
    """
    bad = [(x, x2) for x, x2 in itertools.permutations(range(1 << nu), 2)
           if not np.all(_hash_counts(nu, ell, x, x2) == 1)]
    _require(not bad, f"pairwise independence fails for {len(bad)} of {(1 << nu) * ((1 << nu) - 1)} "
                      f"input pairs, first x={bad[0][0] if bad else 0}, x'={bad[0][1] if bad else 0}")


def hash_universal(nu: int = 4, ell: int = 2) -> None:
    """Collision bound: at most 2^(nu - ell) keys collide any x != x'."""
    for x, x2 in itertools.combinations(range(1 << nu), 2):
        coll = int(np.trace(_hash_counts(nu, ell, x, x2)))
        _require(coll <= 1 << (nu - ell), f"{coll} keys collide x={x}, x'={x2}")


def hash_inversion(nu: int = 4, ell: int = 2) -> None:
    spec = gf2field.field_spec(nu)
    for u in range(1, 1 << nu):
        fu = spec.element(u)
        for c in range(1 << ell):
            for r in range(1 << (nu - ell)):
                p = invhash.invert(fu, Bits(c, ell), Bits(r, nu - ell))
                _require(invhash.pa(fu, p, ell).value == c, f"inversion identity fails for u={u}")


def decode_vs_bruteforce() -> None:
    for code_id in ("identity8", "hamming7_4", "bch15_7"):
        code = ecc.get_code(code_id)
        words = range(1 << code.n) if code.n <= 12 else random.Random(0).sample(range(1 << code.n), 2000)
        for w in words:
            x = Bits(w, code.n)
            try:
                got = ecc.decode(code, x)[0]
            except ecc.DecodeFailure:
                got = None
            try:
                want = ecc.brute_force_decode(code, x)
            except ecc.DecodeFailure:
                want = None
            _require(got == want, f"{code_id}: decode disagrees with brute force on {x}")


def pcorr_enumeration() -> None:
    rng = random.Random(4)
    for n in (8, 12, 16):
        weights = np.array([bin(e).count("1") for e in range(1 << n)])
        for _ in range(5):
            beta, gamma = rng.uniform(0, 0.5), rng.uniform(0, 0.5)
            mask = weights <= correctable(n, beta)
            probs = gamma ** weights * (1 - gamma) ** (n - weights)
            want = float(np.sum(probs[mask]))
            _require(abs(p_corr(n, beta, gamma) - want) < 1e-12, f"p_corr({n}, {beta}, {gamma}) off")


SUITES: dict[str, Callable[[], None]] = {
    "field-axioms": field_axioms,
    "hash-pairwise": hash_pairwise,
    "hash-universal": hash_universal,
    "hash-inversion": hash_inversion,
    "decode-bruteforce": decode_vs_bruteforce,
    "pcorr-enumeration": pcorr_enumeration,
}


def run_all() -> list[tuple[str, bool, str]]:
    results = []
    for name, fn in SUITES.items():
        try:
            fn()
        except Exception as exc:  # a crashing suite is a failing suite
            results.append((name, False, f"{type(exc).__name__}: {exc}"))
        else:
            results.append((name, True, ""))
    return results

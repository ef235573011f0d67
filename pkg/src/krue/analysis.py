"""Closed-form rates, thresholds and probabilities.

All rates are asymptotic message bits per qubit.  ``h`` is the binary
entropy and, for 6-state encoding, ``H = h(1 - 3b/2, b/2, b/2, b/2)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, TextIO

from .channel import Encoding

SCHEMES = (
    "qkd_otp",
    "qkr",
    "qkd_gottesman",
    "qkr_gottesman",
    "krue",
    "qkd_krue_star",
    "qkr_krue_star",
)
ENCODINGS = (Encoding.FOUR_STATE, Encoding.SIX_STATE)

# guards floor(n*beta) against 63 * (6/63) = 5.999...
_FLOOR_EPS = 1e-9


class NoCrossover(ValueError):
    pass


class RateExhausted(ValueError):
    pass


def entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    return entropy_multi(p, 1.0 - p)


def entropy_multi(*ps: float) -> float:
    """Sum of p*log2(1/p); zero-probability terms contribute nothing."""
    if any(p < 0.0 or p > 1.0 for p in ps):
        raise ValueError(f"probabilities {ps} outside [0, 1]")
    if sum(ps) > 1.0 + 1e-9:
        raise ValueError(f"probabilities {ps} sum to more than 1")
    return sum(-p * math.log2(p) for p in ps if p > 0.0)


def six_state_entropy(beta: float) -> float:
    if not 0.0 <= beta <= 2.0 / 3.0:
        raise ValueError(f"beta={beta} outside [0, 2/3] for 6-state entropy")
    return entropy_multi(1.0 - 1.5 * beta, beta / 2, beta / 2, beta / 2)


def correctable(n: int, beta: float) -> int:
    """floor(n * beta), tolerant of float round-off just below an integer."""
    return math.floor(n * beta + _FLOOR_EPS)


def p_corr(n: int, beta: float, gamma: float) -> float:
    """Probability that at most floor(n*beta) of n bits flip at rate gamma."""
    if n < 1:
        raise ValueError("n must be positive")
    if not (0.0 <= beta <= 1.0 and 0.0 <= gamma <= 1.0):
        raise ValueError("rates must lie in [0, 1]")
    cmax = min(correctable(n, beta), n)
    if gamma == 0.0:
        return 1.0
    if gamma == 1.0:
        return 1.0 if cmax >= n else 0.0
    lg, lq = math.log(gamma), math.log1p(-gamma)
    logs = [math.log(math.comb(n, c)) + c * lg + (n - c) * lq for c in range(cmax + 1)]
    top = max(logs)
    return min(1.0, math.exp(top) * math.fsum(math.exp(v - top) for v in logs))


# -- rates ---------------------------------------------------------------------

def _qkd(beta: float, enc: Encoding) -> float:
    if enc is Encoding.FOUR_STATE:
        return 1.0 - 2.0 * entropy(beta)
    return 1.0 - six_state_entropy(beta)


def _krue_star_combo(beta: float, enc: Encoding) -> float:
    # syndrome of n*h bits re-supplied by QKD: L(r + h)/r^2 qubits for L bits.
    # r*|r| keeps the sign so the curve goes negative past the QKD threshold.
    r = _qkd(beta, enc)
    return r * abs(r) / (r + entropy(beta))


def _gottesman_combo(beta: float, enc: Encoding) -> float:
    # L/r qubits for the UE step plus (L/r)/r to refresh its key by QKD
    r = _qkd(beta, enc)
    return r * abs(r) / (1.0 + r)


_RATE_FUNCS: dict[str, Callable[[float, Encoding], float]] = {
    "qkd_otp": _qkd,
    "qkr": _qkd,
    "qkd_gottesman": _gottesman_combo,
    "qkr_gottesman": _gottesman_combo,
    "krue": lambda b, e: _qkd(b, e) - entropy(b),
    "qkd_krue_star": _krue_star_combo,
    "qkr_krue_star": _krue_star_combo,
}


def rate(scheme: str, beta: float, encoding: Encoding | str = Encoding.FOUR_STATE) -> float:
    """Raw (unclamped) asymptotic rate of ``scheme`` at noise level ``beta``."""
    if not 0.0 <= beta < 0.5:
        raise ValueError(f"beta={beta} outside [0, 1/2)")
    try:
        f = _RATE_FUNCS[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}") from None
    return f(beta, Encoding.parse(encoding))


def ell_max_ue(beta: float, encoding: Encoding | str) -> float:
    """UE threshold on ell, per qubit."""
    return _qkd(beta, Encoding.parse(encoding))


def ell_max_kr(beta: float, encoding: Encoding | str) -> float:
    """KR threshold on ell, per qubit (k ~ n(1 - h))."""
    h = entropy(beta)
    if Encoding.parse(encoding) is Encoding.FOUR_STATE:
        return (1.0 - h) ** 2
    return (1.0 - h) * (1.0 + h - six_state_entropy(beta))


def ell_max_qkd(beta: float, encoding: Encoding | str) -> float:
    """QKD threshold with the syndrome one-time padded, per qubit."""
    h = entropy(beta)
    if Encoding.parse(encoding) is Encoding.FOUR_STATE:
        return 1.0 - h
    return 1.0 + h - six_state_entropy(beta)


@dataclass
class RateReport:
    beta: float
    rates: dict[Encoding, dict[str, float]] = field(default_factory=dict)
    ell_max_ue: dict[Encoding, float] = field(default_factory=dict)
    ell_max_kr: dict[Encoding, float] = field(default_factory=dict)

    def get(self, scheme: str, encoding: Encoding | str = Encoding.FOUR_STATE) -> float:
        return self.rates[Encoding.parse(encoding)][scheme]

    def clamped(self, scheme: str, encoding: Encoding | str = Encoding.FOUR_STATE) -> float:
        return max(0.0, self.get(scheme, encoding))


def rates(beta: float, encodings: Iterable[Encoding | str] = ENCODINGS) -> RateReport:
    report = RateReport(beta)
    for enc in map(Encoding.parse, encodings):
        report.rates[enc] = {s: rate(s, beta, enc) for s in SCHEMES}
        report.ell_max_ue[enc] = ell_max_ue(beta, enc)
        report.ell_max_kr[enc] = ell_max_kr(beta, enc)
    return report


# -- root finding ----------------------------------------------------------------

BETA_SUP = 0.49


def _bisect(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0) and fm != 0:
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rate_zero(scheme: str, encoding: Encoding | str = Encoding.FOUR_STATE, tol: float = 1e-9) -> float:
    """Smallest beta where the scheme's rate reaches 0 (BETA_SUP if it stays positive)."""
    f = lambda b: rate(scheme, b, encoding)
    if f(BETA_SUP) > 0:
        return BETA_SUP
    return _bisect(f, 0.0, BETA_SUP, tol)


def crossover(scheme_a: str, scheme_b: str, encoding: Encoding | str = Encoding.FOUR_STATE,
              tol: float = 1e-6) -> float:
    """Noise level where two rate curves cross, searched on (0, first zero of either)."""
    enc = Encoding.parse(encoding)
    diff = lambda b: rate(scheme_a, b, enc) - rate(scheme_b, b, enc)
    lo = 1e-9
    hi = min(rate_zero(scheme_a, enc), rate_zero(scheme_b, enc))
    d_lo, d_hi = diff(lo), diff(hi)
    if d_lo == 0.0 or d_hi == 0.0 or (d_lo > 0) == (d_hi > 0):
        raise NoCrossover(f"{scheme_a} and {scheme_b} do not cross on (0, {hi:.6f})")
    return _bisect(diff, lo, hi, tol)


# -- key sizes -------------------------------------------------------------------

def key_size(beta: float, message_bits: float, encoding: Encoding | str, scheme: str) -> float:
    """Leading-order key size in bits for sending ``message_bits`` bits.

    ``krue`` counts z, u, b and e for either encoding; ``qkr_krue_star`` and
    the Gottesman combination are four-state only.
    """
    enc = Encoding.parse(encoding)
    h = entropy(beta)
    if scheme == "krue":
        r = rate("krue", beta, enc)
        if r <= 0:
            raise RateExhausted(f"krue rate {r:.6f} <= 0 at beta={beta}")
        # ell + n + n log|B| with ell ~ L + n h, n ~ L / r
        return message_bits * (r + 1.0 + h + math.log2(enc.basis_count)) / r
    if enc is not Encoding.FOUR_STATE:
        raise ValueError(f"key size for {scheme!r} is only defined for four-state encoding")
    r = 1.0 - 2.0 * h
    if r <= 0:
        raise RateExhausted(f"QKD rate {r:.6f} <= 0 at beta={beta}")
    if scheme == "qkr_krue_star":
        return message_bits * (1.0 + 2.0 / (r * r))
    if scheme in ("gottesman", "qkd_gottesman", "qkr_gottesman"):
        return message_bits * (2.0 - h) / r
    raise ValueError(f"no key-size formula for scheme {scheme!r}")


# -- tables ----------------------------------------------------------------------

RATE_CSV_HEADER = ("beta", "scheme", "encoding", "rate", "rate_clamped")


def rate_table(betas: Iterable[float], encoding: Encoding | str = Encoding.FOUR_STATE) -> list[tuple]:
    enc = Encoding.parse(encoding)
    rows = []
    for b in betas:
        if not 0.0 <= b <= 0.25:
            raise ValueError(f"grid point {b} outside [0, 0.25]")
        for s in SCHEMES:
            r = rate(s, b, enc)
            rows.append((b, s, enc.value, r, max(0.0, r)))
    return rows


def write_rate_csv(rows: Iterable[tuple], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(RATE_CSV_HEADER)
    for b, s, e, r, rc in rows:
        w.writerow((f"{b:.6f}", s, e, f"{r:.6f}", f"{rc:.6f}"))


def rate_csv(betas: Iterable[float], encoding: Encoding | str = Encoding.FOUR_STATE) -> str:
    buf = io.StringIO()
    write_rate_csv(rate_table(betas, encoding), buf)
    return buf.getvalue()

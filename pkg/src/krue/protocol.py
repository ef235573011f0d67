"""One KRUE round and the N-round session built on it.

Alice encrypts by running privacy amplification backwards: the masked,
authenticated message is extended with random filler, divided by the hash
seed, encoded and its redundancy masked.  Bob undoes each step, checks the
tag and answers with an encrypted, authenticated accept/reject bit.  On
accept both sides keep b, u, k_MAC and z and take the next feedback keys
and redundancy mask from the transported kappa; on reject everything but
b, u, k_MAC is refreshed from the shared reservoir.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field, replace
from typing import Any, NamedTuple, Sequence

import numpy as np

from . import ecc, invhash, mac
from .analysis import correctable
from .bits import Bits, random_bits
from .channel import BasisSeq, ChannelModel, Encoding, transmit
from .ecc import CodeSpec, DecodeFailure
from .gf2field import FieldElement, field_spec
from .invhash import HashSpec
from .mac import MacSpec

# Round temporaries that must never reach persisted state.
EPHEMERAL_FIELDS = frozenset({"c", "r", "p", "x", "x_prime", "s", "t", "p_hat", "c_hat"})


class ParameterError(ValueError):
    pass


class KeyExhausted(RuntimeError):
    """The reservoir has no fresh key material left."""


@dataclass(frozen=True)
class ProtocolParams:
    n: int
    k: int
    ell: int
    lam: int
    beta: float
    encoding: Encoding
    code: CodeSpec
    N: int = 1

    def __post_init__(self) -> None:
        n, k, ell, lam = self.n, self.k, self.ell, self.lam
        if self.code.n != n or self.code.k != k:
            raise ParameterError(f"code is [{self.code.n},{self.code.k}] but params say n={n}, k={k}")
        if not ell <= k <= n:
            raise ParameterError(f"need ell <= k <= n, got ell={ell}, k={k}, n={n}")
        if lam < 1:
            raise ParameterError("lambda must be positive")
        if ell <= (n - k) + 2 * lam + 1:
            raise ParameterError(
                f"ell={ell} leaves no message bits: need ell > (n-k) + 2*lambda + 1 = {(n - k) + 2 * lam + 1}")
        if not 0.0 <= self.beta < 0.5:
            raise ParameterError(f"beta={self.beta} outside [0, 1/2)")
        if self.code.t < correctable(n, self.beta):
            raise ParameterError(f"code corrects t={self.code.t} < floor(n*beta)={correctable(n, self.beta)} errors")
        if self.N < 1:
            raise ParameterError("N must be at least 1")

    @classmethod
    def for_code(cls, code: CodeSpec | str, *, lam: int = 8, ell: int | None = None, beta: float | None = None,
                 encoding: Encoding | str = Encoding.FOUR_STATE, N: int = 1) -> ProtocolParams:
        """Params for ``code`` with ell = k and beta = t/n unless given."""
        if isinstance(code, str):
            code = ecc.get_code(code)
        return cls(code.n, code.k, code.k if ell is None else ell, lam,
                   code.t / code.n if beta is None else beta, Encoding.parse(encoding), code, N)

    @property
    def mu_len(self) -> int:
        return self.ell - (self.n - self.k) - 2 * self.lam - 1

    @property
    def kappa_len(self) -> int:
        return self.lam + 1 + (self.n - self.k)

    @property
    def filler_len(self) -> int:
        return self.k - self.ell

    @property
    def refresh_bits(self) -> int:
        """Reservoir bits consumed by one reject: z, k_fb, k_OTP, e."""
        return self.ell + self.lam + 1 + (self.n - self.k)

    @property
    def hash_spec(self) -> HashSpec:
        return HashSpec(self.k, self.ell, field_spec(self.k))

    @property
    def mac_spec(self) -> MacSpec:
        return MacSpec.make(self.lam, self.ell - self.lam)

    @property
    def feedback_mac_spec(self) -> MacSpec:
        return MacSpec.make(self.lam, 1)


@dataclass(frozen=True)
class KeyBundle:
    z: Bits
    k_mac: Bits
    b: BasisSeq
    k_fb: Bits
    k_otp: int
    u: FieldElement
    e: Bits

    def validate(self, params: ProtocolParams) -> None:
        expect = {"z": params.ell, "k_mac": params.lam, "k_fb": params.lam, "e": params.n - params.k}
        for name, length in expect.items():
            if getattr(self, name).length != length:
                raise ParameterError(f"key {name} has length {getattr(self, name).length}, expected {length}")
        if len(self.b) != params.n or self.b.basis_count != params.encoding.basis_count:
            raise ParameterError("basis sequence does not match params")
        if self.k_otp not in (0, 1):
            raise ParameterError("k_otp must be a single bit")
        if self.u.spec.nu != params.k or not self.u:
            raise ParameterError("hash seed u must be a nonzero element of GF(2^k)")

    def to_dict(self) -> dict[str, Any]:
        return {
            "z": str(self.z),
            "k_mac": str(self.k_mac),
            "b": "".join(map(str, self.b.bases)),
            "k_fb": str(self.k_fb),
            "k_otp": self.k_otp,
            "u": str(self.u.bits),
            "e": str(self.e),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any], params: ProtocolParams) -> KeyBundle:
        f = field_spec(params.k)
        return cls(
            z=Bits.from_str(d["z"]),
            k_mac=Bits.from_str(d["k_mac"]),
            b=BasisSeq(tuple(int(c) for c in d["b"]), params.encoding.basis_count),
            k_fb=Bits.from_str(d["k_fb"]),
            k_otp=int(d["k_otp"]),
            u=f.element(Bits.from_str(d["u"])),
            e=Bits.from_str(d["e"]),
        )


def random_nonzero_seed(rng: np.random.Generator, k: int) -> FieldElement:
    f = field_spec(k)
    while True:
        u = random_bits(rng, k)
        if u.value:
            return f.element(u)


def initial_keys(params: ProtocolParams, rng: np.random.Generator) -> KeyBundle:
    return KeyBundle(
        z=random_bits(rng, params.ell),
        k_mac=random_bits(rng, params.lam),
        b=BasisSeq.random(rng, params.n, params.encoding),
        k_fb=random_bits(rng, params.lam),
        k_otp=random_bits(rng, 1).value,
        u=random_nonzero_seed(rng, params.k),
        e=random_bits(rng, params.n - params.k),
    )


class KeyReservoir:
    """Deterministic stream of spare key bits shared by both parties.

    Bits come out in the same order however the draws are chunked, so two
    reservoirs built from the same seed stay identical as long as they are
    drawn from identically.
    """

    def __init__(self, seed: int, capacity: int | None = None):
        self.seed = seed
        self.capacity = capacity
        self.consumed = 0
        self._gen = np.random.Generator(np.random.PCG64(seed))
        self._buf = 0
        self._buf_bits = 0

    def draw(self, nbits: int) -> Bits:
        if self.capacity is not None and self.consumed + nbits > self.capacity:
            raise KeyExhausted(
                f"reservoir holds {self.capacity - self.consumed} bits, {nbits} requested")
        while self._buf_bits < nbits:
            self._buf = (self._buf << 64) | int.from_bytes(self._gen.bytes(8), "big")
            self._buf_bits += 64
        self._buf_bits -= nbits
        out = self._buf >> self._buf_bits
        self._buf &= (1 << self._buf_bits) - 1
        self.consumed += nbits
        return Bits(out, nbits)

    @classmethod
    def restore(cls, seed: int, consumed: int, capacity: int | None = None) -> KeyReservoir:
        res = cls(seed, capacity)
        if consumed:
            res.draw(consumed)
        return res


@dataclass(frozen=True)
class AugmentedMessage:
    mu: Bits
    kappa: Bits
    tau: Bits

    def serialize(self) -> Bits:
        return self.mu.concat(self.kappa, self.tau)

    def next_keys(self, params: ProtocolParams) -> tuple[Bits, int, Bits]:
        return split_kappa(params, self.kappa)


def split_kappa(params: ProtocolParams, kappa: Bits) -> tuple[Bits, int, Bits]:
    """kappa = k_fb' || k_otp' || e'."""
    k_fb, k_otp, e = kappa.split([params.lam, 1, params.n - params.k])
    return k_fb, k_otp.value, e


@dataclass
class RoundTranscript:
    masked_omega: int
    tau_fb: Bits
    internal: dict[str, Any] = field(default_factory=dict, repr=False)

    def public(self) -> dict[str, Any]:
        return {"masked_omega": self.masked_omega, "tau_fb": str(self.tau_fb)}


class Decryption(NamedTuple):
    omega: int
    mu: Bits | None
    kappa: Bits | None
    internal: dict[str, Any]


def _redundancy_mask(params: ProtocolParams, keys: KeyBundle) -> Bits:
    return Bits.zeros(params.k).concat(keys.e)


def alice_encrypt(params: ProtocolParams, keys: KeyBundle, mu: Bits, rng: np.random.Generator,
                  trace: dict[str, Any] | None = None) -> tuple[Bits, AugmentedMessage]:
    if mu.length != params.mu_len:
        raise ParameterError(f"message has length {mu.length}, expected {params.mu_len}")
    kappa = random_bits(rng, params.kappa_len)
    r = random_bits(rng, params.filler_len)
    body = mu.concat(kappa)
    tau = mac.tag(params.mac_spec, keys.k_mac, body)
    pending = AugmentedMessage(mu, kappa, tau)
    c = keys.z ^ pending.serialize()
    p = invhash.invert(keys.u, c, r)
    x = ecc.encode(params.code, p) ^ _redundancy_mask(params, keys)
    if trace is not None:
        trace.update(c=c, r=r, p=p, x=x)
    return x, pending


def bob_decrypt(params: ProtocolParams, keys: KeyBundle, x_prime: Bits) -> Decryption:
    if x_prime.length != params.n:
        raise ParameterError(f"received {x_prime.length} bits, expected {params.n}")
    internal: dict[str, Any] = {"x_prime": x_prime}
    try:
        p_hat, corrected = ecc.decode(params.code, x_prime ^ _redundancy_mask(params, keys))
    except DecodeFailure:
        internal.update(omega=0, corrected=None)
        return Decryption(0, None, None, internal)
    c_hat = invhash.pa(keys.u, p_hat, params.ell)
    mu_hat, kappa_hat, tau_hat = (c_hat ^ keys.z).split([params.mu_len, params.kappa_len, params.lam])
    omega = int(mac.verify(params.mac_spec, keys.k_mac, mu_hat.concat(kappa_hat), tau_hat))
    internal.update(p_hat=p_hat, c_hat=c_hat, omega=omega, corrected=corrected)
    if not omega:
        return Decryption(0, None, None, internal)
    return Decryption(1, mu_hat, kappa_hat, internal)


def feedback(params: ProtocolParams, keys: KeyBundle, omega: int) -> tuple[int, Bits]:
    masked = omega ^ keys.k_otp
    return masked, mac.tag_feedback(params.feedback_mac_spec, keys.k_fb, masked)


def receive_feedback(params: ProtocolParams, keys: KeyBundle, masked: int, tau_fb: Bits) -> tuple[int, bool]:
    """Alice's side: (omega, tag_ok).  A bad tag is treated as reject."""
    ok = mac.verify_feedback(params.feedback_mac_spec, keys.k_fb, masked, tau_fb)
    return (masked ^ keys.k_otp if ok else 0), ok


def key_update(params: ProtocolParams, keys: KeyBundle, omega: int, kappa: Bits | None,
               reservoir: KeyReservoir) -> KeyBundle:
    if omega:
        if kappa is None or kappa.length != params.kappa_len:
            raise ParameterError("accept requires this round's kappa")
        k_fb, k_otp, e = split_kappa(params, kappa)
        return replace(keys, k_fb=k_fb, k_otp=k_otp, e=e)
    fresh = reservoir.draw(params.refresh_bits)
    z, k_fb, k_otp, e = fresh.split([params.ell, params.lam, 1, params.n - params.k])
    return replace(keys, z=z, k_fb=k_fb, k_otp=k_otp.value, e=e)


# -- session ---------------------------------------------------------------------

@dataclass(frozen=True)
class RoundRecord:
    round: int
    omega: int
    recovered: bool
    errors_corrected: int | None
    reservoir_bits_used: int
    feedback_ok: bool = True
    in_sync: bool = True


CSV_HEADER = ("round", "omega", "recovered", "errors_corrected", "reservoir_bits_used")


@dataclass
class SessionReport:
    params: ProtocolParams
    rounds: list[RoundRecord] = field(default_factory=list)

    @property
    def accept_rate(self) -> float:
        return sum(r.omega for r in self.rounds) / len(self.rounds) if self.rounds else 0.0

    @property
    def msgs_recovered(self) -> int:
        return sum(r.recovered for r in self.rounds)

    @property
    def reservoir_bits(self) -> int:
        return sum(r.reservoir_bits_used for r in self.rounds)

    @property
    def rejects(self) -> int:
        return sum(1 for r in self.rounds if not r.omega)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rounds:
            w.writerow((r.round, r.omega, int(r.recovered),
                        -1 if r.errors_corrected is None else r.errors_corrected, r.reservoir_bits_used))
        return buf.getvalue()

    def summary(self) -> str:
        return (f"accept_rate={self.accept_rate:.6f} msgs_recovered={self.msgs_recovered}/{len(self.rounds)} "
                f"reservoir_bits={self.reservoir_bits}")


def _derive_seeds(seed: int) -> dict[str, np.random.SeedSequence]:
    names = ("keys", "reservoir", "alice", "channel", "messages")
    return dict(zip(names, np.random.SeedSequence(seed).spawn(len(names))))


@dataclass
class SessionState:
    """Persistable between-round state: keys and reservoir positions only."""

    seed: int
    round: int
    alice_keys: dict[str, Any]
    bob_keys: dict[str, Any]
    alice_reservoir_consumed: int
    bob_reservoir_consumed: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> SessionState:
        return cls(**json.loads(text))


class Session:
    """Alice, Bob and the shared reservoir running rounds in sequence."""

    def __init__(self, params: ProtocolParams, seed: int, reservoir_capacity: int | None = None):
        self.params = params
        self.seed = seed
        seeds = _derive_seeds(seed)
        self.alice_keys = initial_keys(params, np.random.default_rng(seeds["keys"]))
        self.bob_keys = self.alice_keys
        res_seed = int(seeds["reservoir"].generate_state(1, np.uint64)[0])
        self.alice_reservoir = KeyReservoir(res_seed, reservoir_capacity)
        self.bob_reservoir = KeyReservoir(res_seed, reservoir_capacity)
        self.alice_rng = np.random.default_rng(seeds["alice"])
        self.channel_rng = np.random.default_rng(seeds["channel"])
        self.message_rng = np.random.default_rng(seeds["messages"])
        self.round = 0
        self.key_history: list[KeyBundle] = []
        self.omegas: list[int] = []

    def random_message(self) -> Bits:
        return random_bits(self.message_rng, self.params.mu_len)

    def run_round(self, mu: Bits, channel: ChannelModel, tamper_feedback: bool = False,
                  transcript: RoundTranscript | None = None) -> RoundRecord:
        params = self.params
        if self.round >= params.N:
            raise RuntimeError(f"block of N={params.N} rounds is finished")
        self.key_history.append(self.alice_keys)
        trace: dict[str, Any] = {}
        x, pending = alice_encrypt(params, self.alice_keys, mu, self.alice_rng, trace)
        x_prime = transmit(x, self.bob_keys.b, channel, self.channel_rng)
        dec = bob_decrypt(params, self.bob_keys, x_prime)
        masked, tau_fb = feedback(params, self.bob_keys, dec.omega)
        if tamper_feedback:
            masked ^= 1
        omega_a, fb_ok = receive_feedback(params, self.alice_keys, masked, tau_fb)
        if transcript is not None:
            transcript.masked_omega, transcript.tau_fb = masked, tau_fb
            transcript.internal.update(trace, **dec.internal)

        before = self.bob_reservoir.consumed
        self.bob_keys = key_update(params, self.bob_keys, dec.omega, dec.kappa, self.bob_reservoir)
        self.alice_keys = key_update(params, self.alice_keys, omega_a, pending.kappa, self.alice_reservoir)
        used = self.bob_reservoir.consumed - before
        self.round += 1
        self.omegas.append(dec.omega)
        corrected = dec.internal.get("corrected")
        return RoundRecord(
            round=self.round,
            omega=dec.omega,
            recovered=dec.omega == 1 and dec.mu == mu,
            errors_corrected=corrected,
            reservoir_bits_used=used,
            feedback_ok=fb_ok,
            in_sync=self.alice_keys == self.bob_keys,
        )

    def state(self) -> SessionState:
        return SessionState(self.seed, self.round, self.alice_keys.to_dict(), self.bob_keys.to_dict(),
                            self.alice_reservoir.consumed, self.bob_reservoir.consumed)

    def reveal(self) -> dict[str, Any]:
        """Keys that leak once the block is over; z only for a final accept."""
        if self.round < self.params.N:
            raise RuntimeError(f"keys are published only after round N={self.params.N}")
        first = self.key_history[0]
        out: dict[str, Any] = {
            "b": "".join(map(str, first.b.bases)),
            "u": str(first.u.bits),
            "k_mac": str(first.k_mac),
            "rounds": [{"k_fb": str(kb.k_fb), "k_otp": kb.k_otp, "e": str(kb.e)} for kb in self.key_history],
        }
        if self.omegas[-1] == 1:
            out["z_last"] = str(self.key_history[-1].z)
        return out


def run_session(params: ProtocolParams, channel: ChannelModel, messages: Sequence[Bits] | None, seed: int,
                reservoir_capacity: int | None = None) -> SessionReport:
    """Run one round per message (or N random messages when ``messages`` is None)."""
    session = Session(params, seed, reservoir_capacity)
    if messages is None:
        messages = [session.random_message() for _ in range(params.N)]
    if len(messages) > params.N:
        raise ParameterError(f"{len(messages)} messages exceed N={params.N}")
    report = SessionReport(params)
    for mu in messages:
        report.rounds.append(session.run_round(mu, channel))
    return report

"""Run configuration: flat ``key = value`` INI files, one section per command.

Example::

    [simulate]
    code = bch63_45
    lambda = 8
    N = 1000
    channel = bsc
    gamma = 0.05
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import ecc
from .channel import ChannelModel, Encoding
from .protocol import ProtocolParams


class ConfigError(ValueError):
    pass


_PROTOCOL_KEYS = {"code", "code_file", "n", "k", "ell", "lambda", "beta", "encoding", "N", "seed",
                  "reservoir_bits"}

ALLOWED_KEYS: dict[str, set[str]] = {
    "simulate": _PROTOCOL_KEYS | {"channel", "gamma"},
    "attack": _PROTOCOL_KEYS | {"attack", "qubits"},
    "rates": {"beta_min", "beta_max", "points", "encoding"},
}

DEFAULTS: dict[str, dict[str, str]] = {
    "simulate": {"lambda": "8", "encoding": "four-state", "N": "100", "channel": "ideal", "gamma": "0"},
    "attack": {"lambda": "8", "encoding": "four-state", "N": "1000", "attack": "intercept_resend",
               "qubits": "100000"},
    "rates": {"beta_min": "0", "beta_max": "0.25", "points": "251", "encoding": "four-state"},
}


@dataclass
class RunConfig:
    command: str
    values: dict[str, str] = field(default_factory=dict)

    def get(self, key: str, default: Any = None) -> Any:
        return self.values.get(key, default)

    def dump(self) -> str:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str  # type: ignore[assignment]
        cp[self.command] = dict(sorted(self.values.items()))
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    # -- typed views -----------------------------------------------------------

    def _int(self, key: str) -> int:
        try:
            return int(self.values[key])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"[{self.command}] {key}: expected an integer") from exc

    def _float(self, key: str) -> float:
        try:
            return float(self.values[key])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"[{self.command}] {key}: expected a number") from exc

    def protocol_params(self) -> ProtocolParams:
        if "code_file" in self.values:
            code = ecc.load_code(self.values["code_file"])
        elif "code" in self.values:
            code = ecc.get_code(self.values["code"])
        else:
            raise ConfigError(f"[{self.command}] needs 'code' or 'code_file'")
        for key, actual in (("n", code.n), ("k", code.k)):
            if key in self.values and self._int(key) != actual:
                raise ConfigError(f"[{self.command}] {key}={self.values[key]} does not match code ({actual})")
        return ProtocolParams(
            n=code.n,
            k=code.k,
            ell=self._int("ell") if "ell" in self.values else code.k,
            lam=self._int("lambda"),
            beta=self._float("beta") if "beta" in self.values else code.t / code.n,
            encoding=Encoding.parse(self.values["encoding"]),
            code=code,
            N=self._int("N"),
        )

    def channel(self) -> ChannelModel:
        return ChannelModel.parse(self.values["channel"], self._float("gamma"))

    def reservoir_bits(self) -> int | None:
        return self._int("reservoir_bits") if "reservoir_bits" in self.values else None

    def beta_grid(self) -> list[float]:
        lo, hi, pts = self._float("beta_min"), self._float("beta_max"), self._int("points")
        if pts < 1 or not 0.0 <= lo <= hi <= 0.25:
            raise ConfigError("bad grid: need 0 <= beta_min <= beta_max <= 0.25 and points >= 1")
        if pts == 1:
            return [lo]
        return [lo + (hi - lo) * i / (pts - 1) for i in range(pts)]

    def encodings(self) -> list[Encoding]:
        v = self.values["encoding"].strip().lower()
        if v == "both":
            return [Encoding.FOUR_STATE, Encoding.SIX_STATE]
        return [Encoding.parse(v)]


def parse_config(text: str, command: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # type: ignore[assignment]
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    unknown_sections = set(cp.sections()) - ALLOWED_KEYS.keys()
    if unknown_sections:
        raise ConfigError(f"unknown sections: {sorted(unknown_sections)}")
    values = dict(DEFAULTS[command])
    if cp.has_section(command):
        for key, value in cp.items(command):
            if key not in ALLOWED_KEYS[command]:
                raise ConfigError(f"[{command}] unknown key {key!r}")
            values[key] = value.strip()
    return RunConfig(command, values)


def load_config(path: str | Path | None, command: str) -> RunConfig:
    if path is None:
        return parse_config("", command)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text, command)

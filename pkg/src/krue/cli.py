"""Command-line front end: ``krue {simulate,rates,attack,selftest}``.

Exit codes: 0 ok, 1 selftest failure, 2 config error, 3 key exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from contextlib import contextmanager
from typing import Iterator, TextIO

import numpy as np

from . import analysis, selftest
from .bits import random_bits
from .channel import BasisSeq, ChannelModel, flip_mask, induced_error_rate
from .config import ConfigError, RunConfig, load_config
from .ecc import CodeError
from .protocol import KeyExhausted, ParameterError, run_session

EXIT_OK, EXIT_SELFTEST, EXIT_CONFIG, EXIT_EXHAUSTED = 0, 1, 2, 3


@contextmanager
def _output(path: str | None) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _u64(s: str) -> int:
    v = int(s, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def cmd_simulate(cfg: RunConfig, seed: int, out: str | None) -> int:
    params = cfg.protocol_params()
    report = run_session(params, cfg.channel(), None, seed, cfg.reservoir_bits())
    with _output(out) as fh:
        fh.write(report.to_csv())
    print(report.summary(), file=sys.stderr if out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_rates(cfg: RunConfig, out: str | None) -> int:
    grid = cfg.beta_grid()
    rows = []
    for enc in cfg.encodings():
        rows.extend(analysis.rate_table(grid, enc))
    with _output(out) as fh:
        analysis.write_rate_csv(rows, fh)
    return EXIT_OK


def attack_report(cfg: RunConfig, seed: int) -> list[tuple[str, str]]:
    """Measured versus predicted disturbance for the configured attack."""
    params = cfg.protocol_params()
    attack = cfg.get("attack", "intercept_resend").strip().lower()
    if attack in ("none", "ideal"):
        model = ChannelModel.ideal()
    elif attack == "intercept_resend":
        model = ChannelModel.intercept_resend()
    else:
        raise ConfigError(f"[attack] unknown attack {attack!r}")
    qubits = cfg._int("qubits")
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(1)[0])
    x = random_bits(rng, qubits)
    b = BasisSeq.random(rng, qubits, params.encoding)
    measured = float(np.mean(flip_mask(x, b, model, rng))) if qubits else 0.0
    predicted = induced_error_rate(model, params.encoding)

    report = run_session(params, model, None, seed, cfg.reservoir_bits())
    reject = report.rejects / len(report.rounds)
    t = params.code.t
    predicted_reject = 1.0 - analysis.p_corr(params.n, t / params.n, predicted)
    return [
        ("attack", attack),
        ("encoding", params.encoding.value),
        ("qubits", str(qubits)),
        ("measured_flip_rate", f"{measured:.6f}"),
        ("predicted_flip_rate", f"{predicted:.6f}"),
        ("code", params.code.name or f"[{params.n},{params.k}]"),
        ("t", str(t)),
        ("rounds", str(len(report.rounds))),
        ("reject_fraction", f"{reject:.6f}"),
        ("predicted_reject_fraction", f"{predicted_reject:.6f}"),
    ]


def cmd_attack(cfg: RunConfig, seed: int, out: str | None) -> int:
    rows = attack_report(cfg, seed)
    with _output(out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("metric", "value"))
        w.writerows(rows)
    return EXIT_OK


def cmd_selftest(out: str | None = None) -> int:
    results = selftest.run_all()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("suite", "status", "detail"))
    for name, ok, detail in results:
        w.writerow((name, "pass" if ok else "FAIL", detail))
    with _output(out) as fh:
        fh.write(buf.getvalue())
    failed = [name for name, ok, _ in results if not ok]
    if failed:
        print(f"selftest failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_SELFTEST
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="krue", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, seed_required: bool) -> None:
        p.add_argument("--config", metavar="PATH")
        p.add_argument("--out", metavar="PATH", help="output CSV (default stdout)")
        p.add_argument("--dump-config", action="store_true", help="print the effective config and exit")
        if seed_required:
            p.add_argument("--seed", type=_u64, required=True, metavar="U64")

    common(sub.add_parser("simulate", help="run an N-round session and write per-round CSV"), True)
    common(sub.add_parser("rates", help="write the rate table over a beta grid"), False)
    common(sub.add_parser("attack", help="intercept-resend disturbance report"), True)
    st = sub.add_parser("selftest", help="run the exhaustive oracle suites")
    st.add_argument("--out", metavar="PATH")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK

    if args.command == "selftest":
        return cmd_selftest(args.out)
    try:
        cfg = load_config(args.config, args.command)
        if args.command != "rates":
            cfg.values["seed"] = str(args.seed)
        if args.dump_config:
            sys.stdout.write(cfg.dump())
            return EXIT_OK
        if args.command == "simulate":
            return cmd_simulate(cfg, args.seed, args.out)
        if args.command == "rates":
            return cmd_rates(cfg, args.out)
        return cmd_attack(cfg, args.seed, args.out)
    except BrokenPipeError:
        sys.stderr.close()  # reader went away, e.g. piped into head
        return EXIT_OK
    except KeyExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (ConfigError, ParameterError, CodeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

import csv
import io

import pytest

from krue import cli
from krue.config import ConfigError, parse_config


def write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_simulate_writes_csv(tmp_path, capsys):
    cfg = write(tmp_path, "[simulate]\ncode = bch31_26\nN = 25\n")
    out = tmp_path / "out.csv"
    assert cli.main(["simulate", "--config", cfg, "--seed", "1", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 25 and all(r["omega"] == "1" for r in rows)
    assert "accept_rate=1.000000" in capsys.readouterr().out


def test_simulate_same_seed_same_output(tmp_path, capsys):
    cfg = write(tmp_path, "[simulate]\ncode = bch63_45\nN = 40\nchannel = bsc\ngamma = 0.05\n")
    cli.main(["simulate", "--config", cfg, "--seed", "9"])
    first = capsys.readouterr()
    cli.main(["simulate", "--config", cfg, "--seed", "9"])
    assert capsys.readouterr() == first


def test_seed_is_required(capsys):
    assert cli.main(["simulate"]) == 2
    assert cli.main(["attack"]) == 2


def test_dump_config_round_trip(tmp_path, capsys):
    cfg = write(tmp_path, "[simulate]\ncode = bch63_45\nN = 7\n")
    assert cli.main(["simulate", "--config", cfg, "--seed", "3", "--dump-config"]) == 0
    dumped = capsys.readouterr().out
    again = write(tmp_path, dumped, "again.ini")
    assert cli.main(["simulate", "--config", again, "--seed", "3", "--dump-config"]) == 0
    assert capsys.readouterr().out == dumped
    assert parse_config(dumped, "simulate").values["seed"] == "3"


def test_config_errors(tmp_path, capsys):
    bad_key = write(tmp_path, "[simulate]\ncode = bch31_26\ncolour = blue\n")
    assert cli.main(["simulate", "--config", bad_key, "--seed", "1"]) == 2
    infeasible = write(tmp_path, "[simulate]\ncode = bch15_7\n", "b.ini")
    assert cli.main(["simulate", "--config", infeasible, "--seed", "1"]) == 2
    assert "config error" in capsys.readouterr().err
    assert cli.main(["simulate", "--config", str(tmp_path / "missing.ini"), "--seed", "1"]) == 2
    with pytest.raises(ConfigError):
        parse_config("[rates]\npoints = 3\n[bogus]\n", "rates")


def test_key_exhaustion_exit_code(tmp_path):
    cfg = write(tmp_path, "[simulate]\ncode = bch31_26\nN = 10\nchannel = bsc\ngamma = 0.3\nreservoir_bits = 50\n")
    assert cli.main(["simulate", "--config", cfg, "--seed", "1", "--out", str(tmp_path / "o.csv")]) == 3


def test_rates_default_grid(capsys):
    assert cli.main(["rates"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 251 * 7
    assert {r["encoding"] for r in rows} == {"four-state"}


def test_rates_both_encodings(tmp_path, capsys):
    cfg = write(tmp_path, "[rates]\nbeta_min = 0.05\nbeta_max = 0.06\npoints = 3\nencoding = both\n")
    assert cli.main(["rates", "--config", cfg]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 2 * 3 * 7
    bad = write(tmp_path, "[rates]\nbeta_max = 0.4\n", "bad.ini")
    assert cli.main(["rates", "--config", bad]) == 2


def test_attack_report(tmp_path, capsys):
    cfg = write(tmp_path, "[attack]\ncode = bch63_45\nN = 200\nqubits = 20000\n")
    assert cli.main(["attack", "--config", cfg, "--seed", "4"]) == 0
    report = dict(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert report["predicted_flip_rate"] == "0.250000"
    assert abs(float(report["measured_flip_rate"]) - 0.25) < 0.02
    assert float(report["reject_fraction"]) > 0.99


def test_selftest_names_failing_suite(capsys):
    code = cli.main(["selftest"])
    captured = capsys.readouterr()
    status = {row["suite"]: row["status"] for row in csv.DictReader(io.StringIO(captured.out))}
    assert status.pop("hash-pairwise") == "FAIL"  # strict count does not hold for this family
    assert set(status.values()) == {"pass"}
    assert code == 1 and "hash-pairwise" in captured.err

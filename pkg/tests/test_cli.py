"""Command line front end: formats, exit codes, sweeps, adjudication."""

import csv
import hashlib
import io
import json
import math

import pytest

from platevac import ConvergenceError, length_to_natural
from platevac.cli import CSV_HEADER, main


def run_cli(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, out


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == CSV_HEADER
    return [dict(zip(CSV_HEADER, r)) for r in rows[1:]]


def test_eval_text(capsys):
    rc, out = run_cli(
        capsys, "eval", "--quantity", "dv2-normal", "--a", "1", "--z", "0.5", "--t", "0.3"
    )
    assert rc == 0
    assert "reduced" in out and "status     ok" in out


def test_eval_json_record(capsys, tmp_path):
    rc, out = run_cli(
        capsys,
        "eval",
        "--quantity",
        "dv2-normal",
        "--a",
        "1",
        "--z",
        "0.5",
        "--t",
        "0.3",
        "--particle",
        "electron",
        "--format",
        "json",
        "--adjudication",
        str(tmp_path / "missing.json"),
    )
    assert rc == 0
    rec = json.loads(out)
    assert rec["status"] == "ok"
    assert rec["reduced"] == pytest.approx(0.2006248050546345, rel=1e-10)
    # provenance fields travel with every value
    assert rec["n_used"] > 0
    assert rec["tail_estimate"] >= 0.0
    assert rec["regime"] == "intermediate"
    assert rec["adjudication"] is None
    assert rec["physical"] == pytest.approx(rec["reduced"] * 4 * 7.2973525693e-3 / (math.pi * 510998.95**2), rel=1e-9)


def test_eval_csv_round_trips(capsys):
    rc, out = run_cli(
        capsys,
        "eval",
        "--quantity",
        "dx2-parallel",
        "--a",
        "1",
        "--z",
        "0.5",
        "--t",
        "0.3",
        "--format",
        "csv",
    )
    assert rc == 0
    row = parse_csv(out)[0]
    assert row["status"] == "ok"
    # 17 significant digits: formatting the parsed float reproduces the text
    assert f"{float(row['reduced']):.17g}" == row["reduced"]
    assert f"{float(row['tail']):.17g}" == row["tail"]


def test_eval_unit_suffixes(capsys, tmp_path):
    rc, out = run_cli(
        capsys,
        "eval",
        "--quantity",
        "dv2-normal",
        "--a",
        "2um",
        "--z",
        "1um",
        "--t",
        "1.0",
        "--format",
        "json",
        "--adjudication",
        str(tmp_path / "missing.json"),
    )
    assert rc == 0
    rec = json.loads(out)
    assert rec["a"] == pytest.approx(length_to_natural(2.0, "um"), rel=1e-12)
    assert rec["z"] == pytest.approx(length_to_natural(1.0, "um"), rel=1e-12)


def test_eval_domain_error_exit_2(capsys):
    rc = main(["eval", "--quantity", "dv2-normal", "--a", "1", "--z", "1.5", "--t", "0.3"])
    assert rc == 2
    rc = main(["eval", "--quantity", "dv2-bogus", "--a", "1", "--z", "0.5", "--t", "0.3"])
    assert rc == 2


def test_eval_singular_window_exit_3(capsys):
    # t = 2z light cone
    rc, out = run_cli(
        capsys, "eval", "--quantity", "dv2-parallel", "--a", "1", "--z", "0.5", "--t", "1"
    )
    assert rc == 3
    assert "singular" in out
    # t = 1000 a lands exactly on a distant image cone (2 n a, n = 500)
    rc, out = run_cli(
        capsys,
        "eval",
        "--quantity",
        "dv2-normal",
        "--a",
        "1",
        "--z",
        "0.5",
        "--t",
        "1000",
        "--format",
        "csv",
    )
    assert rc == 3
    row = parse_csv(out)[0]
    assert row["status"] == "singular"
    assert float(row["sing_dist"]) == 0.0


def test_eval_convergence_exit_4(capsys, monkeypatch):
    import platevac.cli as cli_mod

    def boom(*args, **kwargs):
        raise ConvergenceError("forced")

    monkeypatch.setattr(cli_mod, "dispersion_exact", boom)
    rc, out = run_cli(
        capsys, "eval", "--quantity", "dv2-normal", "--a", "1", "--z", "0.5", "--t", "0.3",
        "--format", "csv",
    )
    assert rc == 4
    assert parse_csv(out)[0]["status"] == "convergence"


def test_sweep_z_symmetric(capsys):
    rc, out = run_cli(
        capsys,
        "sweep",
        "--quantity",
        "dx2-normal",
        "--var",
        "z",
        "--start",
        "0.1",
        "--stop",
        "0.9",
        "--steps",
        "9",
        "--a",
        "1",
        "--t",
        "0.3",
        "--rel-tol",
        "1e-13",
        "--format",
        "csv",
    )
    assert rc == 0
    rows = parse_csv(out)
    vals = [float(r["reduced"]) for r in rows]
    assert len(vals) == 9
    for lo, hi in zip(vals, reversed(vals)):
        assert abs(lo - hi) <= 1e-12 * abs(lo)


def test_sweep_t_late_time_plateau(capsys):
    # log sweep of the normal velocity: rows approach pi**2 / (3 a**2)
    rc, out = run_cli(
        capsys,
        "sweep",
        "--quantity",
        "dv2-normal",
        "--var",
        "t",
        "--start",
        "5.3",
        "--stop",
        "987.3",
        "--steps",
        "7",
        "--scale",
        "log",
        "--a",
        "1",
        "--z",
        "0.5",
        "--format",
        "csv",
    )
    assert rc == 0
    rows = parse_csv(out)
    assert len(rows) == 7
    assert [r["status"] for r in rows] == ["ok"] * 7
    ts = [float(r["value"]) for r in rows]
    assert ts == sorted(ts)  # deterministic grid order
    plateau = math.pi**2 / 3.0
    for r in rows:
        if float(r["value"]) >= 100.0:
            assert float(r["reduced"]) == pytest.approx(plateau, rel=1e-4)


def test_sweep_keeps_singular_rows(capsys):
    rc, out = run_cli(
        capsys,
        "sweep",
        "--quantity",
        "dv2-normal",
        "--var",
        "t",
        "--start",
        "1.5",
        "--stop",
        "2.0",
        "--steps",
        "2",
        "--a",
        "1",
        "--z",
        "0.5",
        "--format",
        "csv",
    )
    assert rc == 0  # one row is fine, the t = 2 row is singular but kept
    rows = parse_csv(out)
    assert [r["status"] for r in rows] == ["ok", "singular"]


def test_sweep_all_singular_exit_3(capsys):
    rc, out = run_cli(
        capsys,
        "sweep",
        "--quantity",
        "dv2-normal",
        "--var",
        "t",
        "--start",
        "2",
        "--stop",
        "4",
        "--steps",
        "2",
        "--a",
        "1",
        "--z",
        "0.5",
        "--format",
        "csv",
    )
    assert rc == 3
    assert all(r["status"] == "singular" for r in parse_csv(out))


def test_sweep_domain_rows(capsys):
    rc, out = run_cli(
        capsys,
        "sweep",
        "--quantity",
        "dv2-normal",
        "--var",
        "z",
        "--start",
        "0.3",
        "--stop",
        "1.2",
        "--steps",
        "4",
        "--a",
        "1",
        "--t",
        "0.3",
        "--format",
        "csv",
    )
    assert rc == 0
    rows = parse_csv(out)
    assert rows[-1]["status"] == "domain"
    assert rows[-1]["reduced"] == ""


def test_sweep_missing_fixed_param_exit_2(capsys):
    rc = main(
        ["sweep", "--quantity", "dv2-normal", "--var", "z", "--start", "0.3", "--stop",
         "0.7", "--steps", "3", "--a", "1"]
    )
    assert rc == 2


def test_sweep_csv_reemission_is_byte_identical(capsys):
    rc, out = run_cli(
        capsys,
        "sweep",
        "--quantity",
        "dv2-normal",
        "--var",
        "t",
        "--start",
        "0.1",
        "--stop",
        "0.7",
        "--steps",
        "4",
        "--a",
        "1",
        "--z",
        "0.5",
        "--format",
        "csv",
    )
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out)))
    buf = io.StringIO()
    writer = csv.writer(buf)
    for row in rows:
        rewritten = []
        for cell in row:
            try:
                rewritten.append(f"{float(cell):.17g}")
            except ValueError:
                rewritten.append(cell)
        writer.writerow(rewritten)
    assert buf.getvalue() == out


def test_compare_wide_gap_and_oracle(capsys):
    rc, out = run_cli(
        capsys,
        "compare",
        "--quantity",
        "dv2-normal",
        "--a",
        "1",
        "--z",
        "0.5",
        "--t",
        "0.01",
        "--oracle",
        "--format",
        "json",
    )
    assert rc == 0
    rec = json.loads(out)
    routes = {r["route"]: r for r in rec["routes"]}
    assert set(routes) == {"exact", "quadrature", "large_a"}
    # reported deviations: oracle within combined tolerance, wide gap small
    assert routes["quadrature"]["rel_diff_vs_exact"] < 1e-6
    assert routes["large_a"]["rel_diff_vs_exact"] < 1e-4


def test_compare_late_time_reports_deviation(capsys):
    rc, out = run_cli(
        capsys,
        "compare",
        "--quantity",
        "dv2-normal",
        "--a",
        "1",
        "--z",
        "0.5",
        "--t",
        "1000.5",
        "--format",
        "json",
    )
    assert rc == 0
    rec = json.loads(out)
    routes = {r["route"]: r for r in rec["routes"]}
    assert set(routes) == {"exact", "large_t"}
    assert routes["large_t"]["rel_diff_vs_exact"] > 0.0  # deviation is reported


def test_physics_report(capsys):
    rc, out = run_cli(
        capsys,
        "physics",
        "--a",
        "2um",
        "--z",
        "1um",
        "--t",
        "101.4",
        "--format",
        "json",
    )
    assert rc == 0
    rec = json.loads(out)
    z = length_to_natural(1.0, "um")
    assert rec["effective_temperature_K"] == pytest.approx(
        7.2973525693e-3 / (math.pi * 8.617333262e-5 * 510998.95 * z * z), rel=1e-10
    )
    assert rec["separation_threshold_m"] == pytest.approx(2.8329026e-13, rel=1e-7)
    assert rec["amplification_ratio"] > 1.0
    assert rec["validity"]["ok"] is True

    rc, out = run_cli(capsys, "physics", "--a", "2um", "--z", "1um", "--t", "101.4")
    assert rc == 0
    assert "effective temperature" in out


def test_adjudicate_then_reference(capsys, tmp_path):
    out_path = tmp_path / "cert.json"
    rc, out = run_cli(capsys, "adjudicate", "--out", str(out_path))
    assert rc == 0
    digest = hashlib.sha256(out_path.read_bytes()).hexdigest()
    assert digest in out
    assert "certified True" in out

    rc, out = run_cli(
        capsys,
        "eval",
        "--quantity",
        "dv2-normal",
        "--a",
        "1",
        "--z",
        "0.5",
        "--t",
        "0.3",
        "--format",
        "json",
        "--adjudication",
        str(out_path),
    )
    assert rc == 0
    rec = json.loads(out)
    assert rec["adjudication"]["sha256"] == digest

import json
import math
import subprocess
import sys

import pytest

from boundstate_atlas.cli import main, parse_angle, parse_k, phase_scan_rows, UsageError
from boundstate_atlas.quadrature import EdgeConstants


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text, value", [("pi", math.pi), ("-pi/2", -math.pi / 2), ("3pi/4", 0.75 * math.pi),
                                         ("0.5*pi", 0.5 * math.pi), ("1.25", 1.25), ("0", 0.0)])
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value, abs=0)


def test_parse_errors():
    with pytest.raises(UsageError):
        parse_angle("tau")
    with pytest.raises(UsageError):
        parse_k("1,2,3")


def test_band(capsys):
    code, out, _ = run(capsys, "band", "--K", "0,0", "--K", "pi,pi", "--K", "pi,0")
    rows = [line.split(",")[2:] for line in out.strip().splitlines()[1:]]
    assert code == 0 and rows == [["0", "8"], ["4", "4"], ["2", "6"]]


def test_zeros_examples(capsys):
    code, out, _ = run(capsys, "zeros", "--sector", "antisym2")
    assert code == 0 and json.loads(out)["below"] == [] and json.loads(out)["above"] == []
    _, out, _ = run(capsys, "zeros", "--lambda", "20", "--mu", "8", "--sector", "antisym2")
    rep = json.loads(out)
    assert rep["below"] == [] and len(rep["above"]) == 2
    _, out, _ = run(capsys, "zeros", "--gamma", "1", "--K", "pi,pi", "--sector", "full7")
    rep = json.loads(out)
    assert rep["below"] == [] and rep["above"] == pytest.approx([5.0], abs=1e-8)


def test_antisym2_off_zero_k_is_an_error(capsys):
    code, _, err = run(capsys, "zeros", "--K", "pi,0", "--sector", "antisym2")
    assert code == 2 and "K = 0" in err


def test_bad_grid_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["zeros", "--grid-n", "15"])


def test_phase_scan_rows_and_mu_star_line():
    mu_star = EdgeConstants.exact().mu_star
    header, rows = phase_scan_rows((-10, 10), (mu_star, mu_star), 3, 1)
    assert header[:6] == ["lambda", "mu", "c_minus", "c_plus", "k_minus", "k_plus"]
    assert all(r[5] == 1 for r in rows)
    _, rows = phase_scan_rows((0, 0), (0, 0), 1, 1, with_det=True)
    assert rows[0][4:] == [0, 0, 0, 0]


def test_phase_scan_det_agrees_with_classifier():
    header, rows = phase_scan_rows((-30, 30), (-30, 30), 4, 4, with_det=True)
    for r in rows:
        if "B" not in (r[4], r[5]):
            assert (r[4], r[5]) == (r[6], r[7])


def test_phase_scan_deterministic_across_jobs(tmp_path):
    outs = []
    for jobs in ("1", "2"):
        path = tmp_path / f"scan{jobs}.csv"
        subprocess.run([sys.executable, "-m", "boundstate_atlas.cli", "phase-scan", "--resolution", "4",
                        "--with-det", "--jobs", jobs, "--out", str(path)], check=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].splitlines()[0] == b"lambda,mu,c_minus,c_plus,k_minus,k_plus,det_minus,det_plus"


def test_json_round_trip(capsys, tmp_path):
    path = tmp_path / "scan.json"
    assert main(["phase-scan", "--resolution", "3", "--format", "json", "--out", str(path)]) == 0
    data = json.loads(path.read_text())
    header, rows = phase_scan_rows((-30, 30), (-30, 30), 3, 3)
    assert data["columns"] == header
    assert data["rows"] == [list(r) for r in rows]


def test_csv_floats_have_17_digits(capsys):
    _, out, _ = run(capsys, "phase-scan", "--resolution", "2", "--lambda-range", "0.1", "0.3")
    lam = out.splitlines()[1].split(",")[0]
    assert lam == format(0.1, ".17g")


def test_verify_constants_flags_mu0(capsys):
    code, out, _ = run(capsys, "verify-constants", "--format", "json")
    rep = json.loads(out)
    row = {r["name"]: r for r in rep["comparison"]}
    assert code == 0 and rep["identities_hold"]
    assert row["mu_star"]["match"] is False
    assert row["mu_star"]["printed"] == pytest.approx(0.9216, abs=1e-4)
    assert row["lambda_star"]["match"] is True
    assert rep["computed"]["e11"] == pytest.approx(0.1366198, abs=1e-7)


def test_verify_theorems_subset(capsys):
    code, out, _ = run(capsys, "verify-theorems", "--only", "1,7,10")
    assert code == 0
    assert [line[:6] for line in out.splitlines()] == ["[PASS]"] * 3
    code, _, err = run(capsys, "verify-theorems", "--only", "42")
    assert code == 2 and "unknown" in err

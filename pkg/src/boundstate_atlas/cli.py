"""Command line interface: ``boundstate-atlas <subcommand>``.

phase-scan CSV columns, in order:

  lambda, mu          coupling point (row-major: lambda outer, mu inner)
  c_minus, c_plus     threshold polynomials C-(lambda, mu), C+(lambda, mu)
  k_minus, k_plus     classifier counts below / above the band, "B" on a threshold curve
  det_minus, det_plus       (--with-det) det2 zero counts at K = 0
  oracle_minus, oracle_plus (--with-oracle) swap-antisymmetric box counts at K = 0

Floats are printed with 17 significant digits. Output is identical for any --jobs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .determinant import det2_zeros, det7_zeros
from .lattice import CouplingParams, Quasimomentum, essential_band
from .oracle import oracle_report
from .phase import c_minus, c_plus, classify
from .quadrature import GridSpec, edge_constants
from .verification import CHECKS, constants_report, run_checks

JOBS_ENV = "BOUNDSTATE_ATLAS_JOBS"
DEFAULT_GRID_N = 512
SCAN_COLUMNS = ["lambda", "mu", "c_minus", "c_plus", "k_minus", "k_plus"]

_PI_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?)\*?pi(?:/(\d+\.?\d*))?$")


class UsageError(ValueError):
    pass


def parse_angle(text: str) -> float:
    """Parse ``0``, ``1.5``, ``pi``, ``-pi/2``, ``3pi/4`` or ``0.5*pi``."""
    s = text.strip().lower().replace(" ", "")
    m = _PI_RE.match(s)
    if m:
        coef, den = m.groups()
        a = {"": 1.0, "+": 1.0, "-": -1.0}.get(coef)
        a = float(coef) if a is None else a
        value = a * math.pi / (float(den) if den else 1.0)
    else:
        try:
            value = float(s)
        except ValueError:
            raise UsageError(f"cannot parse angle {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"angle {text!r} is not finite")
    return value


def parse_k(text: str) -> Quasimomentum:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"K must be two comma-separated components, got {text!r}")
    return Quasimomentum(parse_angle(parts[0]), parse_angle(parts[1]))


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------- band

def cmd_band(args) -> int:
    ks = [parse_k(k) for k in args.K] if args.K else []
    if args.sweep:
        ticks = [-math.pi + 2 * math.pi * j / args.sweep for j in range(args.sweep)]
        ks += [Quasimomentum(a, b) for a in ticks for b in ticks]
    if not ks:
        ks = [Quasimomentum(0.0, 0.0)]
    rows = []
    for K in ks:
        b = essential_band(K)
        rows.append((K.k1, K.k2, b.e_min, b.e_max))
    if args.format == "json":
        _emit(args, _json_text([dict(zip(("k1", "k2", "e_min", "e_max"), r)) for r in rows]))
    else:
        _emit(args, _csv_text(["k1", "k2", "e_min", "e_max"], rows))
    return 0


# --------------------------------------------------------------------------- zeros

def cmd_zeros(args) -> int:
    K = parse_k(args.K)
    grid = GridSpec(args.grid_n or DEFAULT_GRID_N)
    if args.sector == "antisym2":
        if not K.is_zero:
            raise UsageError("the antisym2 sector is only defined at K = 0")
        rep = det2_zeros(args.lam, args.mu, grid)
    else:
        rep = det7_zeros(CouplingParams(args.gamma, args.lam, args.mu), K, grid)
    if args.format == "json":
        out = {"sector": args.sector, "K": [K.k1, K.k2], "gamma": args.gamma,
               "lambda": args.lam, "mu": args.mu, "grid_n": grid.n}
        out.update(rep.as_dict())
        _emit(args, _json_text(out))
    else:
        mid = 0.5 * (essential_band(K).e_min + essential_band(K).e_max)
        rows = [("below", z, "zero") for z in rep.below] + [("above", z, "zero") for z in rep.above]
        rows += [("below" if z < mid else "above", z, "inconclusive") for z in rep.inconclusive]
        _emit(args, _csv_text(["side", "z", "kind"], rows))
    return 0


# --------------------------------------------------------------------------- phase scan

def _scan_line(task):
    lam, mus, with_det, with_oracle, grid_n, box_l = task
    grid = GridSpec(grid_n)
    e = edge_constants(grid)
    K0 = Quasimomentum(0.0, 0.0)
    rows = []
    for mu in mus:
        lab = classify(lam, mu, e)
        row = [lam, mu, c_minus(lam, mu, e), c_plus(lam, mu, e), lab.k_minus, lab.k_plus]
        if with_det:
            row += list(det2_zeros(lam, mu, grid).counts)
        if with_oracle:
            rep = oracle_report(CouplingParams(0.0, lam, mu), K0, l=box_l,
                                sector="swap-antisymmetric", check_convergence=False)
            row += list(rep.counts)
        rows.append(row)
    return rows


def phase_scan_rows(lam_range, mu_range, n_lam, n_mu, *, with_det=False, with_oracle=False,
                    grid_n=512, box_l=30, jobs=1):
    lams = np.linspace(lam_range[0], lam_range[1], n_lam).tolist()
    mus = np.linspace(mu_range[0], mu_range[1], n_mu).tolist()
    tasks = [(lam, mus, with_det, with_oracle, grid_n, box_l) for lam in lams]
    if jobs == 1:
        lines = [_scan_line(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            lines = list(pool.map(_scan_line, tasks))  # map preserves input order
    header = list(SCAN_COLUMNS)
    if with_det:
        header += ["det_minus", "det_plus"]
    if with_oracle:
        header += ["oracle_minus", "oracle_plus"]
    return header, [r for line in lines for r in line]


def cmd_phase_scan(args) -> int:
    n_mu = args.n_mu or args.resolution
    header, rows = phase_scan_rows(args.lambda_range, args.mu_range, args.resolution, n_mu,
                                   with_det=args.with_det, with_oracle=args.with_oracle,
                                   grid_n=args.grid_n or DEFAULT_GRID_N, box_l=args.box_l, jobs=args.jobs)
    if args.format == "json":
        _emit(args, _json_text({"columns": header, "rows": rows}))
    else:
        _emit(args, _csv_text(header, rows))
    return 0


# --------------------------------------------------------------------------- verification

def cmd_verify_constants(args) -> int:
    rep = constants_report(GridSpec(args.grid_n or 1024))
    if args.format == "json":
        _emit(args, _json_text(rep))
        return 0
    lines = [f"edge constants at n = {rep['grid_n']}"]
    lines += [f"  {k:<12s} {fmt(v)}" for k, v in rep["computed"].items()]
    lines.append("identities (residuals)")
    lines += [f"  {k:<22s} {v:+.3e}" for k, v in rep["identities"].items()]
    lines.append(f"identities hold: {fmt(rep['identities_hold'])}")
    lines.append("printed constants")
    lines.append(f"  {'name':<12s} {'computed':>22s} {'printed':>22s}  match  expression")
    for r in rep["comparison"]:
        printed = "-" if r["printed"] is None else fmt(r["printed"])
        match = "-" if r["match"] is None else ("yes" if r["match"] else "NO")
        lines.append(f"  {r['name']:<12s} {fmt(r['computed']):>22s} {printed:>22s}  {match:<5s}  "
                     f"{r['printed_expression']}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _parse_only(text):
    if not text:
        return None
    try:
        nums = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--only expects comma-separated check numbers, got {text!r}") from None
    bad = [n for n in nums if n not in CHECKS]
    if bad:
        raise UsageError(f"unknown check numbers {bad}; valid: 1-{max(CHECKS)}")
    return nums


def cmd_verify_theorems(args) -> int:
    results = run_checks(_parse_only(args.only))
    if args.format == "json":
        _emit(args, _json_text([{"number": r.number, "name": r.name, "passed": r.passed,
                                 "detail": r.detail, "failures": r.failures} for r in results]))
    else:
        lines = []
        for r in results:
            lines.append(r.line())
            lines += [f"    {f}" for f in r.failures]
        _emit(args, "\n".join(lines) + "\n")
    return 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------------------- parser

def _positive_jobs(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("--jobs must be >= 1")
    return v


def _grid_n(text):
    v = int(text)
    if v < 16 or v % 2:
        raise argparse.ArgumentTypeError("--grid-n must be even and >= 16")
    return v


def _box_l(text):
    v = int(text)
    if v < 10:
        raise argparse.ArgumentTypeError("--box-l must be >= 10")
    return v


def _default_jobs():
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-n", type=_grid_n, default=None,
                        help="torus grid points per axis (even, >= 16; default 512, 1024 for verify-constants)")
    common.add_argument("--box-l", type=_box_l, default=30, help="oracle box half-width (>= 10)")
    common.add_argument("--jobs", type=_positive_jobs, default=_default_jobs(),
                        help=f"worker processes (default ${JOBS_ENV} or 1)")
    common.add_argument("--out", help="write to this file instead of stdout")

    coupling = argparse.ArgumentParser(add_help=False)
    coupling.add_argument("--gamma", type=float, default=0.0)
    coupling.add_argument("--lambda", dest="lam", type=float, default=0.0)
    coupling.add_argument("--mu", type=float, default=0.0)

    p = argparse.ArgumentParser(prog="boundstate-atlas",
                                description="Bound states of the lattice two-boson fiber Hamiltonian.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("band", parents=[common], help="essential band [e_min, e_max] at K")
    b.add_argument("--K", action="append", help="quasimomentum, e.g. 0,0 or pi,pi/2 (repeatable)")
    b.add_argument("--sweep", type=int, default=0, help="also emit an N x N uniform K grid")
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.set_defaults(func=cmd_band)

    z = sub.add_parser("zeros", parents=[common, coupling], help="determinant zeros outside the band")
    z.add_argument("--K", default="0,0")
    z.add_argument("--sector", choices=("antisym2", "full7"), default="full7")
    z.add_argument("--format", choices=("csv", "json"), default="json")
    z.set_defaults(func=cmd_zeros)

    s = sub.add_parser("phase-scan", parents=[common], help="classify a (lambda, mu) rectangle",
                       description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    s.add_argument("--lambda-range", nargs=2, type=float, default=(-30.0, 30.0), metavar=("LO", "HI"))
    s.add_argument("--mu-range", nargs=2, type=float, default=(-30.0, 30.0), metavar=("LO", "HI"))
    s.add_argument("--resolution", type=int, default=41, help="points along lambda (and mu unless --n-mu)")
    s.add_argument("--n-mu", type=int, default=0)
    s.add_argument("--with-det", action="store_true", help="add det2 zero counts")
    s.add_argument("--with-oracle", action="store_true", help="add truncated-lattice counts")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_phase_scan)

    c = sub.add_parser("verify-constants", parents=[common], help="edge constants and printed-value table")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_verify_constants)

    t = sub.add_parser("verify-theorems", parents=[common], help="run the acceptance checks")
    t.add_argument("--only", help="comma-separated check numbers, e.g. 1,3,7")
    t.add_argument("--format", choices=("text", "json"), default="text")
    t.set_defaults(func=cmd_verify_theorems)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"boundstate-atlas: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

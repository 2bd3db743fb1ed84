"""Command-line entry point: ``deformosc <subcommand> [flags]``.

Exit codes: 0 when every requested check passes, 2 on invalid input,
3 when a verification fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import harness, radial
from .deform1d import MODES, Deform1DParams
from .errors import ConvergenceError, DomainError

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY = 0, 2, 3


def _common(p: argparse.ArgumentParser, fmt_default: str = "jsonl"):
    p.add_argument("--tol", type=float, default=None, help="verification tolerance")
    p.add_argument("--format", choices=("jsonl", "csv"), default=fmt_default)
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--timing", action="store_true", help="report wall time on stderr")


def _params1d(p: argparse.ArgumentParser):
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--efield", type=float, default=0.0)


def _paramsdd(p: argparse.ArgumentParser):
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--betap", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="deformosc", description="Deformed-commutator oscillator spectra and checks.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("spectrum1d", help="1-D energies and field corrections")
    _params1d(p)
    p.add_argument("--mode", choices=("auto",) + MODES, default="auto")
    p.add_argument("--levels", type=int, default=10)
    p.add_argument("--verify", action="store_true", help="compare with the Fock-space oracle")
    _common(p)

    p = sub.add_parser("states1d", help="Bargmann eigenvector coefficients")
    _params1d(p)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--M", type=int, default=48, help="highest basis index kept")
    p.add_argument("--check-closed-form", action="store_true")
    p.add_argument("--verify-eigen", action="store_true")
    _common(p)

    p = sub.add_parser("spectrumdd", help="D-dimensional radial spectrum")
    _paramsdd(p)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--verify", action="store_true", help="compare with the finite-difference oracle")
    _common(p)

    p = sub.add_parser("radialwf", help="sample chi_n(P) and R_nl(P)")
    _paramsdd(p)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--gamma-weight", type=float, default=0.0)
    p.add_argument("--pmax", type=float, default=10.0)
    p.add_argument("--points", type=int, default=200)
    _common(p, fmt_default="csv")

    p = sub.add_parser("sweep", help="run a parameter sweep from a JSON file")
    p.add_argument("spec")
    _common(p, fmt_default="csv")

    p = sub.add_parser("verify-all", help="quick end-to-end self-check")
    _common(p)
    return ap


def _records(args):
    tol = args.tol
    if args.cmd == "spectrum1d":
        p = Deform1DParams(args.alpha, args.beta, args.efield)
        return harness.spectrum1d(p, args.levels, args.mode, args.verify, tol or harness.TOL_1D)
    if args.cmd == "states1d":
        p = Deform1DParams(args.alpha, args.beta, args.efield)
        return harness.states1d(p, args.n, args.M, args.check_closed_form, args.verify_eigen,
                                tol or harness.TOL_EIGEN)
    if args.cmd == "spectrumdd":
        rp = radial.RadialProblem(args.dim, args.l, args.beta, args.betap)
        return harness.spectrumdd(rp, args.nmax, args.verify, tol or harness.TOL_RADIAL)
    if args.cmd == "radialwf":
        rp = radial.RadialProblem(args.dim, args.l, args.beta, args.betap, args.gamma_weight)
        return harness.radialwf(rp, args.n, args.pmax, args.points)
    if args.cmd == "sweep":
        spec = harness.SweepSpec.load(args.spec)
        if tol is not None:
            spec.tol = tol
        return harness.sweep(spec)
    return harness.verify_all()


def _cell(v):
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return "" if v is None else v


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "jsonl":
        return "".join(json.dumps(r) + "\n" for r in rows)
    cols: list[str] = []
    for r in rows:
        cols.extend(k for k in r if k not in cols)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(v) for k, v in r.items()})
    return buf.getvalue()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        records = list(_records(args))
    except (DomainError, OverflowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    text = render([r.flat() for r in records], args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.timing:
        print(f"# wall_time_s={time.perf_counter() - t0:.3f}", file=sys.stderr)
    if any(r.cmd == "sweep" and "error" in r.data for r in records):
        return EXIT_DOMAIN
    return EXIT_OK if all(r.ok for r in records) else EXIT_VERIFY


if __name__ == "__main__":
    raise SystemExit(main())

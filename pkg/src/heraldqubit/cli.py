"""Command-line interface: ``sweep``, ``verify``, ``design`` and ``point``.

Exit codes: 0 success, 1 verification failure, 2 I/O error, 3 infeasible
design, 64 usage error.
"""

import argparse
import io
import logging
import math
import sys

import numpy as np

from . import __version__
from .estimators import DesignSearch
from .exceptions import HeraldError, InfeasibleDesignError, ZeroProbabilityError
from .scheme import SchemeParams, run_analytic, run_numeric
from .sweep import (
    GridRange,
    SweepSpec,
    format_float,
    parse_value,
    run_sweep,
    write_csv,
    write_gnuplot,
    write_json,
)
from .verification import run_verification

log = logging.getLogger("heraldqubit")

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_IO = 2
EXIT_INFEASIBLE = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _value(text):
    try:
        return parse_value(text)
    except HeraldError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _range(text):
    try:
        return GridRange.parse(text)
    except HeraldError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _complex(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}") from None


def _target(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"target must look like a0,a1, got {text!r}")
    return tuple(_complex(p) for p in parts)


def _eta_list(text):
    return [_value(x) for x in text.split(",") if x.strip()]


def build_parser():
    parser = _Parser(prog="heraldqubit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--eta", type=_value, default=0.8, help="detector efficiency (default 0.8)")
    common.add_argument("--cutoff", default="auto", help="Fock cutoff: auto or an integer")

    p = sub.add_parser("sweep", parents=[common], help="evaluate a (gamma, phi) grid")
    p.add_argument("--gamma-range", type=_range, default=GridRange(0.0, 2.0, 41), metavar="A:B:N")
    p.add_argument("--phi-range", type=_range, default=GridRange(0.0, math.pi, 41), metavar="A:B:N")
    p.add_argument("--gamma", type=_value, help="fix gamma (overrides --gamma-range)")
    p.add_argument("--phi", type=_value, help="fix phi (overrides --phi-range)")
    p.add_argument("--outcome", choices=("yn", "ny"), default="yn")
    p.add_argument("--mode", choices=("analytic", "numeric", "both"), default="analytic")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--gnuplot", metavar="PATH", help="also write a gnuplot grid file")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for numeric mode")

    p = sub.add_parser("verify", help="reconcile closed forms with brute-force simulation")
    p.add_argument("--eta", type=_eta_list, default=[0.4, 0.8, 1.0],
                   help="comma-separated efficiencies (default 0.4,0.8,1.0)")
    p.add_argument("--grid", type=int, default=12, help="points per axis (default 12)")
    p.add_argument("--inject-fault", action="store_true",
                   help="perturb eta in the numeric arm; the run must then fail")
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("design", help="maximise fidelity subject to a probability floor")
    p.add_argument("--eta", type=_value, default=0.8)
    p.add_argument("--p-min", type=_value, required=True)
    p.add_argument("--target", type=_target, help="desired qubit amplitudes a0,a1")
    p.add_argument("--gamma-max", type=_value, default=2.0)

    p = sub.add_parser("point", parents=[common], help="evaluate one parameter point")
    p.add_argument("--gamma", type=_complex, required=True)
    p.add_argument("--phi", type=_value, required=True)
    p.add_argument("--outcome", choices=("yn", "ny"), default="yn")
    p.add_argument("--mode", choices=("analytic", "numeric", "both"), default="both")
    return parser


def _open_out(path):
    if path == "-":
        return sys.stdout
    return open(path, "w", encoding="ascii", newline="")


def cmd_sweep(args):
    gamma = GridRange.single(args.gamma) if args.gamma is not None else args.gamma_range
    phi = GridRange.single(args.phi) if args.phi is not None else args.phi_range
    try:
        spec = SweepSpec(gamma, phi, args.eta, args.outcome, args.mode, args.cutoff)
    except HeraldError as exc:
        raise UsageError(str(exc)) from None
    records = run_sweep(spec, n_jobs=args.jobs)

    buf = io.StringIO()
    (write_csv if args.format == "csv" else write_json)(records, buf)
    try:
        fh = _open_out(args.out)
        try:
            fh.write(buf.getvalue())
        finally:
            if fh is not sys.stdout:
                fh.close()
        if args.gnuplot:
            with open(args.gnuplot, "w", encoding="ascii") as g:
                write_gnuplot(records, g)
    except OSError as exc:
        print(f"heraldqubit: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    log.info("wrote %d records", len(records))
    return EXIT_OK


def cmd_verify(args):
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    try:
        report = run_verification(etas=args.eta, n_grid=args.grid,
                                  inject_fault=args.inject_fault, n_jobs=args.jobs)
    except HeraldError as exc:
        raise UsageError(str(exc)) from None
    print(report.format_table())
    if report.ok:
        print("verification passed")
        return EXIT_OK
    for c in report.failures():
        where = ", ".join(f"{x:.17g}" for x in c.where) if c.where else "-"
        print(f"FAILED {c.name}: {c.worst:.3e} > {c.tol:.0e} at (eta, gamma, phi) = ({where})")
    return EXIT_VERIFY


def _fmt_gamma(g):
    g = complex(g)
    return format_float(g.real) if g.imag == 0 else f"{format_float(g.real)}{g.imag:+.16e}j"


def cmd_design(args):
    est = DesignSearch(eta=args.eta, p_min=args.p_min, target=args.target, gamma_max=args.gamma_max)
    try:
        est.fit()
    except InfeasibleDesignError as exc:
        print(f"infeasible: P_YN >= {args.p_min} not reachable; "
              f"max achievable P_YN = {format_float(exc.max_probability)}")
        return EXIT_INFEASIBLE
    except HeraldError as exc:
        raise UsageError(str(exc)) from None
    print(f"family   {est.family_}")
    print(f"gamma*   {_fmt_gamma(est.best_gamma_)}")
    print(f"phi*     {format_float(est.best_phi_)}")
    print(f"F*       {format_float(est.best_fidelity_)}")
    print(f"P_YN*    {format_float(est.best_p_yn_)}")
    return EXIT_OK


def _print_result(label, res):
    print(f"[{label}]")
    print(f"P_{res.outcome.upper()}  {format_float(res.p_yn)}")
    print("rho")
    for row in res.rho.matrix[:2, :2]:
        print("  " + "  ".join(f"{z.real:+.10e}{z.imag:+.10e}j" for z in row))
    print(f"F     {format_float(res.fidelity)}")


def cmd_point(args):
    try:
        params = SchemeParams(args.eta, args.gamma, args.phi, args.cutoff)
    except HeraldError as exc:
        raise UsageError(str(exc)) from None
    try:
        if args.mode in ("analytic", "both"):
            _print_result("analytic", run_analytic(params, args.outcome))
        if args.mode in ("numeric", "both"):
            res = run_numeric(params, args.outcome)
            _print_result(f"numeric, cutoff {res.cutoff}", res)
    except ZeroProbabilityError as exc:
        print(f"outcome has vanishing probability: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "verify": cmd_verify, "design": cmd_design, "point": cmd_point}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help/--version exit 0; parse errors exit EXIT_USAGE via _Parser.error
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    np.set_printoptions(precision=10)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"heraldqubit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line client over the core library.

Runs entirely in-process (no network).  Reports go to stdout as canonical
JSON (or CSV for the tabular verbs); diagnostics go to stderr as a
machine-readable error object.  Exit codes: 0 success, 2 argument errors,
3 domain errors, 4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import sys

from . import reports
from .energy import DEFAULT_ATOL, DEFAULT_RTOL
from .errors import DomainError, NumericalError
from .functionals import Functional
from .geometry import Annulus


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # ArgumentParser.exit would kill the process
        raise _ArgumentError(message)


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'inner,outer', got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _moduli(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> _Parser:
    p = _Parser(
        prog="nharmonic",
        description="Energy-minimal n-harmonic deformations between spherical annuli.",
    )
    sub = p.add_subparsers(dest="verb", required=True)

    def add_common(sp, pair=True, target=True):
        sp.add_argument("-n", "--dimension", type=int, required=True)
        if pair:
            sp.add_argument("--source", type=_pair, required=True, metavar="r,R")
            sp.add_argument(
                "--target", type=_pair, required=target, metavar="r*,R*"
            )
        sp.add_argument("--rtol", type=float, default=DEFAULT_RTOL)
        sp.add_argument("--atol", type=float, default=DEFAULT_ATOL)
        sp.add_argument("--format", choices=("json", "csv"), default=None)

    add_common(sub.add_parser("classify", help="regime of a pair of annuli"))
    add_common(sub.add_parser("minimize", help="construct the minimal deformation"))

    spe = sub.add_parser("energy", help="energy of a named map on a pair")
    add_common(spe)
    spe.add_argument("--map", choices=("minimizer", "fit", "power"), default="minimizer")
    spe.add_argument(
        "--functional",
        choices=tuple(f.value for f in Functional),
        default=Functional.CONFORMAL.value,
    )

    spp = sub.add_parser("profile", help="sample strain rows over a t-grid")
    spp.add_argument("-n", "--dimension", type=int, required=True)
    spp.add_argument(
        "--kind",
        choices=("plus", "minus", "identity", "inversion", "minimizer"),
        required=True,
    )
    spp.add_argument("--from", dest="start", type=float, required=True)
    spp.add_argument("--to", dest="stop", type=float, required=True)
    spp.add_argument("--steps", type=int, required=True)
    spp.add_argument("--source", type=_pair, default=None, metavar="r,R")
    spp.add_argument("--target", type=_pair, default=None, metavar="r*,R*")
    spp.add_argument("--format", choices=("json", "csv"), default=None)

    spn = sub.add_parser("nitsche-table", help="critical constants and bounds")
    spn.add_argument("-n", "--dimension", type=int, required=True)
    spn.add_argument("--mod", type=_moduli, default=None, metavar="m1,m2,...")
    spn.add_argument("--format", choices=("json", "csv"), default=None)

    add_common(sub.add_parser("verify", help="free-Lagrangian residual suite"))

    spc = sub.add_parser("counterexample", help="non-radial witness (n >= 4)")
    add_common(spc)
    spc.add_argument(
        "--functional",
        choices=(Functional.CONFORMAL.value, Functional.WEIGHTED.value),
        default=Functional.CONFORMAL.value,
    )

    spq = sub.add_parser("qc", help="quasiconformal modulus bounds")
    add_common(spq)
    spq.add_argument("--ko", type=float, required=True, help="outer dilatation")
    spq.add_argument("--ki", type=float, required=True, help="inner dilatation")
    return p


def _annulus(pair: tuple[float, float]) -> Annulus:
    return Annulus(pair[0], pair[1])


def _dispatch(args) -> str:
    verb = args.verb
    fmt = args.format or ("csv" if verb == "profile" else "json")
    if fmt == "csv" and verb not in ("profile", "nitsche-table"):
        raise _ArgumentError(f"verb {verb!r} does not support CSV output")

    if verb == "classify":
        out = reports.classify_report(
            args.dimension, _annulus(args.source), _annulus(args.target)
        )
    elif verb == "minimize":
        out = reports.minimize_report(
            args.dimension, _annulus(args.source), _annulus(args.target),
            rtol=args.rtol, atol=args.atol,
        )
    elif verb == "energy":
        out = reports.energy_verb_report(
            args.dimension,
            _annulus(args.source),
            _annulus(args.target),
            args.map,
            Functional(args.functional),
            rtol=args.rtol,
            atol=args.atol,
        )
    elif verb == "profile":
        source = _annulus(args.source) if args.source else None
        target = _annulus(args.target) if args.target else None
        if fmt == "csv":
            rows = reports.profile_rows(
                args.dimension, args.kind, args.start, args.stop, args.steps,
                source, target,
            )
            return reports.dumps_csv(reports.PROFILE_HEADER, rows)
        out = reports.profile_report(
            args.dimension, args.kind, args.start, args.stop, args.steps,
            source, target,
        )
    elif verb == "nitsche-table":
        if fmt == "csv":
            moduli = reports.DEFAULT_TABLE_MODULI if args.mod is None else args.mod
            rows = reports.nitsche_rows(args.dimension, moduli)
            return reports.dumps_csv(reports.NITSCHE_HEADER, rows)
        out = reports.nitsche_table_report(args.dimension, args.mod)
    elif verb == "verify":
        out = reports.verify_report(
            args.dimension, _annulus(args.source), _annulus(args.target)
        )
    elif verb == "counterexample":
        out = reports.counterexample_report(
            args.dimension,
            _annulus(args.source),
            _annulus(args.target),
            Functional(args.functional),
        )
    elif verb == "qc":
        out = reports.qc_report(
            args.dimension, _annulus(args.source), _annulus(args.target),
            args.ko, args.ki,
        )
    else:  # pragma: no cover
        raise _ArgumentError(f"unknown verb {verb!r}")
    return reports.dumps_canonical(out) + "\n"


def _emit_error(kind: str, message: str) -> None:
    obj = {"schema": 1, "error": {"type": kind, "message": message}}
    sys.stderr.write(reports.dumps_canonical(obj) + "\n")


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        sys.stdout.write(_dispatch(args))
        return 0
    except _ArgumentError as exc:
        _emit_error("argument", str(exc))
        return 2
    except DomainError as exc:
        _emit_error("domain", str(exc))
        return 3
    except NumericalError as exc:
        _emit_error("numerical", str(exc))
        return 4


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

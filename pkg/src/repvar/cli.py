"""Command-line entry point: ``repvar <subcommand> KNOT [options]``.

Exit codes: 0 all checks passed, 1 hypothesis refused, 2 numerical failure
(including a failed residual check), 3 inconsistency with a proven statement,
4 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline
from .alexander import default_precision
from .errors import HypothesisError, InconsistencyError, InputError, NumericalError

log = logging.getLogger("repvar")

EXIT_OK, EXIT_HYPOTHESIS, EXIT_NUMERICAL, EXIT_INCONSISTENT, EXIT_INPUT = 0, 1, 2, 3, 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="repvar", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def knot_command(name: str, help_text: str) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("knot", help="catalog name, file with PD/BR text, or literal PD[...] / BR[...]")
        cmd.add_argument("--alpha-root", type=int, default=0,
                         help="index into roots sorted by (multiplicity desc, argument asc)")
        cmd.add_argument("--precision", type=int, default=None,
                         help="digits for root finding (default: REPVAR_PRECISION or 15)")
        cmd.add_argument("--tol-rank", type=float, default=1e-8)
        cmd.add_argument("--tol-relator", type=float, default=1e-10)
        cmd.add_argument("--output", "-o", type=Path, default=None, help="write the JSON report here")
        return cmd

    knot_command("analyze", "Alexander polynomial, roots and the torsion gate")
    knot_command("cohomology", "twisted cohomology tables and cup-product classes")
    knot_command("construct", "the metabelian SL(3) representation")
    d = knot_command("deform", "formal and numeric deformations with certificates")
    d.add_argument("--t", type=float, nargs="+", default=[0.0025, 0.005, 0.01], dest="t")
    d.add_argument("--order", type=int, default=4)
    d.add_argument("--workers", type=int, default=1)
    v = sub.add_parser("verify", help="replay a stored report")
    v.add_argument("report", type=Path)
    v.add_argument("--output", "-o", type=Path, default=None)
    return parser


def _config(args) -> pipeline.RunConfig:
    cfg = pipeline.RunConfig(args.knot, args.alpha_root,
                             args.precision or default_precision(), args.tol_rank, args.tol_relator)
    if args.command == "deform":
        cfg.order = args.order
        cfg.t_grid = tuple(args.t)
        cfg.workers = args.workers
    return cfg


def _json_default(obj):
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def _emit(report: dict, output: Path | None) -> None:
    text = json.dumps(report, indent=2, default=_json_default)
    if output is None:
        sys.stdout.write(text + "\n")
    else:
        output.write_text(text + "\n", encoding="utf-8")
        log.info("wrote %s", output)


def run_command(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "verify":
            report = pipeline.verify(json.loads(args.report.read_text(encoding="utf-8")))
        else:
            cfg = _config(args)
            if args.command == "analyze":
                report = pipeline.analyze(cfg)
            elif args.command == "construct":
                report = pipeline.construct(cfg)[0]
            elif args.command == "cohomology":
                report = pipeline.cohomology(cfg)
            else:
                report = pipeline.deform(cfg)
    except HypothesisError as exc:
        log.error("hypothesis refused: %s", exc)
        return EXIT_HYPOTHESIS
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except InconsistencyError as exc:
        log.error("inconsistency: %s", exc)
        return EXIT_INCONSISTENT
    except (InputError, ValueError, OSError, json.JSONDecodeError) as exc:
        log.error("bad input: %s", exc)
        return EXIT_INPUT
    _emit(report, args.output)
    failed = [k for k, ok in report.get("checks", {}).items() if not ok]
    if failed:
        log.error("failed checks: %s", ", ".join(failed))
        return EXIT_HYPOTHESIS if report.get("kind") == "analyze" else EXIT_NUMERICAL
    return EXIT_OK


def main() -> None:
    sys.exit(run_command())

"""
================================================================================
CONTEXT BLOCK
================================================================================
File: cli.py
Module: puiseux_analysis.cli
Purpose: Command-line front end

Description:
    `puiseux COMMAND [POLYNOMIAL] [options]` reads a polynomial from the
    positional argument, from --file, or from stdin, runs the command
    through AnalysisExecutor and prints text or JSON on stdout. Logs go
    to stderr.

Commands:
    expand, polygon, tree, truncate, stability, contact, pairs, and
    batch (runs a CSV corpus, see corpus.py)

Exit Codes:
    0  success
    1  usage or parse error
    2  computation error
    3  inconclusive (unresolved root cluster, undecided stability)

Usage:
    puiseux tree "(x^2-y^3)^2-4*x*y^5"
    puiseux stability "x^4-t^2*x^2*y^2+y^4" --format json
    puiseux polygon "x^3+2*y*x^2+y^4" --svg polygon.svg
    puiseux batch data/corpus/truncation_corpus.csv --jobs 4

Created: 2025-12-14
================================================================================
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from .analysis import COMMANDS, AnalysisExecutor, exit_status
from .corpus import DEFAULT_CORPUS, CorpusLoader, summarize
from .errors import PolynomialSyntaxError, PuiseuxError, is_inconclusive
from .models import RunConfig, parse_depth
from .render import to_json, to_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTATION = 2
EXIT_INCONCLUSIVE = 3


def _options() -> argparse.ArgumentParser:
    """Flags shared by every command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=None,
                        help="Output format (default: text)")
    common.add_argument("--depth", type=str, default=None,
                        help="Expansion depth p/q (default: separation depth + 4 steps)")
    common.add_argument("--precision", type=int, default=None,
                        help="Starting ball precision in bits (env PUISEUX_PRECISION)")
    common.add_argument("--svg", type=str, default=None,
                        help="Write the polygon or tree figure to this path")
    common.add_argument("--jobs", type=int, default=None,
                        help="Worker processes for batch runs (env PUISEUX_JOBS)")
    common.add_argument("--no-regularize", action="store_true",
                        help="Do not apply y -> y + c*x to reach mini-regularity")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="Log INFO (-v) or DEBUG (-vv) to stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _options()
    parser = argparse.ArgumentParser(
        prog="puiseux",
        description="Exact Newton-Puiseux analysis of plane curve singularities",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    help_text = {
        "expand": "Puiseux roots with multiplicities",
        "polygon": "Newton polygon at 0 or at a series",
        "tree": "Kuo-Lu tree and blurred critical points",
        "truncate": "Puiseux root truncation",
        "stability": "Morse stability verdict",
        "contact": "Canonical coordinates and contact orders of series",
        "pairs": "Puiseux pairs per geometric branch",
    }
    for name in COMMANDS:
        sub = commands.add_parser(name, parents=[common], help=help_text[name])
        sub.add_argument("polynomial", nargs="?", help="Polynomial text (else --file or stdin)")
        sub.add_argument("--file", type=str, default=None, help="Read the polynomial from a file")
        if name == "polygon":
            sub.add_argument("--at", dest="center", default=None,
                             help="Recentre at a series in y, e.g. 'y^(3/2)'")
        elif name == "truncate":
            sub.add_argument("--family", dest="with_family", action="store_true",
                             help="Also print the root deformation family")
        elif name == "stability":
            sub.add_argument("--lemma", action="store_true",
                             help="Recompute the critical structure at sampled t")
        elif name == "contact":
            sub.add_argument("--series", action="append", default=[],
                             help="Series in y (repeat for a contact order)")
    batch = commands.add_parser("batch", parents=[common], help="Run a CSV corpus")
    batch.add_argument("corpus", nargs="?", default=DEFAULT_CORPUS, help="CSV with name,polynomial")
    return parser


def configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def read_input(args: argparse.Namespace) -> str:
    if args.polynomial is not None:
        return args.polynomial
    if args.file:
        with open(args.file, encoding="utf-8") as handle:
            return handle.read()
    return sys.stdin.read()


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig.from_env(
        depth=parse_depth(args.depth),
        precision_bits=args.precision,
        format=args.format,
        svg=args.svg,
        regularize="off" if args.no_regularize else None,
        jobs=args.jobs,
    )


def _command_options(args: argparse.Namespace) -> dict:
    keys = {
        "polygon": ("center",),
        "truncate": ("with_family",),
        "stability": ("lemma",),
        "contact": ("series",),
    }.get(args.command, ())
    return {key: getattr(args, key) for key in keys}


def run_batch(args: argparse.Namespace, config: RunConfig) -> tuple[dict, int]:
    results = CorpusLoader(args.corpus, config).run()
    payload = {
        "command": "batch",
        "corpus": args.corpus,
        "rows": results.where(results.notna(), None).to_dict(orient="records"),
        "summary": summarize(results),
    }
    status = EXIT_OK
    if (results["verdict"] == "Inconclusive").any():
        status = EXIT_INCONCLUSIVE
    if (results["verdict"] == "Error").any() or (results["matches"] == False).any():  # noqa: E712
        status = EXIT_COMPUTATION
    return payload, status


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    configure_logging(args.verbose)

    try:
        config = config_from_args(args)
        if args.command == "batch":
            payload, status = run_batch(args, config)
        else:
            executor = AnalysisExecutor(config)
            payload = executor.run(args.command, read_input(args), **_command_options(args))
            status = exit_status(payload)
    except (PolynomialSyntaxError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PuiseuxError as e:
        logger.debug("Computation failed", exc_info=True)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE if is_inconclusive(e) else EXIT_COMPUTATION

    if config.format == "json":
        print(to_json(payload))
    else:
        print(to_text(args.command, payload))
    return status


if __name__ == "__main__":
    sys.exit(main())

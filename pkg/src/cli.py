#!/usr/bin/env python3
"""
nlsgraph - command-line front end for NLS ground states on metric graphs

    nlsgraph check star3
    nlsgraph levels --mass 1
    nlsgraph minimize halfline --mass 1
    nlsgraph classify line_with_pendant --mass 1       # exit 0 / 1 / 2
    nlsgraph competitor --construction pendant --mass 1 --pendant 2
    nlsgraph critical-length --mass 1
    nlsgraph limit-table --mass 1 --lengths 1 2 5 10 50

Reports go to stdout (text or CSV, 12 significant digits); files are
written to --output-dir (default NLSGRAPH_OUTPUT_DIR); logs go to stderr.
"""
import argparse
import asyncio
import logging
import sys
from typing import Any, Dict, Optional, Sequence

from src.config.settings import settings
from src.utils.export_utils import export_to_csv, format_report, write_export
from src.utils.logging_setup import configure_logging
from src.tools import (
    graph_check,
    graph_classify,
    graph_competitor,
    graph_critical_length,
    graph_levels,
    graph_limit_table,
    graph_minimize,
)

logger = logging.getLogger(__name__)

ERROR_EXIT = 3
PAYLOAD_KEYS = ("success", "profile", "probes", "rows", "exit_code")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("text", "csv"), default="text", help="stdout format")
    parser.add_argument("--output-dir", default=None, help="directory for written files")
    parser.add_argument("--power", type=float, default=None, help="nonlinearity power p in (2, 6)")
    parser.add_argument("--log-level", default=None, help="override LOG_LEVEL")


def _add_solver(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mass", type=float, required=True, help="mass mu > 0")
    parser.add_argument("--h-max", type=float, default=None, help="mesh spacing (default MESH_RESOLUTION / mu)")
    parser.add_argument("--truncation", type=float, default=None,
                        help="half-line truncation (default TRUNCATION_SCALE / mu)")
    parser.add_argument("--max-iters", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)


def _add_graph(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("graph", help="bundled graph name, graph file, or `gl` with --pendant")
    parser.add_argument("--pendant", type=float, default=None, help="pendant length of the gl family")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlsgraph", description="NLS ground states on metric graphs")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="validate a graph, Assumption (H), bubble towers")
    _add_graph(check)
    _add_common(check)

    levels = commands.add_parser("levels", help="closed-form reference levels")
    levels.add_argument("--mass", type=float, required=True)
    _add_common(levels)

    minimize = commands.add_parser("minimize", help="minimize the energy at fixed mass")
    _add_graph(minimize)
    _add_solver(minimize)
    minimize.add_argument("--tol-grad", type=float, default=None)
    minimize.add_argument("--starts", nargs="+", default=None, help="start names (edge:<k>, vertex:<name>, ...)")
    _add_common(minimize)

    classify = commands.add_parser("classify", help="existence verdict (exit 0 EXISTS, 1 LIKELY_NONEXISTENT, 2 INCONCLUSIVE)")
    _add_graph(classify)
    _add_solver(classify)
    classify.add_argument("--tol-grad", type=float, default=None)
    classify.add_argument("--tol-level", type=float, default=None, help="comparison slack (calibrated by default)")
    classify.add_argument("--reference", choices=("exact", "discrete"), default=None)
    _add_common(classify)

    competitor = commands.add_parser("competitor", help="build and evaluate a surgery competitor")
    competitor.add_argument("--construction", choices=("pendant", "gl", "tower"), default="pendant")
    competitor.add_argument("--pendant", type=float, default=None, help="pendant length")
    competitor.add_argument("--new-pendant", type=float, default=None, help="target pendant length (gl)")
    competitor.add_argument("--arcs", type=float, nargs="+", default=None, help="bubble arc lengths (tower)")
    _add_solver(competitor)
    _add_common(competitor)

    critical = commands.add_parser("critical-length", help="bisection for the critical pendant length")
    _add_solver(critical)
    critical.add_argument("--width", type=float, default=None)
    critical.add_argument("--ell-low", type=float, default=None)
    critical.add_argument("--ell-high", type=float, default=None)
    critical.add_argument("--pendant", type=float, default=None, help="also report the critical mass at this length")
    _add_common(critical)

    limit = commands.add_parser("limit-table", help="energies for growing pendant length")
    _add_solver(limit)
    limit.add_argument("--lengths", type=float, nargs="+", default=None)
    _add_common(limit)

    return parser


async def _dispatch(args: argparse.Namespace) -> Dict[str, Any]:
    command = args.command
    if command == "check":
        return await graph_check(args.graph, args.pendant)
    if command == "levels":
        return await graph_levels(args.mass, args.power)
    if command == "minimize":
        return await graph_minimize(
            args.graph, args.mass, args.power, args.h_max, args.truncation, args.tol_grad,
            args.max_iters, args.starts, args.seed, args.workers, args.pendant,
        )
    if command == "classify":
        return await graph_classify(
            args.graph, args.mass, args.power, args.h_max, args.truncation, args.tol_grad,
            args.tol_level, args.max_iters, args.seed, args.workers, args.reference, args.pendant,
        )
    if command == "competitor":
        return await graph_competitor(
            args.construction, args.mass, args.pendant, args.new_pendant, args.arcs,
            args.power, args.h_max, args.truncation, args.seed,
        )
    if command == "critical-length":
        return await graph_critical_length(
            args.mass, args.width, args.ell_low, args.ell_high, args.power, args.h_max,
            args.truncation, args.max_iters, args.seed, args.workers, args.pendant,
        )
    return await graph_limit_table(
        args.mass, args.lengths, args.power, args.h_max, args.truncation,
        args.max_iters, args.seed, args.workers,
    )


def _view(result: Dict[str, Any]) -> Dict[str, Any]:
    return {k: v for k, v in result.items() if k not in PAYLOAD_KEYS}


def render_text(command: str, result: Dict[str, Any]) -> str:
    """Deterministic text report for a successful tool result"""
    if command == "check":
        view = _view(result)
        flags = (f"assumption_h: {'true' if view.pop('assumption_h') else 'false'}, "
                 f"bubble_tower: {'true' if view.pop('bubble_tower') else 'false'}")
        return format_report(view) + flags + "\n"
    if command == "levels":
        header = format_report({"mass": result["mass"], "power": result["power"]})
        return header + format_report({ref["kind"]: ref["value"] for ref in result["levels"]})
    return format_report(_view(result))


def render_csv(command: str, result: Dict[str, Any]) -> str:
    """The primary table of a result as CSV"""
    for key in ("profile", "probes", "rows"):
        if key in result:
            return result[key]["data"]
    if command == "levels":
        return export_to_csv(result["levels"], "levels", ("kind", "value", "derived"))["data"]
    return export_to_csv([_flat(_view(result))], command)["data"]


def _flat(view: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in view.items():
        if isinstance(value, dict):
            flat.update(_flat(value, f"{prefix}{key}."))
        elif not isinstance(value, (list, tuple)):
            flat[f"{prefix}{key}"] = value
    return flat


def _report_name(command: str, result: Dict[str, Any]) -> Optional[str]:
    label = result.get("graph") or result.get("label")
    if command == "minimize":
        return f"{label}_report.txt"
    if command == "classify":
        return f"{label}_verdict.txt"
    if command == "competitor":
        return f"{label}_competitor.txt"
    return None


def write_outputs(command: str, result: Dict[str, Any], text: str, output_dir: Optional[str]) -> None:
    directory = output_dir or settings.OUTPUT_DIR
    for key in ("profile", "probes", "rows"):
        if key in result:
            write_export(result[key], directory)
    name = _report_name(command, result)
    if name:
        path = settings.output_path(name, directory)
        path.write_text(text, encoding="utf-8", newline="")
        logger.info(f"Wrote report to {path}")


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings.refresh()
    configure_logging(args.log_level)

    config_status = settings.validate_config()
    if not config_status['valid']:
        for error in config_status['errors']:
            print(f"error: {error}", file=sys.stderr)
        return 2
    for warning in config_status['warnings']:
        logger.warning(f"Configuration warning: {warning}")

    result = asyncio.run(_dispatch(args))
    if not result.get("success"):
        message = " ".join(str(result.get("error", "unknown error")).split())
        print(f"error: {message}", file=sys.stderr)
        return ERROR_EXIT

    text = render_text(args.command, result)
    sys.stdout.write(text if args.format == "text" else render_csv(args.command, result))
    try:
        write_outputs(args.command, result, text, args.output_dir)
    except OSError as e:
        print(f"error: cannot write output: {e}", file=sys.stderr)
        return ERROR_EXIT

    return result.get("exit_code", 0)


def main() -> None:
    """Console entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()

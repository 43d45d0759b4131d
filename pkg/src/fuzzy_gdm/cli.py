"""Command line entry point: ``fuzzy-gdm {validate,weights,analyze,rank,pipeline}``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from . import io
from .problem import DecisionProblem, ProblemValidationError, validate_problem
from .ranking import DEFAULT_TIE_TOL, rank_problem
from .relations import analyze_relations
from .weights import SolverConfig, WeightDomainError, elicit_weights

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PARSE = 3
EXIT_NOT_CONVERGED = 4

log = logging.getLogger("fuzzy_gdm")


def _weight_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("problem", help="problem file (JSON)")
    common.add_argument("--out", help="write the JSON report here (default: stdout)")
    common.add_argument("--format", choices=("json", "table"), default="json",
                        help="stdout format when --out is not given")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--starts", type=int, default=32)
    common.add_argument("--max-iterations", type=int, default=2000)
    common.add_argument("--max-rounds", type=int, default=20)
    common.add_argument("--zero-tol", type=float, default=1e-3)
    common.add_argument("--tie-tol", type=float, default=DEFAULT_TIE_TOL)
    common.add_argument("--strict", action="store_true", help="exit 4 if weight elicitation does not converge")
    common.add_argument("--skip-elicitation", action="store_true", help="use --weights instead of solving")
    common.add_argument("--weights", type=_weight_list, help="comma-separated criteria weights")
    common.add_argument("--from", dest="previous", help="report from an earlier stage to build on")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="fuzzy-gdm", description="Fuzzy multi-criteria group decision pipeline")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check a problem file")
    sub.add_parser("weights", parents=[common], help="elicit consensus criteria weights")
    sub.add_parser("analyze", parents=[common], help="criteria relations and partitions")
    sub.add_parser("rank", parents=[common], help="final degrees and ranking of alternatives")
    sub.add_parser("pipeline", parents=[common], help="weights, analyze and rank in one go")
    return parser


def _config(args) -> dict:
    cfg = io.solver_config_dict(_solver_config(args))
    cfg["tie_tol"] = args.tie_tol
    cfg["skip_elicitation"] = bool(args.skip_elicitation)
    return cfg


def _solver_config(args) -> SolverConfig:
    return SolverConfig(seed=args.seed, starts=args.starts, max_iterations=args.max_iterations,
                        zero_tol=args.zero_tol, max_rounds=args.max_rounds)


def _emit(report: dict, args) -> None:
    if args.out:
        io.write_json(report, args.out)
        sys.stdout.write(io.render_tables(report))
    elif args.format == "table":
        sys.stdout.write(io.render_tables(report))
    else:
        sys.stdout.write(io.write_json(report))


def _weights_stage(report: dict, problem: DecisionProblem, args) -> bool:
    if args.skip_elicitation:
        if not args.weights:
            raise SystemExit("--skip-elicitation requires --weights")
        if len(args.weights) != problem.n:
            raise WeightDomainError(f"--weights has {len(args.weights)} values for {problem.n} criteria")
        report["weights"] = io.injected_weights_section(args.weights, problem)
        return True
    sol = elicit_weights(problem, _solver_config(args))
    report["weights"] = io.weights_section(sol, problem)
    return sol.converged


def _start_report(problem: DecisionProblem, args) -> dict:
    report = io.new_report(problem, _config(args))
    if args.previous:
        prev = io.load_document(args.previous)
        for key in ("weights", "relations", "ranking"):
            if key in prev:
                report[key] = prev[key]
    return report


def _rank_stage(report: dict, problem: DecisionProblem, args) -> None:
    if args.weights and (args.skip_elicitation or "weights" not in report):
        report["weights"] = io.injected_weights_section(args.weights, problem)
    if "weights" not in report:
        raise SystemExit("rank needs weights: pass --weights or --from a weights report")
    weights = io.weights_from_report(report)
    if "relations" not in report:
        report["relations"] = io.relations_section(analyze_relations(problem), problem)
    partitions = io.relations_from_section(report["relations"], problem)
    result = rank_problem(problem, weights, partitions, tie_tol=args.tie_tol)
    report["ranking"] = io.ranking_section(result, problem)


def run(args) -> int:
    try:
        doc = io.load_document(args.problem)
        problem = io.problem_from_dict(doc)
    except io.ProblemParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    vreport = validate_problem(problem)
    if args.command == "validate":
        for v in vreport:
            print(v)
        print("valid" if vreport.ok else f"invalid: {len(vreport.errors)} error(s)")
        return EXIT_OK if vreport.ok else EXIT_INVALID
    if not vreport.ok:
        for v in vreport.errors:
            print(v, file=sys.stderr)
        return EXIT_INVALID
    for v in vreport.warnings:
        log.warning("%s", v)

    converged = True
    try:
        report = _start_report(problem, args)
        if args.command in ("weights", "pipeline"):
            converged = _weights_stage(report, problem, args)
        if args.command in ("analyze", "pipeline"):
            report["relations"] = io.relations_section(analyze_relations(problem), problem)
        if args.command in ("rank", "pipeline"):
            _rank_stage(report, problem, args)
    except (ProblemValidationError, WeightDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    _emit(report, args)
    if not converged:
        log.warning("weight elicitation did not converge within %d rounds", args.max_rounds)
        if args.strict:
            return EXIT_NOT_CONVERGED
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", force=True)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())

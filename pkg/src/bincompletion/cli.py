"""
Command-line front end: generate, solve, bench, verify
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import structlog

from .bench import aggregate, format_table, parse_solver_choice, run_bench, write_csv
from .config import SolverSettings, get_config
from .core import validate_layout
from .exceptions import (
    BenchError,
    BinCompletionError,
    GenerationBudgetError,
    InstanceParseError,
    OracleLimitError,
)
from .instances import (
    GenSpec,
    InstanceClass,
    generate_instance,
    instance_filename,
    read_instance,
    read_solution_layout,
    write_instance,
    write_solution,
)
from .models import ProblemKind, PruningPolicy, SolverConfig, SolveStatus, ValueOrdering
from .solvers import solve

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TIME_LIMIT = 2
EXIT_NODE_LIMIT = 3
EXIT_INFEASIBLE = 4
EXIT_PARSE_ERROR = 5
EXIT_INVALID = 6
EXIT_REFUSED = 7

STATUS_EXIT = {
    SolveStatus.OPTIMAL: EXIT_OK,
    SolveStatus.TIME_LIMIT: EXIT_TIME_LIMIT,
    SolveStatus.NODE_LIMIT: EXIT_NODE_LIMIT,
    SolveStatus.INFEASIBLE: EXIT_INFEASIBLE,
}


def configure_logging(settings: SolverSettings) -> None:
    """Route structlog through stdlib logging on stderr."""
    level = getattr(logging, settings.log_level, logging.INFO)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(message)s", force=True)

    renderer = (
        structlog.processors.JSONRenderer()
        if settings.log_format == "json"
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def _h_value(token: str):
    if token.lower() == "unbounded":
        return "unbounded"
    value = int(token)
    if value < 1:
        raise argparse.ArgumentTypeError("h must be >= 1 or 'unbounded'")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bincompletion",
        description="Bin completion solvers for bin packing, multiple knapsack, bin covering and min-cost covering",
    )
    parser.add_argument("--env", default=None, help="Settings environment (development, production, testing)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Write random instances")
    gen.add_argument("--kind", required=True, choices=[k.value for k in ProblemKind])
    gen.add_argument("--class", dest="instance_class", default=InstanceClass.UNCORRELATED.value,
                     choices=[c.value for c in InstanceClass])
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, default=1)
    gen.add_argument("--range", type=int, nargs=2, default=[1, 100], metavar=("MIN", "MAX"))
    gen.add_argument("--capacity", type=int, default=None, help="Bin packing capacity")
    gen.add_argument("--quota", type=int, default=None, help="Bin covering quota")
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0, help="Seed of the first instance; later ones count up")
    gen.add_argument("--nontrivial", action="store_true", help="Reject bin covering instances closed at the root")
    gen.add_argument("--out", type=Path, default=Path("."))

    slv = sub.add_parser("solve", help="Solve one instance file")
    slv.add_argument("instance", type=Path)
    slv.add_argument("--solver", choices=["bc", "item", "oracle"], default="bc")
    slv.add_argument("--pruning", choices=[p.value for p in PruningPolicy], default=None)
    slv.add_argument("--ordering", choices=[o.value for o in ValueOrdering], default=None)
    slv.add_argument("--h", type=_h_value, default=None, help="Children per batch, or 'unbounded'")
    slv.add_argument("--time-limit", type=float, default=None)
    slv.add_argument("--node-limit", type=int, default=None)
    slv.add_argument("--seed", type=int, default=None)
    slv.add_argument("--format", choices=["text", "record"], default="text")
    slv.add_argument("--solution-out", type=Path, default=None)

    bch = sub.add_parser("bench", help="Run solvers over a directory of instances")
    bch.add_argument("instance_dir", type=Path)
    bch.add_argument("--solvers", nargs="+", default=["bc:ndp"],
                     help="Solver choices such as bc:ndp bc:np bc:none item")
    bch.add_argument("--time-limit", type=float, default=None)
    bch.add_argument("--node-limit", type=int, default=None)
    bch.add_argument("--workers", type=int, default=None)
    bch.add_argument("--out", type=Path, default=None, help="CSV output path")

    ver = sub.add_parser("verify", help="Check a solution file against its instance")
    ver.add_argument("instance", type=Path)
    ver.add_argument("solution", type=Path)
    ver.add_argument("--against-oracle", action="store_true")

    return parser


def cmd_generate(args: argparse.Namespace, settings: SolverSettings) -> int:
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        spec = GenSpec(
            kind=ProblemKind(args.kind),
            n=args.n,
            m=args.m,
            weight_range=tuple(args.range),
            instance_class=InstanceClass(args.instance_class),
            capacity=args.capacity,
            quota=args.quota,
            seed=args.seed + k,
        )
        instance = generate_instance(spec, budget=settings.generation_budget, nontrivial=args.nontrivial)
        path = write_instance(instance, out / instance_filename(spec), spec.metadata())
        print(path)
    logger.info("Instances generated", count=args.count, out=str(out))
    return EXIT_OK


def cmd_solve(args: argparse.Namespace, settings: SolverSettings) -> int:
    instance = read_instance(args.instance)
    config = SolverConfig.from_settings(
        settings,
        pruning=args.pruning,
        value_ordering=args.ordering,
        h=args.h,
        time_limit=args.time_limit,
        node_limit=args.node_limit,
        rng_seed=args.seed,
    )
    report = solve(instance, config, solver=args.solver, oracle_max_items=settings.oracle_max_items)

    if args.format == "record":
        print(json.dumps(report.to_record(), sort_keys=True))
    else:
        print(f"instance  {args.instance}")
        print(f"kind      {instance.kind.value}")
        print(f"solver    {report.solver}")
        print(f"status    {report.status.value}")
        print(f"objective {report.objective if report.objective is not None else '-'}")
        print(f"nodes     {report.nodes}")
        print(f"elapsed   {report.elapsed:.4f}s")

    if args.solution_out is not None and report.solution is not None:
        write_solution(report.solution, args.solution_out)
    return STATUS_EXIT[report.status]


def cmd_bench(args: argparse.Namespace, settings: SolverSettings) -> int:
    try:
        choices = [parse_solver_choice(token) for token in args.solvers]
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR

    runs = run_bench(
        args.instance_dir,
        choices,
        time_limit=args.time_limit or settings.time_limit,
        node_limit=args.node_limit or settings.node_limit,
        workers=args.workers or settings.bench_workers,
        config=SolverConfig.from_settings(settings),
    )
    table = aggregate(runs)
    if args.out is not None:
        write_csv(table, args.out)
    print(format_table(table))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: SolverSettings) -> int:
    instance = read_instance(args.instance)
    layout = read_solution_layout(args.solution, instance)
    verdict = validate_layout(instance, layout)

    for violation in verdict.violations:
        print(f"{violation.code}: {violation.message}")

    if not verdict.valid:
        return EXIT_INVALID

    if args.against_oracle:
        report = solve(instance, solver="oracle", oracle_max_items=settings.oracle_max_items)
        if report.objective != verdict.recomputed_objective:
            print(
                f"objective-gap: solution {verdict.recomputed_objective}, optimum {report.objective}"
            )
            return EXIT_INVALID

    print(f"valid objective {verdict.recomputed_objective}")
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "bench": cmd_bench,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        settings = get_config(args.env)
    except BinCompletionError as e:
        print(str(e), file=sys.stderr)
        return EXIT_ERROR
    configure_logging(settings)

    try:
        return COMMANDS[args.command](args, settings)
    except InstanceParseError as e:
        logger.error("Parse error", error=e.to_dict())
        print(f"parse error: {e.message}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except (OracleLimitError, BenchError) as e:
        logger.error("Request refused", error=e.to_dict())
        print(f"refused: {e.message}", file=sys.stderr)
        return EXIT_REFUSED
    except GenerationBudgetError as e:
        logger.error("Generation failed", error=e.to_dict())
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_ERROR
    except BinCompletionError as e:
        logger.error("Command failed", error=e.to_dict())
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        logger.error("File error", error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR

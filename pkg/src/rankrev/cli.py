"""Command-line front end.

Exit codes: 0 ran and passed, 3 ran and failed, 1 bad input, 2 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .core import DecisionMatrix
from .errors import InputError
from .methods import run_pipeline
from .problem import ProblemConfig, build_decider, build_tie_policy, load_problem
from .rank_invariant import Rrt1Config, rrt1_verdict, run_rrt1
from .ranking import RanksComparator, to_rank_table
from .report import AuditReport
from .transitivity import max_three_cycles, run_rrt2, run_rrt3

logger = logging.getLogger("rankrev")

EXIT_PASS = 0
EXIT_INPUT = 1
EXIT_RUNTIME = 2
EXIT_FAIL = 3


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not argparse's default exit 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _u64(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _jobs(text: str) -> int:
    value = int(text)
    return (os.cpu_count() or 1) if value <= 0 else value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rankrev", description="Rank reversal audits for MCDA methods.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--matrix", required=True, type=Path, help="decision matrix CSV")
        p.add_argument("--config", required=True, type=Path, help="problem config (JSON/YAML)")
        p.add_argument("--out", required=True, type=Path, help="report JSON path")
        p.add_argument("--seed", type=_u64, default=0)
        p.add_argument("--jobs", type=_jobs, default=1,
                       help="worker threads; 0 uses every core (output does not change)")

    common(sub.add_parser("eval", help="rank the alternatives"))

    p = sub.add_parser("rrt1", help="test 1: stability of the best alternative")
    common(p)
    p.add_argument("--repeats", type=_positive, default=1)
    p.add_argument("--allow-missing", type=_bool, default=True)
    p.add_argument("--aggregator", choices=("median", "mean"), default="median")

    common(sub.add_parser("rrt2", help="test 2: pairwise transitivity"))

    p = sub.add_parser("rrt3", help="test 3: recomposition consistency")
    common(p)
    p.add_argument("--candidates", type=_positive, default=1)
    p.add_argument("--strategy", choices=("random", "weighted"), default="random")
    return parser


def _matrix_dict(dm: DecisionMatrix) -> dict:
    return {
        "alternatives": list(dm.alternatives),
        "criteria": list(dm.criteria),
        "objectives": [o.value for o in dm.objectives],
        "weights": dm.weights.tolist(),
        "values": dm.values.tolist(),
    }


def _table_dict(rc: RanksComparator) -> dict:
    table = to_rank_table(rc)
    return {
        "labels": table.labels,
        "alternatives": table.alternatives,
        "values": table.values.tolist(),
    }


def _cmd_eval(args, dm, config: ProblemConfig):
    rank = run_pipeline(build_decider(config), dm)
    print(f"eval: {' > '.join(rank.extra['pipeline.steps'])}")
    for alt, value in sorted(rank.as_dict().items(), key=lambda kv: (kv[1], kv[0])):
        print(f"  {value:>3}  {alt}")
    return {}, {"ranking": rank.to_dict()}


def _cmd_rrt1(args, dm, config):
    rrt1_config = Rrt1Config(
        repeats=args.repeats,
        seed=args.seed,
        allow_missing=args.allow_missing,
        last_alternative_aggregator=args.aggregator,
    )
    rc = run_rrt1(build_decider(config), dm, rrt1_config, n_jobs=args.jobs)
    verdict = rrt1_verdict(rc)
    print(
        f"rrt1: {'PASS' if verdict.passed else 'FAIL'} "
        f"(rate {verdict.rate:.4f} over {len(verdict.mutations)} mutations)"
    )
    results = {
        "repeats": args.repeats,
        "allow_missing": args.allow_missing,
        "aggregator": args.aggregator,
        "verdict": verdict.to_dict(),
        "rankings": rc.to_dict(),
        "rank_table": _table_dict(rc),
    }
    return {"rrt1": verdict.passed}, results


def _rrt2_results(report, n):
    results = report.summary()
    results["trans_break_bound"] = max_three_cycles(n) if n >= 3 else 0
    results["original"] = report.original.to_dict()
    return results


def _cmd_rrt2(args, dm, config):
    report = run_rrt2(build_decider(config), dm, build_tie_policy(config), n_jobs=args.jobs)
    print(
        f"test_criterion_2: {'PASS' if report.test_criterion_2 else 'FAIL'} "
        f"({len(report.trans_break)} 3-cycles, rate {float(report.trans_break_rate):.4f})"
    )
    results = _rrt2_results(report, len(dm.alternatives))
    return {"test_criterion_2": report.test_criterion_2}, results


def _cmd_rrt3(args, dm, config):
    report = run_rrt3(
        build_decider(config),
        dm,
        build_tie_policy(config),
        candidates=args.candidates,
        strategy=args.strategy,
        seed=args.seed,
        n_jobs=args.jobs,
    )
    print(f"test_criterion_2: {'PASS' if report.test_criterion_2 else 'FAIL'}")
    print(f"test_criterion_3: {'PASS' if report.test_criterion_3 else 'FAIL'}")
    original = report.original
    results = {
        "candidates": args.candidates,
        "strategy": args.strategy,
        "test_criterion_2": report.test_criterion_2,
        "test_criterion_3": report.test_criterion_3,
        "transitivity": _rrt2_results(report.transitivity, len(dm.alternatives)),
        "rankings": report.comparator.to_dict(),
        "rank_table": _table_dict(report.comparator),
        "rank_distribution": {
            a: {"original": original.rank_of(a), "recomposed": ranks}
            for a, ranks in report.rank_distribution.items()
        },
    }
    verdicts = {
        "test_criterion_2": report.test_criterion_2,
        "test_criterion_3": report.test_criterion_3,
    }
    return verdicts, results


COMMANDS = {"eval": _cmd_eval, "rrt1": _cmd_rrt1, "rrt2": _cmd_rrt2, "rrt3": _cmd_rrt3}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code

    try:
        dm, config = load_problem(args.matrix, args.config)
    except (InputError, OSError, UnicodeDecodeError) as exc:
        logger.error("%s", exc)
        return EXIT_INPUT

    try:
        verdicts, results = COMMANDS[args.command](args, dm, config)
        report = AuditReport(
            command=args.command,
            tool_version=__version__,
            seed=args.seed,
            config=config.to_dict(),
            matrix=_matrix_dict(dm),
            verdicts=verdicts,
            results=results,
        )
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(report.dumps(), encoding="utf-8")
    except Exception as exc:  # noqa: BLE001 - every runtime failure maps to one exit code
        stage = getattr(exc, "stage_name", None)
        where = f" (pipeline stage {exc.stage_index}: {stage})" if stage else ""
        logger.error("%s: %s%s", type(exc).__name__, exc, where)
        return EXIT_RUNTIME

    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

import argparse
import logging
import sys

from src.config import (DEGREE_CAP, EXIT_ERROR, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, FROBENIUS_MMAX,
                        LOG_LEVEL)
from src.errors import SepAlgError
from src.runner import RunOptions, ScenarioRunner, exit_code
from src.scenario import load_scenario
from src.utils import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sepalg",
        description="Run separating-algebra and Cohen-Macaulay verification scenarios.",
    )
    parser.add_argument("scenarios", nargs="+", help="scenario file(s) (.scn)")
    parser.add_argument("--task", dest="task_filter", help="run only tasks with this kind, label or full name")
    parser.add_argument("--format", dest="output_format", choices=("text", "structured"), default="text")
    parser.add_argument("--degree-cap", type=int, default=DEGREE_CAP, help="Buchberger degree cap")
    parser.add_argument("--mmax", type=int, default=FROBENIUS_MMAX, help="largest Frobenius exponent checked")
    parser.add_argument("--heuristic", action="store_true",
                        help="allow conditional certificates from explicitly checked nontriviality")
    parser.add_argument("--timeout", type=int, default=None, help="per-task time limit in seconds")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, LOG_LEVEL, logging.WARNING),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    options = RunOptions(
        task_filter=args.task_filter,
        output_format=args.output_format,
        degree_cap=args.degree_cap,
        mmax=args.mmax,
        heuristic=args.heuristic,
        timeout=args.timeout,
    )
    runner = ScenarioRunner(options).load_cogs()

    worst = EXIT_OK
    for path in args.scenarios:
        try:
            scenario = load_scenario(path)
        except SepAlgError as e:
            print(f"❌ FATAL: {path}: {e}", file=sys.stderr)
            worst = _combine(worst, EXIT_ERROR)
            continue
        results = runner.run(scenario)
        code = exit_code(results)
        sys.stdout.write(render(options.output_format, scenario.name, results, code))
        worst = _combine(worst, code)
    return worst


def _combine(a: int, b: int) -> int:
    # error beats fail beats inconclusive beats ok
    rank = {EXIT_OK: 0, EXIT_INCONCLUSIVE: 1, EXIT_FAIL: 2, EXIT_ERROR: 3}
    return a if rank.get(a, 0) >= rank.get(b, 0) else b


if __name__ == "__main__":
    sys.exit(main())

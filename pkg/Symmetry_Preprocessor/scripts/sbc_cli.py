#!/usr/bin/env python
"""
Symmetry-Breaking Preprocessor CLI
Reads a ground program in smodels format, adds lex-leader constraints for
its symmetries and writes the result in smodels format

Usage:
    python sbc_cli.py preprocess [input.sm] [-o out.sm] [--k N|inf] [--stats]
    python sbc_cli.py verify input.sm [--k N|inf]
    python sbc_cli.py gen pigeon|allint N [-o out.sm]
    python sbc_cli.py gen random SEED [--symmetric]
"""
import sys
import argparse
import logging
from pathlib import Path

from dotenv import load_dotenv

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

load_dotenv(Path(__file__).parent.parent.parent / ".env")

from preprocessor.automorphism import SearchBudgetExceeded
from preprocessor.benchmarks import allint, pigeon, random_program
from preprocessor.logging_config import set_level
from preprocessor.models import PreprocessOptions
from preprocessor.oracle import OracleTooLarge
from preprocessor.pipeline import (
    EXIT_BUDGET_EXCEEDED,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_VERIFY_FAILED,
    run_preprocess,
    run_verify,
)
from preprocessor.program import SmodelsFormatError, write_smodels
from preprocessor.sbc_builder import TruncationK


def _k_value(text: str):
    try:
        return TruncationK.parse(text).k
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'inf', got '{text}'")


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _write_output(data: bytes, path) -> None:
    if path:
        Path(path).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def cmd_preprocess(args) -> int:
    """Add symmetry-breaking constraints to a program"""
    try:
        source = _read_input(args.input)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    options = PreprocessOptions(
        k=args.k,
        opt_facts=not args.no_opt_facts,
        opt_unary=not args.no_opt_unary,
        budget=args.budget,
        verify=args.verify,
        name_sbc_atoms=args.name_sbc_atoms,
        print_generators=args.print_generators,
    )
    result = run_preprocess(source, options, dump_graph=args.dump_graph)

    if result.message:
        print(result.message, file=sys.stderr)
    if result.exit_code == EXIT_INPUT_ERROR:
        return result.exit_code

    _write_output(result.output, args.output)

    if options.print_generators:
        for i, cycles in enumerate(result.generators, start=1):
            print(f"g{i}: {cycles}", file=sys.stderr)
    if result.stats and args.stats:
        print(result.stats.render(), file=sys.stderr)
    if result.stats and args.stats_json:
        print(result.stats.model_dump_json(), file=sys.stderr)
    if result.verify_report and result.exit_code == EXIT_OK:
        print(f"verify: {result.verify_report.summary()}", file=sys.stderr)
    return result.exit_code


def cmd_verify(args) -> int:
    """Check soundness and orbit coverage of the constraints with the oracle"""
    try:
        report = run_verify(_read_input(args.input), args.k, PreprocessOptions(budget=args.budget))
    except (OSError, SmodelsFormatError, OracleTooLarge) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except SearchBudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET_EXCEEDED

    print(report.summary())
    print(f"  sound:               {'yes' if report.sound else 'no'}")
    print(f"  orbits preserved:    {'yes' if report.orbits_preserved else 'no'} ({report.orbits} orbits)")
    print(f"  existence preserved: {'yes' if report.existence_preserved else 'no'}")
    print(f"  compression:         {report.compression:.2%}")
    print(f"  generators:          {report.generators} (k={report.k})")
    return EXIT_OK if report.ok else EXIT_VERIFY_FAILED


def cmd_gen(args) -> int:
    """Write a benchmark program"""
    if args.family == "pigeon":
        program = pigeon(args.n)
    elif args.family == "allint":
        program = allint(args.n)
    else:
        program = random_program(args.n, args.max_atoms, args.max_rules, args.symmetric)
    _write_output(write_smodels(program), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Symmetry-breaking preprocessor for ground disjunctive programs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  sbc_cli.py preprocess prog.sm -o prog.sbc.sm     Full constraints
  sbc_cli.py preprocess prog.sm --k 2 --stats      Truncated constraints, stats on stderr
  sbc_cli.py preprocess --print-generators < prog.sm
  sbc_cli.py verify prog.sm                        Oracle check (small programs)
  sbc_cli.py gen pigeon 5 -o pigeon5.sm            Benchmark instance
  sbc_cli.py gen random 7 --symmetric              Random program
        """
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")

    subparsers = parser.add_subparsers(dest="command", required=True)

    # preprocess
    p_pre = subparsers.add_parser("preprocess", help="Add symmetry-breaking constraints")
    p_pre.add_argument("input", nargs="?", default="-", help="smodels file (default: stdin)")
    p_pre.add_argument("-o", "--output", help="Output path (default: stdout)")
    p_pre.add_argument("--k", type=_k_value, default=None, help="Lex positions per constraint, N or 'inf'")
    p_pre.add_argument("--print-generators", action="store_true", help="Print generators in cycle notation")
    p_pre.add_argument("--stats", action="store_true", help="Print statistics")
    p_pre.add_argument("--stats-json", action="store_true", help="Print statistics as JSON")
    p_pre.add_argument("--no-opt-facts", action="store_true", help="Keep body vertices for facts")
    p_pre.add_argument("--no-opt-unary", action="store_true", help="Keep body vertices for one-literal bodies")
    p_pre.add_argument("--budget", type=int, default=None, help="Automorphism search node budget")
    p_pre.add_argument("--verify", action="store_true", help="Check with the answer-set oracle before emitting")
    p_pre.add_argument("--name-sbc-atoms", action="store_true", help="Name chain atoms _sbc(g,i)")
    p_pre.add_argument("--dump-graph", help="Write the coloured graph to PATH")
    p_pre.set_defaults(func=cmd_preprocess)

    # verify
    p_verify = subparsers.add_parser("verify", help="Oracle check of the constraints")
    p_verify.add_argument("input", help="smodels file ('-' for stdin)")
    p_verify.add_argument("--k", type=_k_value, default=None, help="Lex positions per constraint, N or 'inf'")
    p_verify.add_argument("--budget", type=int, default=None, help="Automorphism search node budget")
    p_verify.set_defaults(func=cmd_verify)

    # gen
    p_gen = subparsers.add_parser("gen", help="Generate a benchmark program")
    p_gen.add_argument("family", choices=["pigeon", "allint", "random"])
    p_gen.add_argument("n", type=int, help="Size (pigeon/allint) or seed (random)")
    p_gen.add_argument("-o", "--output", help="Output path (default: stdout)")
    p_gen.add_argument("--symmetric", action="store_true", help="random: close rules under an involution")
    p_gen.add_argument("--max-atoms", type=int, default=8, help="random: atom limit")
    p_gen.add_argument("--max-rules", type=int, default=12, help="random: rule limit")
    p_gen.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        set_level(logging.DEBUG)
    try:
        return args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())

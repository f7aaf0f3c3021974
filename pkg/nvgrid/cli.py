"""
Command-line surface.

Every command reads files (or "-" for stdin), writes its payload to stdout
and returns an exit code: 0 success, 1 usage, 2 parse error, 3 validation
error, 4 rule error, 5 contract violation.
"""

import argparse
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import NoReturn

from config import env
from nvgrid.element import (
    Element,
    check_dims,
    compose,
    equals,
    evaluate,
    invert,
    random_element,
    random_refinement,
)
from nvgrid.exceptions import (
    CapExceeded,
    ContractViolation,
    CountMismatch,
    DimMismatch,
    DimUnsupported,
    InvalidParameter,
    NegativeIndex,
    NVGridError,
    ParseError,
    PatternError,
    RuleError,
    UnsupportedFamily,
)
from nvgrid.formats import (
    parse_element,
    parse_point,
    parse_word,
    render_diagram,
    render_element,
    render_point,
)
from nvgrid.grid import Side, canon, gridify
from nvgrid.metrics import (
    length_bounds,
    permutation_count_experiment,
    refinement_bound_suite,
    render_bounds,
    render_permutations,
    render_report,
    spine_grid,
)
from nvgrid.selfcheck import run_checks
from nvgrid.utils.logger import conf_logger
from nvgrid.words import RuleTable, interpret, load_rules, normal_form, rewrite_finite

logger = conf_logger(__name__, "I")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_RULE = 4
EXIT_CONTRACT = 5

EXIT_CODES: list[tuple[type[NVGridError], int]] = [
    (ParseError, EXIT_PARSE),
    (PatternError, EXIT_VALIDATION),
    (DimMismatch, EXIT_VALIDATION),
    (CountMismatch, EXIT_VALIDATION),
    (NegativeIndex, EXIT_VALIDATION),
    (UnsupportedFamily, EXIT_VALIDATION),
    (DimUnsupported, EXIT_VALIDATION),
    (CapExceeded, EXIT_VALIDATION),
    (InvalidParameter, EXIT_USAGE),
    (RuleError, EXIT_RULE),
    (ContractViolation, EXIT_CONTRACT),
]


class UsageError(Exception):
    """Bad command line"""


class SuiteFailed(ContractViolation):
    def __init__(self, msg: str, output: str) -> None:
        super().__init__(msg)
        self.output = output


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def exit_code_for(error: NVGridError) -> int:
    for error_type, code in EXIT_CODES:
        if isinstance(error, error_type):
            return code
    return EXIT_CONTRACT


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        msg = f"Cannot read {path}: {e.strerror}"
        raise UsageError(msg) from e


def _element(path: str) -> Element:
    return parse_element(_read(path))


def cmd_canon(args: argparse.Namespace) -> str:
    return render_diagram(canon(_element(args.file), Side(args.side)))


def cmd_grid(args: argparse.Namespace) -> str:
    return render_diagram(gridify(_element(args.file), Side(args.side)))


def cmd_eq(args: argparse.Namespace) -> str:
    first, second = _element(args.first), _element(args.second)
    check_dims(first, second)
    same = canon(first) == canon(second)
    if args.verify and same != equals(first, second):
        msg = "Canonical forms and the refinement oracle disagree"
        logger.error(msg)
        raise ContractViolation(msg)
    return "equal\n" if same else "distinct\n"


def cmd_compose(args: argparse.Namespace) -> str:
    return render_element(compose(_element(args.first), _element(args.second)))


def cmd_invert(args: argparse.Namespace) -> str:
    return render_element(invert(_element(args.file)))


def cmd_eval(args: argparse.Namespace) -> str:
    element = _element(args.file)
    return render_point(evaluate(element, parse_point(args.point, element.dim))) + "\n"


def cmd_word(args: argparse.Namespace) -> str:
    word = normal_form(_element(args.file), Side(args.side), verbose=args.zeros)
    return f"{word}\n"


def cmd_interp(args: argparse.Namespace) -> str:
    return render_element(interpret(parse_word(_read(args.file))))


def cmd_rewrite(args: argparse.Namespace) -> str:
    rules = RuleTable(load_rules(Path(args.rules)) if args.rules else ())
    word = parse_word(_read(args.file))
    result = rewrite_finite(word, rules)
    lines = [f"# verified {rule}" for rule in rules.verified]
    lines.extend(("# interpretations agree", str(result)))
    return "\n".join(lines) + "\n"


def cmd_random(args: argparse.Namespace) -> str:
    if args.budget < 0 or args.dim < 1 or args.refine < 0:
        msg = "random needs --budget >= 0, --dim >= 1 and --refine >= 0"
        raise UsageError(msg)
    element = random_element(args.seed, args.dim, args.budget)
    if args.refine:
        element = random_refinement(element, args.seed, args.refine)
    return render_element(element)


def cmd_stats(args: argparse.Namespace) -> str:
    match args.kind:
        case "bounds":
            if args.trials < 0 or args.dim < 1 or args.budget < 0 or args.workers < 1:
                msg = "stats bounds needs --trials >= 0, --dim >= 1, --budget >= 0, --workers >= 1"
                raise UsageError(msg)
            report = refinement_bound_suite(
                args.seed, args.trials, args.dim, args.budget, workers=args.workers,
            )
            return render_report(report, args.format)
        case "perms":
            try:
                counts = [int(part) for part in args.grid.split(",")]
            except ValueError as e:
                msg = f"Bad --grid {args.grid!r}, expected leaf counts like 2,2"
                raise UsageError(msg) from e
            if min(counts) < 1:
                msg = "Leaf counts must be positive"
                raise UsageError(msg)
            return render_permutations(permutation_count_experiment(spine_grid(counts), args.cap))
        case _:
            if args.file is None:
                msg = "stats length needs an element file"
                raise UsageError(msg)
            return render_bounds(length_bounds(_element(args.file)))


def cmd_check(args: argparse.Namespace) -> str:
    results = run_checks(args.seed, args.trials, full=args.full)
    failed = [result for result in results if not result.passed]
    lines = [str(result) for result in results]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    output = "\n".join(lines) + "\n"
    if failed:
        msg = f"{len(failed)} self-consistency checks failed"
        raise SuiteFailed(msg, output)
    return output


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="nvgrid", description="Thompson groups nV toolkit")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    def add(name: str, handler: Callable[[argparse.Namespace], str], help_: str) -> ArgumentParser:
        sub = commands.add_parser(name, help=help_)
        sub.set_defaults(handler=handler)
        return sub

    for name, handler, help_ in (
        ("canon", cmd_canon, "canonical reduced grid diagram"),
        ("grid", cmd_grid, "gridded, unreduced diagram"),
    ):
        sub = add(name, handler, help_)
        sub.add_argument("file")
        sub.add_argument("--side", choices=[side.value for side in Side], default="source")

    sub = add("eq", cmd_eq, "compare two elements")
    sub.add_argument("first")
    sub.add_argument("second")
    sub.add_argument("--verify", action="store_true", help="cross-check with the oracle")

    sub = add("compose", cmd_compose, "first, then second")
    sub.add_argument("first")
    sub.add_argument("second")

    sub = add("invert", cmd_invert, "inverse element")
    sub.add_argument("file")

    sub = add("eval", cmd_eval, "apply element to a dyadic point")
    sub.add_argument("file")
    sub.add_argument("--point", required=True, help='e.g. "3/8,5/8"')

    sub = add("word", cmd_word, "normal-form word of a 2V element")
    sub.add_argument("file")
    sub.add_argument("--zeros", action="store_true", help="keep zero exponents")
    sub.add_argument("--side", choices=[side.value for side in Side], default="source")

    sub = add("interp", cmd_interp, "element of a word")
    sub.add_argument("file")

    sub = add("rewrite", cmd_rewrite, "rewrite a word over the finite generating set")
    sub.add_argument("file")
    sub.add_argument("--rules", help="extra LHS := RHS rules")

    sub = add("random", cmd_random, "seeded random element")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--budget", type=int, default=8)
    sub.add_argument("--dim", type=int, default=2)
    sub.add_argument("--refine", type=int, default=0, help="extra carets on both sides")

    sub = add("stats", cmd_stats, "metric experiments")
    sub.add_argument("kind", choices=["bounds", "perms", "length"])
    sub.add_argument("file", nargs="?")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--trials", type=int, default=100)
    sub.add_argument("--dim", type=int, default=2)
    sub.add_argument("--budget", type=int, default=20)
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--format", choices=["text", "csv"], default="text")
    sub.add_argument("--grid", default="2,2", help="leaf counts per coordinate")
    sub.add_argument("--cap", type=int, default=env.PERMUTATION_CAP)

    sub = add("check", cmd_check, "self-consistency suite")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--trials", type=int, default=20)
    sub.add_argument("--full", action="store_true", help="acceptance sizes")

    return parser


def run(argv: Sequence[str]) -> tuple[str, int]:
    """Function run one command and return (stdout text, exit code)"""
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args), EXIT_OK
    except UsageError as e:
        sys.stderr.write(f"{e}\n")
        return "", EXIT_USAGE
    except NVGridError as e:
        sys.stderr.write(f"error: {e}\n")
        return getattr(e, "output", ""), exit_code_for(e)


def main(argv: Sequence[str] | None = None) -> int:
    output, code = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())

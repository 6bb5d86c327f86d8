"""Command line interface.

Exit status: 0 success (satisfiable program, all corpus entries pass),
1 inconsistent program or corpus mismatch, 2 malformed command line or input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .asp.parser import parse
from .asp.solver import solve
from .asp.syntax import Program
from .compiler import compile_system, lint, load_norm_spec, norm_levels
from .errors import DeontaspError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("deontasp")


def _read_programs(paths) -> Program:
    program = Program()
    for p in paths:
        try:
            text = Path(p).read_text(encoding="utf-8")
        except OSError as exc:
            raise DeontaspError(f"cannot read {p}: {exc.strerror}") from None
        program = program + parse(text, str(p))
    return program


def cmd_solve(args) -> int:
    program = _read_programs(args.program)
    answers = solve(program, optimal=not args.all, limit=args.max_models)
    if not answers:
        print("INCONSISTENT", file=sys.stderr)
        return EXIT_FAIL
    for i, a in enumerate(answers, 1):
        if args.format == "structured":
            record = {
                "model": i,
                "literals": [str(l) for l in a],
                "cost": {str(lvl): w for lvl, w in sorted(a.cost.as_dict().items())},
            }
            print(json.dumps(record, sort_keys=True))
        else:
            print(f"Answer {i}: {a}")
            if program.weak:
                print(f"Cost: {a.cost}")
    if args.format == "text":
        kind = "answer sets" if args.all else "optimal answer sets"
        print(f"{len(answers)} {kind}")
    return EXIT_OK


def cmd_compile(args) -> int:
    system = load_norm_spec(args.spec)
    for warning in lint(system):
        print(f"warning: {warning}", file=sys.stderr)
    if args.levels:
        for norm_id, level in sorted(norm_levels(system).items(), key=lambda kv: (-kv[1], kv[0])):
            print(f"{norm_id}\t{level}")
        return EXIT_OK
    sys.stdout.write(str(compile_system(system, with_core=args.with_core)))
    return EXIT_OK


def cmd_corpus(args) -> int:
    from .corpus import run_corpus

    results = run_corpus(args.filter, source=args.source)
    if not results:
        print(f"no corpus entry matches {args.filter!r}", file=sys.stderr)
        return EXIT_USAGE
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} entries passed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_pacman(args) -> int:
    from .pacman.layout import load_layout
    from .pacman.runner import run_games

    layout = load_layout(args.layout)

    def show(record) -> None:
        if args.trace:
            for step in record.trace:
                print(step.line())
        print(record.line())

    stats = run_games(args.base, args.games, args.seed, layout, trace=args.trace, on_game=show)
    print(stats.table())
    print(stats.to_json())
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 as well; keep the message format
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="deontasp", description="Deontic reasoning with answer-set programs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log more (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="print the answer sets of a program")
    p.add_argument("program", nargs="+", help="program files, concatenated in order")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--all", action="store_true", help="enumerate all answer sets, ignoring weak constraints")
    mode.add_argument("--optimal", action="store_true", help="only optimal answer sets (default)")
    p.add_argument("--max-models", type=_positive, default=None, metavar="N")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compile", help="compile a norm specification")
    p.add_argument("spec", help="YAML norm specification")
    p.add_argument("--with-core", action="store_true", help="prepend the common deontic core")
    p.add_argument("--levels", action="store_true", help="print the norm to level table instead")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("corpus", help="run the regression corpus")
    p.add_argument("--filter", default=None, metavar="NAME", help="only entries whose name contains NAME")
    p.add_argument("--source", choices=("program", "spec"), default="program",
                   help="solve the stored programs or recompile the norm specifications")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("pacman", help="play supervised Pac-man games")
    p.add_argument("--base", choices=("vegan", "vegetarian", "weak-vegan"), default="vegan")
    p.add_argument("--games", type=_positive, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--layout", default=None, help="layout file (default: bundled small classic maze)")
    p.add_argument("--trace", action="store_true", help="print every step")
    p.set_defaults(func=cmd_pacman)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * args.verbose
    logging.basicConfig(level=max(level, logging.DEBUG), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DeontaspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

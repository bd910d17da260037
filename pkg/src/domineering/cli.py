"""Command-line interface.

Exit codes: 0 success or true, 1 false or mismatch, 2 resource error
(budget or timeout), 3 input error.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from .board import BoardError, Position, parse_boards, rect
from .cgt import GameSyntaxError, Relation, ResourceError, default_store, format_game, parse_game
from .rules import ContradictionError

EXIT_OK, EXIT_FALSE, EXIT_RESOURCE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def parse_board_arg(text: str) -> list[Position]:
    """``RxC`` for an empty board with R rows, otherwise a board file."""
    m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", text)
    if m:
        return [rect(int(m.group(1)), int(m.group(2)))]
    path = Path(text)
    if not path.is_file():
        raise InputError(f"{text!r} is neither RxC nor a readable board file")
    return parse_boards(path.read_text(encoding="utf-8"))


def _game(text: str):
    return parse_game(text, default_store)


def cmd_value(args) -> int:
    from .solver import ValueSolver

    vs = ValueSolver(max_cells=args.max_cells, node_budget=args.node_budget)
    total = default_store.sum(vs.value_of_position(p) for p in parse_board_arg(args.board))
    print(format_game(total))
    return EXIT_OK


def cmd_outcome(args) -> int:
    from .solver import outcome_class

    parts = parse_board_arg(args.board)
    print(outcome_class(parts, node_budget=args.node_budget, timeout=args.timeout))
    return EXIT_OK


def cmd_compare(args) -> int:
    from .solver import prove_relation

    parts = parse_board_arg(args.board)
    g = _game(args.game)
    le = prove_relation(parts, g, "le", node_budget=args.node_budget, timeout=args.timeout)
    ge = prove_relation(parts, g, "ge", node_budget=args.node_budget, timeout=args.timeout)
    rel = {(True, True): Relation.EQUAL, (True, False): Relation.LESS,
           (False, True): Relation.GREATER, (False, False): Relation.CONFUSED}[(le, ge)]
    print(rel.name)
    return EXIT_OK


def cmd_prove(args) -> int:
    from .solver import prove_relation

    parts = parse_board_arg(args.board)
    ok = prove_relation(parts, _game(args.game), args.rel, node_budget=args.node_budget,
                        timeout=args.timeout)
    print("true" if ok else "false")
    return EXIT_OK if ok else EXIT_FALSE


def _data_or_path(text: str, shipped: str) -> Path:
    from .workbench import data_path

    return data_path(shipped) if text == "shipped" else Path(text)


def cmd_table(args) -> int:
    from .rules import propagate
    from .workbench import expected_table, load_facts, read_grid, render_table

    facts = _data_or_path(args.facts, "base_facts.csv")
    values = None if args.values == "none" else _data_or_path(args.values, "values.csv")
    for p in (facts, values):
        if p is not None and not p.is_file():
            raise InputError(f"no such file: {p}")
    base = load_facts(facts, values=values).copy(args.max_m, args.max_n)
    t = propagate(base)
    expected = None
    if args.expected == "published":
        expected = expected_table(args.max_m, args.max_n)
    elif args.expected:
        if not Path(args.expected).is_file():
            raise InputError(f"no such file: {args.expected}")
        expected = read_grid(args.expected)
    rep = render_table(t, args.max_m, args.max_n, expected)
    if args.out:
        Path(args.out).write_text(rep.tsv, encoding="utf-8")
        Path(args.out + ".provenance.tsv").write_text(rep.provenance, encoding="utf-8")
    else:
        sys.stdout.write(rep.tsv)
    for mm in rep.mismatches:
        print(mm, file=sys.stderr)
    if expected is not None:
        print(f"{len(rep.failures)} mismatches, {len(rep.mismatches) - len(rep.failures)} cells stronger than expected",
              file=sys.stderr)
    return EXIT_FALSE if rep.failures else EXIT_OK


def cmd_verify(args) -> int:
    from .workbench import verify_paper

    rep = verify_paper(deep=args.deep)
    sys.stdout.write(str(rep))
    return EXIT_OK if rep.passed else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="domineering",
                                 description="Values, outcome classes and rule tables for Domineering.")
    sub = ap.add_subparsers(dest="command", required=True)

    def budget(p, timeout=True):
        p.add_argument("--node-budget", type=int, default=10 ** 9)
        if timeout:
            p.add_argument("--timeout", type=float, default=None, help="seconds per search")

    p = sub.add_parser("value", help="canonical value of a board or sum of boards")
    p.add_argument("board", help="RxC or a board file")
    p.add_argument("--max-cells", type=int, default=40)
    budget(p, timeout=False)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("outcome", help="outcome class by search")
    p.add_argument("board")
    budget(p)
    p.set_defaults(func=cmd_outcome)

    p = sub.add_parser("compare", help="LESS, EQUAL, GREATER or CONFUSED against a game")
    p.add_argument("board")
    p.add_argument("game", help="game in slash notation, e.g. '{1|-1}'")
    budget(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("prove", help="decide board <= game (le) or board >= game (ge)")
    p.add_argument("board")
    p.add_argument("game")
    p.add_argument("rel", choices=["le", "ge"])
    budget(p)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("table", help="propagate rules from a facts file and print the table")
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--facts", required=True, help="facts CSV, or 'shipped'")
    p.add_argument("--values", default="shipped", help="value facts CSV, 'shipped' or 'none'")
    p.add_argument("--expected", help="expected TSV grid, or 'published' for the published table")
    p.add_argument("--out", help="write the grid here and the provenance to OUT.provenance.tsv")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify-paper", help="run the reproduction suites")
    p.add_argument("--deep", action="store_true", help="include the long searches")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except ResourceError as e:
        print(f"resource error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, BoardError, GameSyntaxError, ContradictionError, ValueError, OSError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

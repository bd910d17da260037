"""Domineering: canonical game values, outcome search and rule propagation."""

from .cgt import (DyadicRational, Game, GameStore, GameSyntaxError, Outcome, Relation,
                  ResourceError, add, compare, default_store, format_game, game, leq,
                  multiply_int, negate, number, outcome_of_value, parse_game, zero)
from .board import BoardError, Move, Player, Position, from_ascii, parse_boards, rect
from .solver import (OutcomeSolver, SearchStats, SumPosition, ValueSolver, first_player_wins,
                     outcome_class, prove_relation, solve_rect_outcome, value_of_position)
from .rules import (ContradictionError, Fact, FactTable, OutcomeConstraint, Provenance,
                    ValueFact, propagate)
from .workbench import (errata_suite, expected_table, load_facts, render_table,
                        shipped_table, verify_paper)

__all__ = [
    "DyadicRational", "Game", "GameStore", "GameSyntaxError", "Outcome", "Relation",
    "ResourceError", "add", "compare", "default_store", "format_game", "game", "leq",
    "multiply_int", "negate", "number", "outcome_of_value", "parse_game", "zero",
    "BoardError", "Move", "Player", "Position", "from_ascii", "parse_boards", "rect",
    "OutcomeSolver", "SearchStats", "SumPosition", "ValueSolver", "first_player_wins",
    "outcome_class", "prove_relation", "solve_rect_outcome", "value_of_position",
    "ContradictionError", "Fact", "FactTable", "OutcomeConstraint", "Provenance",
    "ValueFact", "propagate",
    "errata_suite", "expected_table", "load_facts", "render_table", "shipped_table",
    "verify_paper",
]

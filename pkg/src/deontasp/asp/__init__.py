"""Disjunctive answer-set programming with strong negation and weak constraints."""

from .grounder import ground
from .parser import SourceProgram, parse, parse_file, print_program
from .solver import (
    BACKEND,
    AnswerSet,
    CostVector,
    cost,
    enumerate_answer_sets,
    is_answer_set,
    is_answer_set_gl,
    optimal_answer_sets,
    satisfies,
    solve,
)
from .syntax import Comparison, Fn, Literal, Naf, Program, Rule, Var, WeakConstraint

__all__ = [
    "BACKEND",
    "AnswerSet",
    "Comparison",
    "CostVector",
    "Fn",
    "Literal",
    "Naf",
    "Program",
    "Rule",
    "SourceProgram",
    "Var",
    "WeakConstraint",
    "cost",
    "enumerate_answer_sets",
    "ground",
    "is_answer_set",
    "is_answer_set_gl",
    "optimal_answer_sets",
    "parse",
    "parse_file",
    "print_program",
    "satisfies",
    "solve",
]

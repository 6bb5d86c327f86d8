"""Common deontic core and the verdict query layer.

The core guesses the deontic status of every declared action ``X``
(``act(X)``) and whether it is taken, then rules out inconsistent combinations.
Two level-1 weak constraints penalise gratuitous obligations and
prohibitions, so norms compiled at level 2 and above decide what survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .asp.parser import parse
from .asp.solver import AnswerSet, CostVector, solve
from .asp.syntax import Literal, Program
from .errors import Inconsistent

DEONTIC_PREDICATES = ("O", "F", "Do", "Dia", "Happens", "act")

CORE_RULES = """\
O(X) v -O(X) :- act(X).
F(X) v -F(X) :- act(X).
:- O(X), -Dia(X).
-Dia(X) :- -Do(X), act(X).
:- O(X), F(X).
Do(X) v -Do(X) :- act(X).
:- F(X), Do(X).
Happens(X) :- Do(X).
:- Do(X), -Dia(X).
"""

CORE_WEAK = """\
:~ O(X). [1:1]
:~ F(X). [1:1]
"""


@lru_cache(maxsize=None)
def core_rules() -> Program:
    """The nine core rules, without the level-1 weak constraints."""
    return parse(CORE_RULES, "<core>")


@lru_cache(maxsize=None)
def common_core() -> Program:
    """The nine core rules plus the two level-1 weak constraints."""
    return parse(CORE_RULES + CORE_WEAK, "<core>")


def _terms(lits: Iterable[Literal], predicate: str) -> frozenset:
    return frozenset(l.args[0] for l in lits if l.predicate == predicate and not l.negated and len(l.args) == 1)


@dataclass(frozen=True)
class DeonticVerdict:
    """Deontic reading of the optimal answer sets of a program.

    Obligation and prohibition fields hold action terms (``"mail"``,
    ``Fn("eat", ("blue_ghost",))``).  ``choices`` lists, per optimal answer
    set, the actions with a positive ``Do`` literal.
    """

    answer_sets: tuple[AnswerSet, ...]
    cautious_obligations: frozenset
    brave_obligations: frozenset
    cautious_prohibitions: frozenset
    brave_prohibitions: frozenset
    choices: tuple[frozenset, ...]
    cost: CostVector

    @classmethod
    def from_answer_sets(cls, answers: Iterable[AnswerSet]) -> "DeonticVerdict":
        answers = tuple(answers)
        if not answers:
            raise Inconsistent("no answer set: the hard constraints contradict each other")
        obligations = [_terms(a.literals, "O") for a in answers]
        prohibitions = [_terms(a.literals, "F") for a in answers]
        return cls(
            answer_sets=answers,
            cautious_obligations=frozenset.intersection(*obligations),
            brave_obligations=frozenset.union(*obligations),
            cautious_prohibitions=frozenset.intersection(*prohibitions),
            brave_prohibitions=frozenset.union(*prohibitions),
            choices=tuple(_terms(a.literals, "Do") for a in answers),
            cost=answers[0].cost,
        )

    def cautious(self) -> frozenset[Literal]:
        """Literals present in every optimal answer set."""
        return frozenset.intersection(*(a.literals for a in self.answer_sets))

    def brave(self) -> frozenset[Literal]:
        return frozenset.union(*(a.literals for a in self.answer_sets))

    def cautious_deontic(self) -> frozenset[Literal]:
        """Positive ``O``/``F`` literals shared by all optimal answer sets."""
        return frozenset(
            l for l in self.cautious() if l.predicate in ("O", "F") and not l.negated
        )

    def __len__(self) -> int:
        return len(self.answer_sets)


def deontic_closure(norms: Program, facts: Program | None = None, *, with_core: bool = True) -> DeonticVerdict:
    """Solve the norms with the core; read the verdict off the optimal answer sets."""
    program = norms if facts is None else norms + facts
    if with_core:
        program = common_core() + program
    return DeonticVerdict.from_answer_sets(solve(program))


_DD_PROBE = parse(
    """\
dd_violation__ :- O(X), F(X).
:- not dd_violation__.
""",
    "<dd>",
)


def check_dd(subject: DeonticVerdict | Program) -> bool:
    """No action is both obligatory and forbidden.

    For a verdict every optimal answer set is inspected.  For a program the
    check covers *all* answer sets of the program plus the common core: it
    searches for a single answer set containing some ``O(x)`` and ``F(x)``.
    Raises :class:`Inconsistent` if the program has no answer set at all.
    """
    if isinstance(subject, DeonticVerdict):
        return all(
            not (_terms(a.literals, "O") & _terms(a.literals, "F")) for a in subject.answer_sets
        )
    program = common_core() + subject
    if not solve(program, optimal=False, limit=1):
        raise Inconsistent("no answer set: the hard constraints contradict each other")
    return not solve(program + _DD_PROBE, optimal=False, limit=1)

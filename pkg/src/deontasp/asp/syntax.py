"""Program representation for disjunctive logic programs with weak constraints.

Ground terms are plain Python values: ``str`` for symbolic constants, ``int``
for non-negative integers and :class:`Fn` for compound terms.  Variables and
arithmetic expressions only occur in non-ground programs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Union


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


class Fn(NamedTuple):
    """Compound term such as ``eat(blue_ghost)``."""

    name: str
    args: tuple

    def __str__(self) -> str:
        return f"{self.name}({','.join(term_str(a) for a in self.args)})"


@dataclass(frozen=True, slots=True)
class Arith:
    """Binary ``+``/``-`` over integer terms; only legal inside comparisons."""

    op: str
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        right = term_str(self.right)
        if isinstance(self.right, Arith):
            right = f"({right})"
        return f"{term_str(self.left)}{self.op}{right}"


Term = Union[str, int, Fn, Var, Arith]


def term_str(t: Term) -> str:
    if isinstance(t, str):
        return t
    return str(t)


def is_ground_term(t: Term) -> bool:
    if isinstance(t, (str, int)):
        return True
    if isinstance(t, Fn):
        return all(is_ground_term(a) for a in t.args)
    return False


def term_vars(t: Term, out: set[str]) -> set[str]:
    if isinstance(t, Var):
        out.add(t.name)
    elif isinstance(t, Fn):
        for a in t.args:
            term_vars(a, out)
    elif isinstance(t, Arith):
        term_vars(t.left, out)
        term_vars(t.right, out)
    return out


class Literal(NamedTuple):
    """A classical literal: predicate, argument terms, strong-negation flag.

    ``Literal("O", ("mail",), True)`` is ``-O(mail)``.  A literal and its
    strong negation are distinct values.
    """

    predicate: str
    args: tuple = ()
    negated: bool = False

    def __str__(self) -> str:
        sign = "-" if self.negated else ""
        if not self.args:
            return sign + self.predicate
        return f"{sign}{self.predicate}({','.join(term_str(a) for a in self.args)})"

    @property
    def signature(self) -> tuple[str, int, bool]:
        return (self.predicate, len(self.args), self.negated)

    def complement(self) -> "Literal":
        return Literal(self.predicate, self.args, not self.negated)

    def is_ground(self) -> bool:
        return all(is_ground_term(a) for a in self.args)

    def vars(self) -> set[str]:
        out: set[str] = set()
        for a in self.args:
            term_vars(a, out)
        return out


class Naf(NamedTuple):
    """Default-negated body literal (``not l``)."""

    literal: Literal

    def __str__(self) -> str:
        return f"not {self.literal}"


COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


class Comparison(NamedTuple):
    """Builtin atom; never allowed in a rule head."""

    op: str
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{term_str(self.left)}{self.op}{term_str(self.right)}"

    def vars(self) -> set[str]:
        out: set[str] = set()
        term_vars(self.left, out)
        term_vars(self.right, out)
        return out


BodyElement = Union[Literal, Naf, Comparison]


def _body_str(body: tuple) -> str:
    return ", ".join(str(b) for b in body)


class _BodyMixin:
    body: tuple

    @property
    def pos(self) -> tuple[Literal, ...]:
        return tuple(b for b in self.body if isinstance(b, Literal))

    @property
    def neg(self) -> tuple[Literal, ...]:
        return tuple(b.literal for b in self.body if isinstance(b, Naf))

    @property
    def builtins(self) -> tuple[Comparison, ...]:
        return tuple(b for b in self.body if isinstance(b, Comparison))

    def body_vars(self) -> set[str]:
        out: set[str] = set()
        for b in self.body:
            if isinstance(b, Naf):
                out |= b.literal.vars()
            else:
                out |= b.vars()
        return out

    def is_ground(self) -> bool:
        return not self.vars()


@dataclass(frozen=True)
class Rule(_BodyMixin):
    """``H1 v ... v Hl :- body.``; an empty head makes it a constraint."""

    head: tuple[Literal, ...] = ()
    body: tuple = ()

    def __str__(self) -> str:
        head = " v ".join(str(h) for h in self.head)
        if not self.body:
            return f"{head}."
        if not head:
            return f":- {_body_str(self.body)}."
        return f"{head} :- {_body_str(self.body)}."

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_fact(self) -> bool:
        return len(self.head) == 1 and not self.body

    def vars(self) -> set[str]:
        out = self.body_vars()
        for h in self.head:
            out |= h.vars()
        return out


@dataclass(frozen=True)
class WeakConstraint(_BodyMixin):
    """``:~ body. [weight:level]``"""

    body: tuple = ()
    weight: int = 1
    level: int = 1

    def __str__(self) -> str:
        return f":~ {_body_str(self.body)}. [{self.weight}:{self.level}]"

    def vars(self) -> set[str]:
        return self.body_vars()


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()
    weak: tuple[WeakConstraint, ...] = ()
    maxint: int | None = field(default=None)

    def __add__(self, other: "Program") -> "Program":
        maxint = self.maxint if other.maxint is None else other.maxint
        if self.maxint is not None and other.maxint is not None:
            maxint = max(self.maxint, other.maxint)
        return Program(self.rules + other.rules, self.weak + other.weak, maxint)

    def __str__(self) -> str:
        from .parser import print_program

        return print_program(self)

    def statements(self):
        yield from self.rules
        yield from self.weak

    def is_ground(self) -> bool:
        return all(s.is_ground() for s in self.statements())


Interpretation = frozenset


def fact(literal: Literal) -> Rule:
    return Rule(head=(literal,))


def facts(literals) -> Program:
    return Program(rules=tuple(Rule(head=(l,)) for l in literals))

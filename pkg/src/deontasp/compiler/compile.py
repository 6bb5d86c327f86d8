"""Compile normative systems into weak-constraint programs.

Each norm becomes one weak constraint shaped by its kind (a conjunction also
gets one auxiliary rule).  Prohibitions use ``F`` where obligations use
``O``.  Conditions and an exception may be attached to any kind; they are
appended to the body as positive literals and as ``not exception``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from ..asp.syntax import Fn, Literal, Naf, Program, Rule, WeakConstraint
from ..deontic import DEONTIC_PREDICATES, common_core
from ..errors import MalformedSpec, VocabularyCollision
from .levels import assign_levels

log = logging.getLogger(__name__)

KINDS = ("regular", "conditional", "disjunction", "conjunction", "exception", "contrary_to_duty")
MODALITIES = ("O", "F")
AUX_PREFIX = "aux_conj_"


@dataclass(frozen=True)
class NormSpec:
    """One norm.  ``targets`` holds the action terms the modality applies to.

    For ``contrary_to_duty`` the single target is the consequent and
    ``violates`` names the norm whose violation triggers it.
    """

    id: str
    kind: str
    targets: tuple
    modality: str = "O"
    condition: tuple = ()
    exception: Literal | None = None
    violates: str | None = None
    weight: int = 1

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise MalformedSpec(f"norm {self.id}: unknown kind {self.kind!r}")
        if self.modality not in MODALITIES:
            raise MalformedSpec(f"norm {self.id}: modality must be O or F, got {self.modality!r}")
        n = len(self.targets)
        if self.kind in ("disjunction", "conjunction"):
            if n < 2:
                raise MalformedSpec(f"norm {self.id}: a {self.kind} needs at least two actions")
        elif n != 1:
            raise MalformedSpec(f"norm {self.id}: a {self.kind} norm takes exactly one action")
        if self.kind == "exception" and self.exception is None:
            raise MalformedSpec(f"norm {self.id}: an exception norm needs an exception atom")
        if self.kind == "conditional" and not self.condition:
            raise MalformedSpec(f"norm {self.id}: a conditional norm needs a condition")
        if self.kind == "contrary_to_duty" and not self.violates:
            raise MalformedSpec(f"norm {self.id}: a contrary-to-duty norm must name the norm it repairs")
        if self.kind != "contrary_to_duty" and self.violates:
            raise MalformedSpec(f"norm {self.id}: only contrary-to-duty norms may name a violated norm")
        if self.weight < 1:
            raise MalformedSpec(f"norm {self.id}: weight must be at least 1")


@dataclass(frozen=True)
class NormativeSystem:
    name: str = "system"
    actions: tuple = ()
    norms: tuple[NormSpec, ...] = ()
    preferences: tuple[tuple[str, str], ...] = ()
    equivalent: tuple[tuple[str, ...], ...] = ()
    incompatible: tuple[tuple, ...] = ()
    dependencies: tuple[tuple, ...] = ()  # (consequent, antecedent): Do(c) :- Do(a).
    rules: Program = field(default_factory=Program)
    facts: Program = field(default_factory=Program)

    def norm(self, norm_id: str) -> NormSpec:
        for n in self.norms:
            if n.id == norm_id:
                return n
        raise KeyError(norm_id)


# -- validation ------------------------------------------------------------------


def _body_literals(body) -> list[Literal]:
    out = []
    for b in body:
        if isinstance(b, Literal):
            out.append(b)
        elif isinstance(b, Naf):
            out.append(b.literal)
    return out


def _statement_literals(stmt) -> list[Literal]:
    return list(getattr(stmt, "head", ())) + _body_literals(stmt.body)


def _check_vocabulary(lits, where: str) -> None:
    reserved = {p.lower(): p for p in DEONTIC_PREDICATES}
    for lit in lits:
        name = lit.predicate
        if name.lower().startswith(AUX_PREFIX):
            raise VocabularyCollision(f"{where}: predicate {name} uses the reserved prefix {AUX_PREFIX}")
        canon = reserved.get(name.lower())
        if canon is None:
            continue
        if name != canon or len(lit.args) != 1:
            raise VocabularyCollision(
                f"{where}: {lit} collides with the reserved deontic predicate {canon}/1"
            )


def validate_system(system: NormativeSystem) -> None:
    ids = [n.id for n in system.norms]
    dupes = {i for i in ids if ids.count(i) > 1}
    if dupes:
        raise MalformedSpec(f"duplicate norm ids: {sorted(dupes)}")
    declared = set(system.actions)
    by_id = {n.id: n for n in system.norms}
    for n in system.norms:
        n.validate()
        for t in n.targets:
            if t not in declared:
                raise MalformedSpec(f"norm {n.id}: action {t} is not declared")
        where = f"norm {n.id}"
        _check_vocabulary(_body_literals(n.condition), where)
        if n.exception is not None:
            _check_vocabulary([n.exception], where)
        if n.kind == "contrary_to_duty":
            target = by_id.get(n.violates)
            if target is None:
                raise MalformedSpec(f"norm {n.id}: violated norm {n.violates!r} does not exist")
            if target.kind == "contrary_to_duty" or len(target.targets) != 1:
                raise MalformedSpec(
                    f"norm {n.id}: the violated norm must be a single-action, non contrary-to-duty norm"
                )
    ctd = {n.id for n in system.norms if n.kind == "contrary_to_duty"}
    for u, v in system.preferences:
        for x in (u, v):
            if x not in by_id:
                raise MalformedSpec(f"preference {u} > {v}: unknown norm {x}")
            if x in ctd:
                raise MalformedSpec(
                    f"preference {u} > {v}: contrary-to-duty norm {x} takes the level of the norm it repairs"
                )
    for group in system.equivalent:
        for x in group:
            if x not in by_id:
                raise MalformedSpec(f"equivalence {list(group)}: unknown norm {x}")
    for pair in system.incompatible:
        if len(pair) != 2:
            raise MalformedSpec(f"incompatible entry {pair} must be a pair")
        for a in pair:
            if a not in declared:
                raise MalformedSpec(f"incompatible pair {pair}: action {a} is not declared")
    for pair in system.dependencies:
        for a in pair:
            if a not in declared:
                raise MalformedSpec(f"dependency {pair}: action {a} is not declared")
    for label, prog in (("rules", system.rules), ("facts", system.facts)):
        for stmt in prog.statements():
            _check_vocabulary(_statement_literals(stmt), label)


def lint(system: NormativeSystem) -> list[str]:
    """Warnings for likely weighting mistakes.

    An obligation whose action is incompatible with two or more actions of
    other norms, while every norm has weight 1, usually needs joint weights.
    """
    warnings = []
    if any(n.weight != 1 for n in system.norms):
        return warnings
    obligations = [n for n in system.norms if n.modality == "O"]
    owner: dict = {}
    for n in obligations:
        for t in n.targets:
            owner.setdefault(t, set()).add(n.id)
    for n in obligations:
        rivals = set()
        for a, b in system.incompatible:
            for mine, other in ((a, b), (b, a)):
                if mine in n.targets:
                    rivals |= owner.get(other, set()) - {n.id}
        if len(rivals) > 1:
            msg = (
                f"norm {n.id} conflicts with {len(rivals)} norms ({', '.join(sorted(rivals))}) "
                "and all weights are 1; consider joint weights"
            )
            log.warning(msg)
            warnings.append(msg)
    return warnings


# -- compilation ---------------------------------------------------------------------


def _aux_name(norm_id: str) -> str:
    return AUX_PREFIX + re.sub(r"[^a-z0-9_]", "_", norm_id.lower())


def _mod(modality: str, action, negated: bool = False) -> Literal:
    return Literal(modality, (action,), negated)


def compile_norm(spec: NormSpec, level: int, weight: int | None = None, violated: NormSpec | None = None) -> Program:
    """Program fragment for one norm at ``[weight:level]``.

    ``violated`` must be given for contrary-to-duty norms; its exception is
    inherited and its polarity decides what counts as a violation (taking a
    forbidden action, or not taking an obligatory one).
    """
    spec.validate()
    if level < 2:
        raise MalformedSpec(f"norm {spec.id}: compiled norms start at level 2")
    weight = spec.weight if weight is None else weight
    if weight < 1:
        raise MalformedSpec(f"norm {spec.id}: weight must be at least 1")
    m = spec.modality
    extra = list(spec.condition)
    exception = spec.exception
    rules: list[Rule] = []
    if spec.kind == "conjunction":
        aux = Literal(_aux_name(spec.id))
        rules.append(Rule((aux,), tuple(_mod(m, t) for t in spec.targets)))
        body = [Naf(aux)]
    elif spec.kind == "contrary_to_duty":
        if violated is None:
            raise MalformedSpec(f"norm {spec.id}: the violated norm is required")
        o1 = violated.targets[0]
        violation = Literal("Do", (o1,), violated.modality == "O")
        if exception is None:
            exception = violated.exception
        body = [violation]
        if exception is not None:
            body.append(Naf(exception))
            exception = None
        body.append(_mod(m, spec.targets[0], True))
    else:
        body = [_mod(m, t, True) for t in spec.targets]
    body.extend(extra)
    if exception is not None:
        body.append(Naf(exception))
    return Program(tuple(rules), (WeakConstraint(tuple(body), weight, level),))


def norm_levels(system: NormativeSystem) -> dict[str, int]:
    """Level of every norm; contrary-to-duty norms share the level of the norm they repair."""
    plain = [n.id for n in system.norms if n.kind != "contrary_to_duty"]
    levels = assign_levels(plain, system.preferences, system.equivalent)
    for n in system.norms:
        if n.kind == "contrary_to_duty":
            levels[n.id] = levels[n.violates]
    return {n.id: levels[n.id] for n in system.norms}


def compile_system(system: NormativeSystem, *, with_core: bool = True) -> Program:
    """Steps 1 to 5 in one pass, in a fixed order.

    Core, norms (in declaration order), incompatibility constraints,
    dependency rules, auxiliary rules, facts, action declarations.
    """
    validate_system(system)
    lint(system)
    levels = norm_levels(system)
    out = common_core() if with_core else Program()
    for n in system.norms:
        violated = system.norm(n.violates) if n.kind == "contrary_to_duty" else None
        out = out + compile_norm(n, levels[n.id], n.weight, violated)
    extra: list[Rule] = []
    for a, b in system.incompatible:
        extra.append(Rule((), (Literal("Do", (a,)), Literal("Do", (b,)))))
    for consequent, antecedent in system.dependencies:
        extra.append(Rule((Literal("Do", (consequent,)),), (Literal("Do", (antecedent,)),)))
    out = out + Program(tuple(extra)) + system.rules + system.facts
    acts = tuple(Rule((Literal("act", (a,)),)) for a in system.actions)
    return out + Program(acts)


def term_from_text(text: str):
    """Parse an action term such as ``stop`` or ``eat(blue_ghost)``."""
    from ..asp.parser import parse_literal

    lit = parse_literal(text)
    if lit.negated or not lit.predicate[0].islower():
        raise MalformedSpec(f"{text!r} is not an action term (use a lowercase name)")
    if not lit.args:
        return lit.predicate
    return Fn(lit.predicate, lit.args)


__all__ = [
    "KINDS",
    "NormSpec",
    "NormativeSystem",
    "compile_norm",
    "compile_system",
    "lint",
    "norm_levels",
    "term_from_text",
    "validate_system",
]

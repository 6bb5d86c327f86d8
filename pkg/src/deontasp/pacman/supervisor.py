"""Normative supervisor: compiled norms filter Pac-man's moves every step.

Each norm base is the deontic core plus direction actions, plus weak
constraints that prohibit moves which could lead to eating a protected
scared ghost.  For a protected ghost at doubled offset ``(E, G)`` from
Pac-man three geometric cases are penalised (shown for a ghost east):

1. ``E <= 2`` and ``|G| <= 1``: moving east (top sub-level) and stopping
   (bottom sub-level) are prohibited;
2. ``E <= 4`` on the same row (``G = 0``): moving east is prohibited
   (middle sub-level).  A ghost half a cell off the row can only move
   across it, so it cannot close a gap of four;
3. ``E = 2`` and ``G = 2``, the ghost one cell diagonally off Pac-man's
   path: both directions that approach the shared corner are prohibited
   (middle sub-level).  A ghost half way between two cells can only move
   along its corridor, so it cannot cut that corner.

A fourth group guards power pellets: stepping onto one while a protected
ghost is within two cells of it frightens the ghost right at the mouth of
the dead end the pellet sits in.

A norm at preference level ``p`` owns the three consecutive levels starting
at ``2 + 3 (p - 2)``, so the geometric sub-levels of a more important norm
all lie above those of a less important one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import lru_cache

from ..asp.parser import parse
from ..asp.solver import solve
from ..asp.syntax import Literal, Program, Rule
from ..compiler.levels import assign_levels
from ..deontic import DeonticVerdict, common_core
from ..errors import Inconsistent
from .game import DIRECTIONS, MOVES, STOP, VECTORS, GameState, pacman_moves

log = logging.getLogger(__name__)

GHOST_PREDICATES = {"blue": "blueGhost", "orange": "orangeGhost"}
BASES = ("vegan", "vegetarian", "weak_vegan")
GUARD_RADIUS = 4  # doubled units around a power pellet


@dataclass(frozen=True)
class Memory:
    """What the supervisor carries between steps."""

    exception: bool = False  # a ghost has been eaten at some point; latches
    ate_ghost: bool = False  # a ghost was eaten in the previous step

    def observe(self, events) -> "Memory":
        ate = any(e.kind == "ate_ghost" for e in events)
        return replace(self, ate_ghost=ate)


@dataclass(frozen=True)
class NormBase:
    name: str
    program: Program
    levels: dict

    def __str__(self) -> str:
        return str(self.program)


def block(level: int) -> tuple[int, int, int]:
    """Sub-levels (stop, near, toward) owned by a norm at preference level ``level``."""
    base = 2 + 3 * (level - 2)
    return base, base + 1, base + 2


def _offset(var: str, own: str, other: str, sign: int) -> str:
    """``var = other - own`` for a positive sign, ``var = own - other`` otherwise."""
    return f"{var}={other}-{own}" if sign > 0 else f"{var}={own}-{other}"


def geometry_constraints(
    predicate: str, levels: tuple[int, int, int], guard: str = "", guard_radius: int = GUARD_RADIUS
) -> str:
    """Weak constraints of cases 1 to 3 (and the power-pellet guard) for one ghost."""
    stop_l, near_l, toward_l = levels
    g = f"{guard}, " if guard else ""
    lines = []
    ghost = f"pacman(A,B), {predicate}(C,D,1)"
    for d in MOVES:
        dx, dy = VECTORS[d]
        if dx:
            along = _offset("E", "A", "C", dx)
            across = ["G=B-D", "G=D-B"]
            same_path = "D=B"
        else:
            along = _offset("E", "B", "D", dy)
            across = ["G=A-C", "G=C-A"]
            same_path = "C=A"
        for ac in across:
            lines.append(f":~ {g}{ghost}, {along}, E<=2, {ac}, G<=1, -F({d}). [1:{toward_l}]")
            lines.append(f":~ {g}{ghost}, {along}, E<=2, {ac}, G<=1, -F(stop). [1:{stop_l}]")
        lines.append(f":~ {g}{ghost}, {along}, E<=4, {same_path}, -F({d}). [1:{near_l}]")
    for sx in (1, -1):
        for sy in (1, -1):
            ex = _offset("E", "A", "C", sx)
            gy = _offset("G", "B", "D", sy)
            dirs = ("east" if sx > 0 else "west", "north" if sy > 0 else "south")
            for d in dirs:
                lines.append(f":~ {g}{ghost}, {ex}, E=2, {gy}, G=2, -F({d}). [1:{near_l}]")
    # Power pellet one step away in direction D with a protected ghost (not
    # yet scared) within Manhattan distance ``guard_radius`` of it: the
    # pellets sit in dead ends, so the frightened ghost would block the exit.
    target = f"capsule_ahead(D,X,Y), {predicate}(C,K,0)"
    for ex in ("E=C-X", "E=X-C"):
        for gy in ("G=K-Y", "G=Y-K"):
            lines.append(f":~ {g}{target}, {ex}, {gy}, E+G<={guard_radius}, -F(D). [1:{toward_l}]")
    return "\n".join(lines) + "\n"


def _action_block() -> str:
    lines = [f"act({d})." for d in DIRECTIONS]
    for i, a in enumerate(DIRECTIONS):
        for b in DIRECTIONS[i + 1:]:
            lines.append(f":- Do({a}), Do({b}).")
    lines.append(":- " + ", ".join(f"F({d})" for d in DIRECTIONS) + ".")
    for d in MOVES:
        dx, dy = VECTORS[d]
        x = "X=A" if not dx else f"X=A{'+' if dx > 0 else '-'}2"
        y = "Y=B" if not dy else f"Y=B{'+' if dy > 0 else '-'}2"
        lines.append(f"capsule_ahead({d},X,Y) :- pacman(A,B), capsule(X,Y), {x}, {y}.")
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def norm_base(name: str) -> NormBase:
    """The norm base program (without the deontic core)."""
    name = name.replace("-", "_")
    text = _action_block()
    if name == "vegan":
        levels = assign_levels(["blue", "orange"], [])
        for ghost in ("blue", "orange"):
            text += geometry_constraints(GHOST_PREDICATES[ghost], block(levels[ghost]))
    elif name == "vegetarian":
        levels = assign_levels(["blue"], [])
        text += geometry_constraints(GHOST_PREDICATES["blue"], block(levels["blue"]))
    elif name == "weak_vegan":
        # O1 protects blue; O2 protects orange unless a ghost was eaten; O3
        # demands a stop right after eating.  O1 outranks O2, and O3 outranks
        # O1 so that the step after an eat is always a stop.
        levels = assign_levels(["O1", "O2", "O3"], [("O1", "O2"), ("O3", "O1")])
        text += geometry_constraints(GHOST_PREDICATES["blue"], block(levels["O1"]))
        text += geometry_constraints(GHOST_PREDICATES["orange"], block(levels["O2"]), "not exception")
        text += f":~ Happens(ate_ghost), -O(stop). [1:{block(levels['O3'])[2]}]\n"
        text += "exception :- Happens(ate_ghost).\n"
    else:
        raise ValueError(f"unknown norm base {name!r}; expected one of {', '.join(BASES)}")
    return NormBase(name, parse(text, f"<{name}>"), levels)


def state_to_facts(state: GameState, memory: Memory = Memory()) -> Program:
    """Facts describing ``state`` for the supervisor program.

    Walls become ``F(d)`` facts.  Open directions are reported as ``open(d)``:
    a ``Dia(d)`` fact would clash with the core, which derives ``-Dia(d)``
    for every direction not taken.
    """
    facts = [Literal("pacman", state.pacman)]
    for g in state.ghosts:
        x, y = g.pos
        facts.append(Literal(GHOST_PREDICATES[g.name], (x, y, int(g.is_scared))))
    legal = set(pacman_moves(state))
    for d in MOVES:
        facts.append(Literal("open", (d,)) if d in legal else Literal("F", (d,)))
    for cx, cy in sorted(state.capsules):
        facts.append(Literal("capsule", (2 * cx, 2 * cy)))
    if memory.ate_ghost:
        facts.append(Literal("Happens", ("ate_ghost",)))
    if memory.exception:
        facts.append(Literal("exception"))
    return Program(tuple(Rule((f,)) for f in facts))


@dataclass(frozen=True)
class Decision:
    allowed: tuple[str, ...]
    verdict: DeonticVerdict | None
    memory: Memory
    incident: str | None = None


def supervisor_filter(state: GameState, base: NormBase | str, memory: Memory = Memory()) -> Decision:
    """Norm-compliant subset of Pac-man's legal moves.

    The allowed set is the legal moves minus every direction prohibited in
    all optimal answer sets; if stopping is obligatory in all of them only
    ``stop`` remains.  An inconsistent program fails open: every legal move
    stays allowed and the incident is logged.
    """
    if isinstance(base, str):
        base = norm_base(base)
    legal = pacman_moves(state)
    program = common_core() + base.program + state_to_facts(state, memory)
    try:
        verdict = DeonticVerdict.from_answer_sets(solve(program))
    except Inconsistent as exc:
        msg = f"step {state.steps}: supervisor inconsistent ({exc}); allowing all legal moves"
        log.warning(msg)
        return Decision(tuple(legal), None, memory, msg)
    if STOP in verdict.cautious_obligations:
        allowed = (STOP,)
    else:
        allowed = tuple(d for d in legal if d not in verdict.cautious_prohibitions)
    exception = memory.exception or Literal("exception") in verdict.cautious()
    return Decision(allowed, verdict, replace(memory, exception=exception))


__all__ = [
    "BASES",
    "Decision",
    "Memory",
    "NormBase",
    "block",
    "geometry_constraints",
    "norm_base",
    "state_to_facts",
    "supervisor_filter",
]

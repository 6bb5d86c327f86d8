"""Seedable Pac-man rules on doubled coordinates.

Every position is stored doubled, so a cell ``(x, y)`` is the point
``(2x, 2y)``.  Pac-man and unscared ghosts move 2 units per step, scared
ghosts 1 unit, which lets a scared ghost stand half way between two cells.
A ghost is touched when both coordinate differences to Pac-man are below 2.

One step: Pac-man moves and eats what lies on his cell, contacts are
resolved, every ghost moves, scared timers tick, contacts are resolved again.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from ..errors import IllegalAction
from .layout import GHOSTS, Layout

STOP, NORTH, EAST, SOUTH, WEST = "stop", "north", "east", "south", "west"
DIRECTIONS = (STOP, NORTH, EAST, SOUTH, WEST)
MOVES = (NORTH, EAST, SOUTH, WEST)
VECTORS = {STOP: (0, 0), NORTH: (0, 1), EAST: (1, 0), SOUTH: (0, -1), WEST: (-1, 0)}
REVERSE = {NORTH: SOUTH, SOUTH: NORTH, EAST: WEST, WEST: EAST, STOP: STOP}

ONGOING, WON, LOST, TIMEOUT = "ongoing", "won", "lost", "timeout"


@dataclass(frozen=True)
class GameConfig:
    pellet: int = 10
    capsule: int = 50
    ghost: int = 200
    step: int = -1
    win: int = 500
    loss: int = -500
    scared_steps: int = 40
    max_steps: int = 2000


@dataclass(frozen=True)
class GhostState:
    name: str
    pos: tuple[int, int]
    direction: str = STOP
    scared: int = 0  # steps of fright left; 0 means not scared

    @property
    def is_scared(self) -> bool:
        return self.scared > 0


@dataclass(frozen=True)
class Event:
    kind: str  # step, pellet, capsule, ate_ghost, death, win
    delta: int
    ghost: str | None = None


@dataclass(frozen=True)
class GameState:
    layout: Layout
    pacman: tuple[int, int]
    ghosts: tuple[GhostState, ...]
    pellets: frozenset
    capsules: frozenset
    score: int = 0
    steps: int = 0
    status: str = ONGOING
    config: GameConfig = GameConfig()

    def ghost(self, name: str) -> GhostState:
        for g in self.ghosts:
            if g.name == name:
                return g
        raise KeyError(name)

    @property
    def ongoing(self) -> bool:
        return self.status == ONGOING

    def render(self) -> str:
        cell = lambda p: (p[0] // 2, p[1] // 2)  # noqa: E731
        return self.layout.render(
            cell(self.pacman),
            [(g.name, cell(g.pos)) for g in self.ghosts],
            self.pellets,
            self.capsules,
        )


def initial_state(layout: Layout, config: GameConfig | None = None) -> GameState:
    px, py = layout.pacman_start
    ghosts = tuple(
        GhostState(name, (2 * x, 2 * y)) for name, (x, y) in layout.ghost_starts
    )
    return GameState(
        layout=layout,
        pacman=(2 * px, 2 * py),
        ghosts=ghosts,
        pellets=layout.pellets,
        capsules=layout.capsules,
        config=config or GameConfig(),
    )


def _open(layout: Layout, pos: tuple[int, int], d: str) -> bool:
    """Can an agent at doubled ``pos`` head in direction ``d``?"""
    x, y = pos
    dx, dy = VECTORS[d]
    if x % 2 or y % 2:
        # Between two cells: only along the corridor it is in.
        return (x % 2 == 1 and dy == 0) or (y % 2 == 1 and dx == 0)
    return not layout.is_wall((x // 2 + dx, y // 2 + dy))


def pacman_moves(state: GameState) -> list[str]:
    """Legal Pac-man directions: stop plus every direction without a wall."""
    return [STOP] + [d for d in MOVES if _open(state.layout, state.pacman, d)]


def ghost_moves(state: GameState, ghost: GhostState) -> list[str]:
    """Legal ghost directions.

    A ghost never reverses unless it has no other way to go.  Unscared ghosts
    never stop; scared ghosts may.
    """
    moves = [d for d in MOVES if _open(state.layout, ghost.pos, d)]
    forward = [d for d in moves if d != REVERSE[ghost.direction] or ghost.direction == STOP]
    if forward:
        moves = forward
    if ghost.is_scared:
        moves = moves + [STOP]
    return moves or [STOP]


def legal_moves(state: GameState, agent: str = "pacman") -> list[str]:
    if agent == "pacman":
        return pacman_moves(state)
    return ghost_moves(state, state.ghost(agent))


def _shift(pos, d: str, units: int):
    dx, dy = VECTORS[d]
    return (pos[0] + dx * units, pos[1] + dy * units)


def touching(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return abs(a[0] - b[0]) < 2 and abs(a[1] - b[1]) < 2


def _contacts(state: GameState, events: list[Event]) -> GameState:
    ghosts = list(state.ghosts)
    score, status = state.score, state.status
    cfg = state.config
    for i, g in enumerate(ghosts):
        if status != ONGOING or not touching(state.pacman, g.pos):
            continue
        if g.is_scared:
            events.append(Event("ate_ghost", cfg.ghost, g.name))
            score += cfg.ghost
            sx, sy = state.layout.ghost_start(g.name)
            ghosts[i] = GhostState(g.name, (2 * sx, 2 * sy))
        else:
            events.append(Event("death", cfg.loss, g.name))
            score += cfg.loss
            status = LOST
    return replace(state, ghosts=tuple(ghosts), score=score, status=status)


def _snap(ghost: GhostState) -> GhostState:
    """An unscared ghost always stands on a cell: finish a half move."""
    x, y = ghost.pos
    if x % 2 == 0 and y % 2 == 0:
        return ghost
    d = ghost.direction if ghost.direction != STOP else (EAST if x % 2 else NORTH)
    return replace(ghost, pos=_shift(ghost.pos, d, 1))


def move_pacman(state: GameState, action: str, events: list[Event]) -> GameState:
    """Pac-man's half of a step: move, eat, resolve contacts."""
    cfg = state.config
    pos = _shift(state.pacman, action, 2)
    cell = (pos[0] // 2, pos[1] // 2)
    score = state.score + cfg.step
    events.append(Event("step", cfg.step))
    pellets, capsules, ghosts = state.pellets, state.capsules, state.ghosts
    if cell in pellets:
        pellets = pellets - {cell}
        score += cfg.pellet
        events.append(Event("pellet", cfg.pellet))
    if cell in capsules:
        capsules = capsules - {cell}
        score += cfg.capsule
        events.append(Event("capsule", cfg.capsule))
        ghosts = tuple(replace(g, scared=cfg.scared_steps) for g in ghosts)
    state = replace(state, pacman=pos, pellets=pellets, capsules=capsules, ghosts=ghosts, score=score)
    if not pellets and not capsules:
        events.append(Event("win", cfg.win))
        return replace(state, score=state.score + cfg.win, status=WON)
    return _contacts(state, events)


def move_ghosts(state: GameState, choices: dict[str, str], events: list[Event]) -> GameState:
    """The ghosts' half of a step for given ghost directions."""
    ghosts = []
    for g in state.ghosts:
        d = choices[g.name]
        units = 1 if g.is_scared else 2
        g = replace(g, pos=_shift(g.pos, d, units), direction=d if d != STOP else g.direction)
        if g.scared:
            g = replace(g, scared=g.scared - 1)
            if g.scared == 0:
                g = _snap(g)
        ghosts.append(g)
    state = replace(state, ghosts=tuple(ghosts))
    return _contacts(state, events)


def step(state: GameState, pacman_action: str, rng: random.Random) -> tuple[GameState, list[Event]]:
    """Advance one step; ghosts pick uniformly among their legal moves."""
    if not state.ongoing:
        raise IllegalAction(f"game is over ({state.status})")
    if pacman_action not in pacman_moves(state):
        raise IllegalAction(f"{pacman_action} is not legal at {state.pacman}")
    events: list[Event] = []
    state = move_pacman(state, pacman_action, events)
    if state.ongoing:
        choices = {g.name: rng.choice(ghost_moves(state, g)) for g in state.ghosts}
        state = move_ghosts(state, choices, events)
    state = replace(state, steps=state.steps + 1)
    if state.ongoing and state.steps >= state.config.max_steps:
        state = replace(state, status=TIMEOUT)
    return state, events


__all__ = [
    "DIRECTIONS",
    "GHOSTS",
    "MOVES",
    "Event",
    "GameConfig",
    "GameState",
    "GhostState",
    "ghost_moves",
    "initial_state",
    "legal_moves",
    "move_ghosts",
    "move_pacman",
    "pacman_moves",
    "step",
    "touching",
]

"""Batch runs of supervised games with per-trace audits."""

from __future__ import annotations

import itertools
import json
import logging
import random
import time
from dataclasses import asdict, dataclass, field

from .agent import scripted_agent
from .game import STOP, Event, GameState, initial_state, move_ghosts, move_pacman, pacman_moves, ghost_moves, step
from .layout import GHOSTS, Layout, load_layout
from .supervisor import Memory, NormBase, norm_base, supervisor_filter

log = logging.getLogger(__name__)

PROTECTED = {"vegan": ("blue", "orange"), "vegetarian": ("blue",), "weak_vegan": ("blue", "orange")}


@dataclass(frozen=True)
class TraceStep:
    step: int
    pacman: tuple[int, int]
    ghosts: tuple[tuple[str, tuple[int, int], int], ...]
    allowed: tuple[str, ...]
    action: str
    events: tuple[tuple[str, int, str | None], ...]
    score: int

    def line(self) -> str:
        ghosts = " ".join(f"{n}={x},{y}{'*' if s else ''}" for n, (x, y), s in self.ghosts)
        events = ",".join(k if g is None else f"{k}:{g}" for k, _, g in self.events if k != "step")
        return (
            f"{self.step:4d} pacman={self.pacman[0]},{self.pacman[1]} {ghosts} "
            f"allowed={'/'.join(self.allowed)} action={self.action} score={self.score}"
            + (f" events={events}" if events else "")
        )


@dataclass
class GameRecord:
    seed: int
    status: str
    score: int
    steps: int
    eaten: dict[str, int]
    seconds: float
    incidents: list[str] = field(default_factory=list)
    audit: list[str] = field(default_factory=list)
    trace: list[TraceStep] = field(default_factory=list)

    def line(self) -> str:
        eaten = "/".join(str(self.eaten[g]) for g in GHOSTS)
        text = (
            f"game seed={self.seed} status={self.status} score={self.score} steps={self.steps} "
            f"eaten={eaten} time={self.seconds:.2f}s"
        )
        if self.audit:
            text += f" audit_failures={len(self.audit)}"
        return text


@dataclass
class RunStats:
    base: str
    games: int
    won_pct: float
    avg_score: float
    max_score: int
    avg_eaten: dict[str, float]
    avg_seconds: float
    incidents: int = 0
    audit_failures: list[str] = field(default_factory=list)
    records: list[GameRecord] = field(default_factory=list)

    @classmethod
    def from_records(cls, base: str, records: list[GameRecord]) -> "RunStats":
        n = len(records)
        return cls(
            base=base,
            games=n,
            won_pct=100.0 * sum(r.status == "won" for r in records) / n,
            avg_score=sum(r.score for r in records) / n,
            max_score=max(r.score for r in records),
            avg_eaten={g: sum(r.eaten[g] for r in records) / n for g in GHOSTS},
            avg_seconds=sum(r.seconds for r in records) / n,
            incidents=sum(len(r.incidents) for r in records),
            audit_failures=[f"seed {r.seed}: {a}" for r in records for a in r.audit],
            records=records,
        )

    def table(self) -> str:
        eaten = "/".join(f"{self.avg_eaten[g]:.3f}" for g in GHOSTS)
        header = f"{'base':<12}{'games':>6}{'% won':>8}{'avg score':>11}{'max score':>11}  {'avg ghosts eaten (blue/orange)':<32}{'avg time (s)':>12}"
        row = (
            f"{self.base:<12}{self.games:>6}{self.won_pct:>8.1f}{self.avg_score:>11.1f}{self.max_score:>11}  "
            f"{eaten:<32}{self.avg_seconds:>12.3f}"
        )
        return header + "\n" + row

    def summary(self) -> dict:
        d = asdict(self)
        d.pop("records")
        return d

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def game_seed(seed: int, index: int) -> int:
    return seed * 100003 + index


def _ghost_responses(state: GameState):
    names = [g.name for g in state.ghosts]
    options = [ghost_moves(state, g) for g in state.ghosts]
    for combo in itertools.product(*options):
        yield dict(zip(names, combo))


def could_eat(state: GameState, action: str, protected) -> bool:
    """Can ``action`` end with a protected ghost eaten, for some ghost response?"""
    events: list[Event] = []
    after = move_pacman(state, action, events)
    if any(e.kind == "ate_ghost" and e.ghost in protected for e in events):
        return True
    if not after.ongoing:
        return False
    for choices in _ghost_responses(after):
        more: list[Event] = []
        move_ghosts(after, choices, more)
        if any(e.kind == "ate_ghost" and e.ghost in protected for e in more):
            return True
    return False


def forced(state: GameState, protected) -> bool:
    """Every legal Pac-man move may end with eating a protected ghost."""
    return all(could_eat(state, d, protected) for d in pacman_moves(state))


def play_game(
    base: NormBase | str,
    seed: int,
    layout: Layout | None = None,
    *,
    trace: bool = False,
    audit: bool = True,
) -> GameRecord:
    """Play one supervised game with the scripted agent."""
    if isinstance(base, str):
        base = norm_base(base)
    layout = layout or load_layout()
    protected = PROTECTED[base.name]
    rng = random.Random(seed)
    state = initial_state(layout)
    memory = Memory()
    eaten = {g: 0 for g in GHOSTS}
    record = GameRecord(seed, state.status, 0, 0, eaten, 0.0)
    replayed = 0
    must_stop = False
    latched = False
    start = time.perf_counter()
    while state.ongoing:
        decision = supervisor_filter(state, base, memory)
        if decision.incident:
            record.incidents.append(decision.incident)
        action = scripted_agent(state, decision.allowed)
        if audit and must_stop and action != STOP:
            record.audit.append(f"step {state.steps}: moved {action} right after eating a ghost")
        if audit and latched and not decision.memory.exception:
            record.audit.append(f"step {state.steps}: exception no longer holds")
        before = state
        state, events = step(state, action, rng)
        replayed += sum(e.delta for e in events)
        ate = [e.ghost for e in events if e.kind == "ate_ghost"]
        for g in ate:
            eaten[g] += 1
        if audit and base.name != "weak_vegan":
            bad = [g for g in ate if g in protected]
            if bad and not forced(before, protected):
                record.audit.append(f"step {before.steps}: ate {bad[0]} although a safe move existed")
        memory = decision.memory.observe(events)
        must_stop = base.name == "weak_vegan" and bool(ate)
        latched = latched or (base.name == "weak_vegan" and decision.memory.exception)
        if trace:
            record.trace.append(
                TraceStep(
                    before.steps,
                    before.pacman,
                    tuple((g.name, g.pos, g.scared) for g in before.ghosts),
                    decision.allowed,
                    action,
                    tuple((e.kind, e.delta, e.ghost) for e in events),
                    state.score,
                )
            )
    if audit and replayed != state.score:
        record.audit.append(f"score {state.score} differs from the sum of event deltas {replayed}")
    record.status, record.score, record.steps = state.status, state.score, state.steps
    record.seconds = time.perf_counter() - start
    log.info(record.line())
    return record


def run_games(
    base: NormBase | str,
    n: int,
    seed: int = 0,
    layout: Layout | None = None,
    *,
    trace: bool = False,
    audit: bool = True,
    on_game=None,
) -> RunStats:
    """Play ``n`` seeded games; ``on_game`` is called with each finished record."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if isinstance(base, str):
        base = norm_base(base)
    layout = layout or load_layout()
    records = []
    for i in range(n):
        rec = play_game(base, game_seed(seed, i), layout, trace=trace, audit=audit)
        if on_game is not None:
            on_game(rec)
        records.append(rec)
    return RunStats.from_records(base.name, records)


__all__ = [
    "GameRecord",
    "PROTECTED",
    "RunStats",
    "TraceStep",
    "could_eat",
    "forced",
    "game_seed",
    "play_game",
    "run_games",
]

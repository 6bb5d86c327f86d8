"""Pac-man simulator with a normative supervisor."""

from .agent import scripted_agent
from .game import GameConfig, GameState, GhostState, initial_state, legal_moves, step
from .layout import Layout, load_layout, parse_layout
from .runner import GameRecord, RunStats, play_game, run_games
from .supervisor import Decision, Memory, norm_base, state_to_facts, supervisor_filter

__all__ = [
    "Decision",
    "GameConfig",
    "GameRecord",
    "GameState",
    "GhostState",
    "Layout",
    "Memory",
    "RunStats",
    "initial_state",
    "legal_moves",
    "load_layout",
    "norm_base",
    "parse_layout",
    "play_game",
    "run_games",
    "scripted_agent",
    "state_to_facts",
    "step",
    "supervisor_filter",
]

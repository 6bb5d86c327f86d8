"""Deterministic greedy agent standing in for a learned policy.

The agent walks the shortest path to the nearest pellet or power pellet,
treating cells next to an unscared ghost as blocked.  Scared ghosts are
ignored, so without a supervisor it eats them whenever they are on its way.
"""

from __future__ import annotations

from collections import deque

from .game import MOVES, STOP, VECTORS, GameState


def danger_cells(state: GameState) -> set[tuple[int, int]]:
    """Cells an unscared ghost occupies or could reach in its next move."""
    out = set()
    for g in state.ghosts:
        if g.is_scared:
            continue
        gx, gy = g.pos
        for x in range(state.layout.width):
            for y in range(state.layout.height):
                if abs(2 * x - gx) + abs(2 * y - gy) <= 2:
                    out.add((x, y))
    return out


def path_distances(state: GameState, blocked: set) -> dict[str, int]:
    """First move toward the nearest food for each opening move of a BFS.

    Returns, per first move, the path length to the closest food reachable
    without entering a blocked cell.
    """
    layout = state.layout
    food = state.pellets | state.capsules
    start = (state.pacman[0] // 2, state.pacman[1] // 2)
    best: dict[str, int] = {}
    seen = {start}
    queue: deque = deque()
    for d in MOVES:
        dx, dy = VECTORS[d]
        cell = (start[0] + dx, start[1] + dy)
        if layout.is_wall(cell) or cell in blocked or cell in seen:
            continue
        seen.add(cell)
        queue.append((cell, d, 1))
    while queue:
        cell, first, dist = queue.popleft()
        if cell in food and first not in best:
            best[first] = dist
        for d in MOVES:
            dx, dy = VECTORS[d]
            nxt = (cell[0] + dx, cell[1] + dy)
            if layout.is_wall(nxt) or nxt in blocked or nxt in seen:
                continue
            seen.add(nxt)
            queue.append((nxt, first, dist + 1))
    return best


def scripted_agent(state: GameState, allowed) -> str:
    """Allowed move with the shortest safe path to food.

    Ties go to the first move in the order north, east, south, west.  With
    no safe path the agent takes the first allowed move that avoids ghost
    reach, and otherwise the first allowed move.
    """
    allowed = [d for d in (STOP,) + MOVES if d in set(allowed)]
    if allowed == [STOP]:
        return STOP
    blocked = danger_cells(state)
    dist = path_distances(state, blocked)
    moves = [d for d in allowed if d in dist]
    if moves:
        return min(moves, key=lambda d: (dist[d], MOVES.index(d)))
    px, py = state.pacman[0] // 2, state.pacman[1] // 2
    for d in MOVES:
        if d in allowed:
            dx, dy = VECTORS[d]
            if (px + dx, py + dy) not in blocked:
                return d
    if STOP in allowed and (px, py) not in blocked:
        return STOP
    return allowed[0]


__all__ = ["danger_cells", "path_distances", "scripted_agent"]

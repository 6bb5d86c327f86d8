"""Weak-constraint levels from a strict preference graph.

An edge ``(u, v)`` means norm ``u`` is strictly preferred to norm ``v``.
Sinks (no outgoing edge) get level 2; they are removed together and the new
sinks get level 3, and so on.  Declared equivalence classes are collapsed to
one vertex first, so equally important norms share a level.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Sequence

from ..errors import CyclicPreferences

BASE_LEVEL = 2


def _find_cycle(nodes: Iterable[Hashable], succ: dict) -> list:
    color: dict = {}
    for root in nodes:
        if root in color:
            continue
        path = [root]
        color[root] = 1
        stack = [iter(sorted(succ[root], key=str))]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                color[path.pop()] = 2
                stack.pop()
                continue
            if color.get(nxt) == 1:
                return path[path.index(nxt):]
            if nxt not in color:
                color[nxt] = 1
                path.append(nxt)
                stack.append(iter(sorted(succ[nxt], key=str)))
    return []


def assign_levels(
    vertices: Sequence[Hashable],
    edges: Iterable[tuple[Hashable, Hashable]],
    equivalent: Iterable[Iterable[Hashable]] = (),
) -> dict:
    """Map every vertex to its level by iterated simultaneous sink removal.

    >>> assign_levels(["a", "b", "c"], [("a", "b"), ("b", "c")])
    {'a': 4, 'b': 3, 'c': 2}

    Raises :class:`CyclicPreferences` naming one cycle if the graph (after
    collapsing equivalence classes) is not acyclic.
    """
    rep = {v: v for v in vertices}

    def find(v):
        while rep[v] != v:
            rep[v] = rep[rep[v]]
            v = rep[v]
        return v

    for group in equivalent:
        group = list(group)
        unknown = [g for g in group if g not in rep]
        if unknown:
            raise ValueError(f"equivalence class mentions unknown vertices {unknown}")
        for other in group[1:]:
            a, b = find(group[0]), find(other)
            if a != b:
                rep[b] = a
    classes = list(dict.fromkeys(find(v) for v in vertices))
    succ: dict = {c: set() for c in classes}
    for u, v in edges:
        if u not in rep or v not in rep:
            raise ValueError(f"preference ({u}, {v}) mentions an unknown vertex")
        cu, cv = find(u), find(v)
        if cu == cv:
            raise CyclicPreferences([u, v])
        succ[cu].add(cv)

    level: dict = {}
    remaining = set(classes)
    current = BASE_LEVEL
    while remaining:
        sinks = [c for c in classes if c in remaining and not (succ[c] & remaining)]
        if not sinks:
            sub = {c: succ[c] & remaining for c in remaining}
            raise CyclicPreferences(_find_cycle(sorted(remaining, key=str), sub))
        for c in sinks:
            level[c] = current
        remaining.difference_update(sinks)
        current += 1
    return {v: level[find(v)] for v in vertices}

"""Text grid layouts.

``%`` wall, ``.`` pellet, ``o`` power pellet, ``P`` Pac-man, ``B`` blue ghost,
``O`` orange ghost, space for an empty cell.  Cell ``(x, y)`` has ``x``
growing east and ``y`` growing north, so the last text row is ``y = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import LayoutError

GHOST_CHARS = {"B": "blue", "O": "orange"}
GHOSTS = ("blue", "orange")
DEFAULT_LAYOUT = "smallClassic.lay"


@dataclass(frozen=True)
class Layout:
    width: int
    height: int
    walls: frozenset
    pellets: frozenset
    capsules: frozenset
    pacman_start: tuple[int, int]
    ghost_starts: tuple[tuple[str, tuple[int, int]], ...]

    def is_wall(self, cell: tuple[int, int]) -> bool:
        x, y = cell
        if not (0 <= x < self.width and 0 <= y < self.height):
            return True
        return cell in self.walls

    def ghost_start(self, name: str) -> tuple[int, int]:
        return dict(self.ghost_starts)[name]

    def render(self, pacman=None, ghosts=(), pellets=None, capsules=None) -> str:
        """ASCII picture; positions are cells."""
        pellets = self.pellets if pellets is None else pellets
        capsules = self.capsules if capsules is None else capsules
        rows = []
        for y in range(self.height - 1, -1, -1):
            row = []
            for x in range(self.width):
                c = (x, y)
                ch = "%" if c in self.walls else "o" if c in capsules else "." if c in pellets else " "
                for name, pos in ghosts:
                    if pos == c:
                        ch = name[0].upper()
                if pacman == c:
                    ch = "P"
                row.append(ch)
            rows.append("".join(row))
        return "\n".join(rows)


def parse_layout(text: str) -> Layout:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise LayoutError("empty layout")
    width = max(len(ln) for ln in lines)
    height = len(lines)
    walls, pellets, capsules = set(), set(), set()
    pacman = None
    ghosts: dict[str, tuple[int, int]] = {}
    for row, line in enumerate(lines):
        y = height - 1 - row
        for x, ch in enumerate(line.ljust(width)):
            cell = (x, y)
            if ch == "%":
                walls.add(cell)
            elif ch == ".":
                pellets.add(cell)
            elif ch == "o":
                capsules.add(cell)
            elif ch == "P":
                if pacman is not None:
                    raise LayoutError(f"second Pac-man at row {row + 1}, column {x + 1}")
                pacman = cell
            elif ch in GHOST_CHARS:
                name = GHOST_CHARS[ch]
                if name in ghosts:
                    raise LayoutError(f"second {name} ghost at row {row + 1}, column {x + 1}")
                ghosts[name] = cell
            elif ch != " ":
                raise LayoutError(f"unknown character {ch!r} at row {row + 1}, column {x + 1}")
    if pacman is None:
        raise LayoutError("layout has no Pac-man (P)")
    missing = [g for g in GHOSTS if g not in ghosts]
    if missing:
        raise LayoutError(f"layout lacks ghosts: {', '.join(missing)}")
    if not pellets and not capsules:
        raise LayoutError("layout has no food")
    return Layout(
        width,
        height,
        frozenset(walls),
        frozenset(pellets),
        frozenset(capsules),
        pacman,
        tuple((g, ghosts[g]) for g in GHOSTS),
    )


def load_layout(path: str | Path | None = None) -> Layout:
    """Read a layout file; ``None`` loads the bundled small classic maze."""
    if path is None:
        text = resources.files(__package__).joinpath("layouts").joinpath(DEFAULT_LAYOUT).read_text(encoding="utf-8")
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise LayoutError(f"cannot read layout {path}: {exc.strerror}") from None
    return parse_layout(text)

"""Square grid worlds: generation, text format, and neighbor expansion.

A grid is an n x n field of open/wall cells with one start and one end
cell. Movement is cardinal only and every move costs exactly 1. Grids are
immutable after construction and safe to share across worker threads.

Text format (one character per cell, row-major): '.' open, 'W' wall,
'S' start, 'E' end. Files carrying this format use the .grid extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .rng import MASK64, splitmix_at, splitmix_block


class Position(NamedTuple):
    x: int  # column, 0-based
    y: int  # row, 0-based


class Cell(Enum):
    OPEN = "."
    WALL = "W"
    START = "S"
    END = "E"


_LEGAL = frozenset(".WSE")
_WALL_BYTE = ord("W")

# 4-connectivity for the component check in generate().
_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)

MAX_GENERATE_ATTEMPTS = 1000


class GridParseError(ValueError):
    """Malformed grid text: ragged lines, illegal characters, bad S/E count."""


class GridGenerationError(RuntimeError):
    """No connected layout found within the attempt budget."""


@dataclass(frozen=True)
class Grid:
    """Immutable square grid; `cells` is the row-major field as ASCII bytes."""

    n: int
    cells: bytes
    start: Position
    end: Position

    def __post_init__(self):
        n = self.n
        if n < 2:
            raise ValueError(f"grid side must be >= 2, got {n}")
        if len(self.cells) != n * n:
            raise ValueError("cells length does not match n*n")
        if self.start == self.end:
            raise ValueError("start and end must differ")
        for name, pos, char in (("start", self.start, ord("S")), ("end", self.end, ord("E"))):
            if not (0 <= pos.x < n and 0 <= pos.y < n):
                raise ValueError(f"{name} position out of bounds: {pos}")
            if self.cells[pos.y * n + pos.x] != char:
                raise ValueError(f"cell at {name} position does not carry its marker")
        if self.cells.count(b"S") != 1 or self.cells.count(b"E") != 1:
            raise ValueError("grid must contain exactly one start and one end cell")

    def index(self, p: Position) -> int:
        return p.y * self.n + p.x

    def position(self, index: int) -> Position:
        return Position(index % self.n, index // self.n)

    def cell_at(self, p: Position) -> Cell:
        if not (0 <= p.x < self.n and 0 <= p.y < self.n):
            raise ValueError(f"position out of bounds: {p}")
        return Cell(chr(self.cells[p.y * self.n + p.x]))

    def is_wall(self, index: int) -> bool:
        return self.cells[index] == _WALL_BYTE

    def open_mask(self) -> bytes:
        """Row-major traversability mask: 1 for non-wall cells, 0 for walls."""
        arr = np.frombuffer(self.cells, dtype=np.uint8)
        return (arr != _WALL_BYTE).astype(np.uint8).tobytes()


def neighbors(grid: Grid, p: Position) -> list[Position]:
    """In-bounds, non-wall cardinal neighbors of p, in up/down/left/right order."""
    n = grid.n
    if not (0 <= p.x < n and 0 <= p.y < n):
        raise ValueError(f"position out of bounds: {p}")
    out = []
    for dx, dy in ((0, -1), (0, 1), (-1, 0), (1, 0)):
        nx, ny = p.x + dx, p.y + dy
        if 0 <= nx < n and 0 <= ny < n and grid.cells[ny * n + nx] != _WALL_BYTE:
            out.append(Position(nx, ny))
    return out


def parse(text: str) -> Grid:
    """Parse grid text; inverse of serialize. One optional trailing newline is accepted."""
    if text.endswith("\n"):
        text = text[:-1]
    lines = text.split("\n")
    n = len(lines)
    for line in lines:
        if len(line) != n:
            raise GridParseError(
                f"ragged grid: expected {n} lines of length {n}, got a line of length {len(line)}"
            )
    start = end = None
    for y, line in enumerate(lines):
        for x, ch in enumerate(line):
            if ch not in _LEGAL:
                raise GridParseError(f"illegal character {ch!r} at ({x},{y})")
            if ch == "S":
                if start is not None:
                    raise GridParseError("duplicate 'S'")
                start = Position(x, y)
            elif ch == "E":
                if end is not None:
                    raise GridParseError("duplicate 'E'")
                end = Position(x, y)
    if start is None:
        raise GridParseError("missing 'S'")
    if end is None:
        raise GridParseError("missing 'E'")
    return Grid(n=n, cells="".join(lines).encode("ascii"), start=start, end=end)


def serialize(grid: Grid) -> str:
    """Grid text with '\\n' between rows and no trailing whitespace."""
    n = grid.n
    rows = (grid.cells[y * n : (y + 1) * n].decode("ascii") for y in range(n))
    return "\n".join(rows)


def _connected(codes: np.ndarray, n: int, start_idx: int, end_idx: int) -> bool:
    mask = (codes != _WALL_BYTE).reshape(n, n)
    labels, _ = ndimage.label(mask, structure=_CROSS)
    flat = labels.reshape(-1)
    return flat[start_idx] != 0 and flat[start_idx] == flat[end_idx]


def generate(n: int, wall_probability: float, seed: int) -> Grid:
    """Deterministically generate a connected n x n grid.

    Each attempt consumes one SplitMix64 stream: output 0 picks the start
    cell uniformly, output 1 picks the end cell uniformly from the rest,
    and outputs 2..n*n+1 give one uniform float per cell in row-major
    order (a cell becomes a wall when its float is below wall_probability;
    the draws at the start and end cells are ignored). Attempt k uses
    stream seed+k; the first attempt whose layout connects start to end is
    returned, and the search gives up after MAX_GENERATE_ATTEMPTS.
    """
    if n < 2:
        raise ValueError(f"grid side must be >= 2, got {n}")
    if not 0.0 <= wall_probability < 1.0:
        raise ValueError(f"wall_probability must be in [0, 1), got {wall_probability}")
    n2 = n * n
    for attempt in range(MAX_GENERATE_ATTEMPTS):
        stream = (seed + attempt) & MASK64
        start_idx = splitmix_at(stream, 0) % n2
        pick = splitmix_at(stream, 1) % (n2 - 1)
        end_idx = pick + 1 if pick >= start_idx else pick

        floats = (splitmix_block(stream, 2, n2) >> np.uint64(11)) * 2.0**-53
        codes = np.where(floats < wall_probability, np.uint8(_WALL_BYTE), np.uint8(ord(".")))
        codes[start_idx] = ord("S")
        codes[end_idx] = ord("E")

        if _connected(codes, n, start_idx, end_idx):
            return Grid(
                n=n,
                cells=codes.tobytes(),
                start=Position(start_idx % n, start_idx // n),
                end=Position(end_idx % n, end_idx // n),
            )
    raise GridGenerationError(
        f"no connected {n}x{n} layout at wall probability {wall_probability} "
        f"within {MAX_GENERATE_ATTEMPTS} attempts (seed {seed})"
    )


__all__ = [
    "Cell",
    "Grid",
    "GridGenerationError",
    "GridParseError",
    "MAX_GENERATE_ATTEMPTS",
    "Position",
    "generate",
    "neighbors",
    "parse",
    "serialize",
]

"""Domineering positions: rectangles with blocked cells.

Cells are indexed row-major from the top-left.  ``Position.blocked`` is a
bitmask with bit ``r * width + c`` set when cell ``(r, c)`` is unplayable.

The solver works on a padded form of the free cells: a mask with stride
``width + 1`` whose padding column is always clear, so horizontal and
vertical neighbours are single shifts and nothing wraps between rows.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

MAX_HEIGHT = 16
MAX_WIDTH = 64
MAX_CELLS = 1024


class Player(enum.Enum):
    V = "V"
    H = "H"

    @property
    def other(self) -> "Player":
        return Player.H if self is Player.V else Player.V

    def __str__(self) -> str:
        return self.value


class BoardError(ValueError):
    pass


class Move(NamedTuple):
    player: Player
    row: int
    col: int

    def cells(self) -> tuple[tuple[int, int], tuple[int, int]]:
        if self.player is Player.V:
            return (self.row, self.col), (self.row + 1, self.col)
        return (self.row, self.col), (self.row, self.col + 1)


@dataclass(frozen=True)
class Position:
    height: int
    width: int
    blocked: int = 0

    def __post_init__(self):
        if not (1 <= self.height and 1 <= self.width):
            raise BoardError(f"bad board size {self.height}x{self.width}")
        if self.height * self.width > MAX_CELLS:
            raise BoardError(f"board {self.height}x{self.width} exceeds {MAX_CELLS} cells")
        if self.blocked < 0 or self.blocked >> (self.height * self.width):
            raise BoardError("blocked mask has bits outside the board")

    # cell access ----------------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << (self.height * self.width)) - 1

    @property
    def free(self) -> int:
        return self.full_mask & ~self.blocked

    def is_free(self, r: int, c: int) -> bool:
        return (0 <= r < self.height and 0 <= c < self.width
                and not self.blocked >> (r * self.width + c) & 1)

    def empty_cells(self) -> int:
        return bin(self.free).count("1")

    def rows(self) -> tuple[int, ...]:
        """Free cells of each row as ``width``-bit integers (bit c = column c)."""
        w = self.width
        free = self.free
        rowmask = (1 << w) - 1
        return tuple((free >> (r * w)) & rowmask for r in range(self.height))

    @classmethod
    def from_rows(cls, width: int, rows) -> "Position":
        rows = list(rows)
        free = 0
        for r, bits in enumerate(rows):
            free |= bits << (r * width)
        full = (1 << (len(rows) * width)) - 1
        return cls(len(rows), width, full & ~free)

    # padded form used by the solver
    def padded(self) -> int:
        s = self.width + 1
        out = 0
        for r, bits in enumerate(self.rows()):
            out |= bits << (r * s)
        return out

    @classmethod
    def from_padded(cls, height: int, width: int, free: int) -> "Position":
        s = width + 1
        rowmask = (1 << width) - 1
        return cls.from_rows(width, ((free >> (r * s)) & rowmask for r in range(height)))

    # moves ----------------------------------------------------------------

    def legal_moves(self, player: Player) -> list[Move]:
        h, w = self.height, self.width
        moves = []
        for r in range(h):
            for c in range(w):
                if not self.is_free(r, c):
                    continue
                if player is Player.V:
                    if self.is_free(r + 1, c):
                        moves.append(Move(player, r, c))
                elif self.is_free(r, c + 1):
                    moves.append(Move(player, r, c))
        return moves

    def play(self, mv: Move) -> "Position":
        (r1, c1), (r2, c2) = mv.cells()
        if not (self.is_free(r1, c1) and self.is_free(r2, c2)):
            raise BoardError(f"illegal move {mv}")
        w = self.width
        bits = (1 << (r1 * w + c1)) | (1 << (r2 * w + c2))
        return Position(self.height, self.width, self.blocked | bits)

    # structure ------------------------------------------------------------

    def components(self) -> list["Position"]:
        """4-connected groups of free cells, each cropped to its bounding box."""
        return [Position.from_padded(h, w, f)
                for h, w, f in split_padded(self.height, self.width, self.padded(), keep_dead=True)]

    def transpose(self) -> "Position":
        w, h = self.width, self.height
        free = 0
        for r in range(h):
            for c in range(w):
                if self.is_free(r, c):
                    free |= 1 << (c * h + r)
        return Position(w, h, ((1 << (h * w)) - 1) & ~free)

    def rotate90(self) -> "Position":
        """Quarter turn clockwise.  Exchanges the roles of the two players."""
        return self.transpose().mirror_horizontal()

    def mirror_horizontal(self) -> "Position":
        """Reflect left-right."""
        return Position.from_rows(self.width, (reverse_bits(r, self.width) for r in self.rows()))

    def mirror_vertical(self) -> "Position":
        """Reflect top-bottom."""
        return Position.from_rows(self.width, reversed(self.rows()))

    def rotate180(self) -> "Position":
        return self.mirror_horizontal().mirror_vertical()

    def normalize_key(self) -> tuple:
        """Key shared by positions related by left-right or top-bottom reflection."""
        return rows_key(self.width, self.rows())

    # text -----------------------------------------------------------------

    def to_ascii(self) -> str:
        return "\n".join(
            "".join("." if self.is_free(r, c) else "#" for c in range(self.width))
            for r in range(self.height))

    def __str__(self) -> str:
        return self.to_ascii()


def rect(m: int, n: int) -> Position:
    """Empty board with ``m`` rows (vertical dimension) and ``n`` columns."""
    return Position(m, n, 0)


def from_ascii(text: str) -> Position:
    lines = [ln.rstrip("\r") for ln in text.strip("\n").split("\n")]
    lines = [ln.strip() for ln in lines]
    if not lines or not lines[0]:
        raise BoardError("empty board")
    width = len(lines[0])
    blocked = 0
    for r, line in enumerate(lines):
        if len(line) != width:
            raise BoardError(f"line {r + 1} has length {len(line)}, expected {width}")
        for c, ch in enumerate(line):
            if ch == "#":
                blocked |= 1 << (r * width + c)
            elif ch != ".":
                raise BoardError(f"illegal character {ch!r} at line {r + 1}, column {c + 1}")
    return Position(len(lines), width, blocked)


def parse_boards(text: str) -> list[Position]:
    """Boards separated by blank lines; together they denote a disjunctive sum."""
    blocks, cur = [], []
    for line in text.splitlines():
        if line.strip():
            cur.append(line)
        elif cur:
            blocks.append("\n".join(cur))
            cur = []
    if cur:
        blocks.append("\n".join(cur))
    if not blocks:
        raise BoardError("no board found")
    return [from_ascii(b) for b in blocks]


# bit helpers shared with the solver ----------------------------------------

@lru_cache(maxsize=None)
def _reverse_table(width: int) -> tuple[int, ...]:
    return tuple(int(format(x, f"0{width}b")[::-1], 2) for x in range(1 << width))


def reverse_bits(x: int, width: int) -> int:
    if width <= 12:
        return _reverse_table(width)[x]
    return int(format(x, f"0{width}b")[::-1], 2)


def rows_key(width: int, rows) -> tuple:
    rows = tuple(rows)
    flipped = tuple(reverse_bits(r, width) for r in rows) if width > 1 else rows
    return (width, min(rows, rows[::-1], flipped, flipped[::-1]))


def split_padded(h: int, w: int, free: int, keep_dead: bool = False) -> Iterator[tuple[int, int, int]]:
    """Yield the connected components of a padded free mask as cropped ``(h, w, free)``.

    Cells with no free neighbour are dropped unless ``keep_dead``; they admit
    no move for either player.  Components come out ordered by their first
    cell in row-major order.
    """
    s = w + 1
    if not keep_dead:
        free &= (free << 1) | (free >> 1) | (free << s) | (free >> s)
    while free:
        comp = free & -free
        while True:
            grown = (comp | (comp << 1) | (comp >> 1) | (comp << s) | (comp >> s)) & free
            if grown == comp:
                break
            comp = grown
        free &= ~comp
        yield crop_padded(w, comp)


def crop_padded(w: int, comp: int) -> tuple[int, int, int]:
    s = w + 1
    r0 = ((comp & -comp).bit_length() - 1) // s
    r1 = (comp.bit_length() - 1) // s
    rowmask = (1 << w) - 1
    rows = [(comp >> (r * s)) & rowmask for r in range(r0, r1 + 1)]
    cols = 0
    for x in rows:
        cols |= x
    c0 = (cols & -cols).bit_length() - 1
    nw = cols.bit_length() - c0
    ns = nw + 1
    out = 0
    for i, x in enumerate(rows):
        out |= (x >> c0) << (i * ns)
    return r1 - r0 + 1, nw, out


def padded_rows(h: int, w: int, free: int) -> tuple[int, ...]:
    s = w + 1
    rowmask = (1 << w) - 1
    return tuple((free >> (r * s)) & rowmask for r in range(h))


def padded_key(h: int, w: int, free: int) -> tuple:
    return rows_key(w, padded_rows(h, w, free))


def popcount(x: int) -> int:
    return bin(x).count("1")

"""Short partizan games in canonical form.

Every game lives in a :class:`GameStore` that hash-conses canonical forms, so
two :class:`Game` handles are equal exactly when they are the same object.
Comparison, sums and negation are memoized per store on handle ids.

Games are written in slash notation: ``{1|||1/2|-1||-3/2|-7/2}``.  The
separator with the most bars binds loosest.
"""

from __future__ import annotations

import enum
import re
import threading
from typing import Iterable, Optional


class ResourceError(RuntimeError):
    """A configured node, time or cell budget was exceeded."""


class GameSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class DyadicRational:
    """Exact ``numerator / 2**denominator_log2`` kept in lowest terms."""

    __slots__ = ("numerator", "denominator_log2")

    def __init__(self, numerator: int, denominator_log2: int = 0):
        if denominator_log2 < 0:
            raise ValueError("denominator_log2 must be nonnegative")
        if numerator == 0:
            denominator_log2 = 0
        elif denominator_log2:
            shift = min((numerator & -numerator).bit_length() - 1, denominator_log2)
            numerator >>= shift
            denominator_log2 -= shift
        self.numerator = numerator
        self.denominator_log2 = denominator_log2

    @classmethod
    def parse(cls, text: str) -> "DyadicRational":
        m = re.fullmatch(r"(-?\d+)(?:/(\d+))?", text)
        if not m:
            raise ValueError(f"not a number: {text!r}")
        num = int(m.group(1))
        if m.group(2) is None:
            return cls(num)
        den = int(m.group(2))
        if den <= 0 or den & (den - 1):
            raise ValueError(f"denominator of {text!r} is not a power of two")
        return cls(num, den.bit_length() - 1)

    @property
    def denominator(self) -> int:
        return 1 << self.denominator_log2

    def is_integer(self) -> bool:
        return self.denominator_log2 == 0

    def _aligned(self, other: "DyadicRational") -> tuple[int, int, int]:
        q = max(self.denominator_log2, other.denominator_log2)
        return (
            self.numerator << (q - self.denominator_log2),
            other.numerator << (q - other.denominator_log2),
            q,
        )

    def __add__(self, other: "DyadicRational") -> "DyadicRational":
        a, b, q = self._aligned(other)
        return DyadicRational(a + b, q)

    def __sub__(self, other: "DyadicRational") -> "DyadicRational":
        a, b, q = self._aligned(other)
        return DyadicRational(a - b, q)

    def __neg__(self) -> "DyadicRational":
        return DyadicRational(-self.numerator, self.denominator_log2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DyadicRational):
            return NotImplemented
        return (self.numerator == other.numerator
                and self.denominator_log2 == other.denominator_log2)

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator_log2))

    def __lt__(self, other: "DyadicRational") -> bool:
        a, b, _ = self._aligned(other)
        return a < b

    def __le__(self, other: "DyadicRational") -> bool:
        a, b, _ = self._aligned(other)
        return a <= b

    def __gt__(self, other: "DyadicRational") -> bool:
        return other < self

    def __ge__(self, other: "DyadicRational") -> bool:
        return other <= self

    def floor(self) -> int:
        return self.numerator >> self.denominator_log2

    def ceil(self) -> int:
        return -((-self.numerator) >> self.denominator_log2)

    def __str__(self) -> str:
        if self.denominator_log2 == 0:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"

    def __repr__(self) -> str:
        return f"DyadicRational({self})"


def simplest_between(lo: Optional[DyadicRational], hi: Optional[DyadicRational]) -> DyadicRational:
    """The simplest number strictly between ``lo`` and ``hi`` (None = unbounded)."""
    zero = DyadicRational(0)
    if (lo is None or lo < zero) and (hi is None or zero < hi):
        return zero
    if hi is None or (lo is not None and lo >= zero):
        n = lo.floor() + 1
        if hi is None or DyadicRational(n) < hi:
            return DyadicRational(n)
    else:
        n = hi.ceil() - 1
        if lo is None or lo < DyadicRational(n):
            return DyadicRational(n)
    q = 1
    while True:
        k = ((lo.numerator << q) >> lo.denominator_log2) + 1
        cand = DyadicRational(k, q)
        if lo < cand < hi:
            return cand
        q += 1


class Outcome(enum.Enum):
    V = "V"
    H = "H"
    FIRST = "1"
    SECOND = "2"

    def swapped(self) -> "Outcome":
        return _SWAP.get(self, self)

    def __str__(self) -> str:
        return self.value


_SWAP = {Outcome.V: Outcome.H, Outcome.H: Outcome.V}


class Relation(enum.Enum):
    LESS = "LESS"
    EQUAL = "EQUAL"
    GREATER = "GREATER"
    CONFUSED = "CONFUSED"


class Game:
    """Handle to a canonical game.  Create games through a :class:`GameStore`."""

    __slots__ = ("left", "right", "uid", "number", "store")

    def __init__(self, left: tuple, right: tuple, uid: int,
                 number: Optional[DyadicRational], store: "GameStore"):
        self.left = left
        self.right = right
        self.uid = uid
        self.number = number
        self.store = store

    def is_number(self) -> bool:
        return self.number is not None

    def is_integer(self) -> bool:
        return self.number is not None and self.number.denominator_log2 == 0

    def __hash__(self) -> int:
        return self.uid

    def __eq__(self, other) -> bool:
        return self is other

    def __add__(self, other: "Game") -> "Game":
        return self.store.add(self, other)

    def __neg__(self) -> "Game":
        return self.store.neg(self)

    def __sub__(self, other: "Game") -> "Game":
        return self.store.add(self, self.store.neg(other))

    def __le__(self, other: "Game") -> bool:
        return self.store.le(self, other)

    def __ge__(self, other: "Game") -> bool:
        return self.store.le(other, self)

    def __lt__(self, other: "Game") -> bool:
        return self.store.le(self, other) and not self.store.le(other, self)

    def __gt__(self, other: "Game") -> bool:
        return other < self

    def __mul__(self, n: int) -> "Game":
        return self.store.multiply_int(n, self)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_game(self)

    def __repr__(self) -> str:
        return f"Game({format_game(self)})"


class GameStore:
    """Append-only interning store of canonical games with memoized algebra."""

    def __init__(self, node_budget: int = 1 << 22):
        self.node_budget = node_budget
        self._nodes: list[Game] = []
        self._index: dict[tuple, Game] = {}
        self._numbers: dict[DyadicRational, Game] = {}
        self._le: dict[tuple[int, int], bool] = {}
        self._sum: dict[tuple[int, int], Game] = {}
        self._neg: dict[int, Game] = {}
        self._lock = threading.RLock()
        self.zero = self.number(DyadicRational(0))

    def __len__(self) -> int:
        return len(self._nodes)

    # construction -------------------------------------------------------

    def _intern(self, left: Iterable[Game], right: Iterable[Game],
                number: Optional[DyadicRational] = None) -> Game:
        lt = tuple(sorted(left, key=_uid))
        rt = tuple(sorted(right, key=_uid))
        key = (tuple(g.uid for g in lt), tuple(g.uid for g in rt))
        g = self._index.get(key)
        if g is not None:
            return g
        with self._lock:
            g = self._index.get(key)
            if g is None:
                if len(self._nodes) >= self.node_budget:
                    raise ResourceError(
                        f"game store exceeded its budget of {self.node_budget} nodes")
                g = Game(lt, rt, len(self._nodes), number, self)
                self._nodes.append(g)
                self._index[key] = g
        return g

    def number(self, value) -> Game:
        if not isinstance(value, DyadicRational):
            value = DyadicRational(value) if isinstance(value, int) else DyadicRational.parse(value)
        g = self._numbers.get(value)
        if g is not None:
            return g
        if value.denominator_log2:
            step = DyadicRational(1, value.denominator_log2)
            g = self._intern([self.number(value - step)], [self.number(value + step)], value)
        elif value.numerator > 0:
            g = self._intern([self.number(value.numerator - 1)], [], value)
        elif value.numerator < 0:
            g = self._intern([], [self.number(value.numerator + 1)], value)
        else:
            g = self._intern([], [], value)
        self._numbers[value] = g
        return g

    def game(self, left: Iterable[Game], right: Iterable[Game]) -> Game:
        """Canonical form of ``{left | right}`` for canonical options."""
        L = set(left)
        R = set(right)
        number = self._as_number(L, R)
        if number is not None:
            return self.number(number)
        while True:
            L = self._maximal(L)
            R = self._minimal(R)
            memo: dict = {}
            newL: set = set()
            newR: set = set()
            changed = False
            for a in L:
                for ar in a.right:
                    if self._le_canon_form(ar, L, R, memo):
                        newL.update(ar.left)
                        changed = True
                        break
                else:
                    newL.add(a)
            for b in R:
                for bl in b.left:
                    if self._le_form_canon(L, R, bl, memo):
                        newR.update(bl.right)
                        changed = True
                        break
                else:
                    newR.add(b)
            if not changed:
                break
            L, R = newL, newR
        number = self._as_number(L, R)
        if number is not None:
            return self.number(number)
        return self._intern(L, R)

    @staticmethod
    def _as_number(L, R) -> Optional[DyadicRational]:
        lo = hi = None
        for g in L:
            if g.number is None:
                return None
            if lo is None or lo < g.number:
                lo = g.number
        for g in R:
            if g.number is None:
                return None
            if hi is None or g.number < hi:
                hi = g.number
        if lo is not None and hi is not None and not lo < hi:
            return None
        return simplest_between(lo, hi)

    def _maximal(self, opts: set) -> set:
        # distinct canonical handles are never equal, so <= means strictly dominated
        if len(opts) < 2:
            return opts
        le = self.le
        return {a for a in opts if not any(b is not a and le(a, b) for b in opts)}

    def _minimal(self, opts: set) -> set:
        if len(opts) < 2:
            return opts
        le = self.le
        return {a for a in opts if not any(b is not a and le(b, a) for b in opts)}

    # the form being canonicalized is given by its option sets L, R
    def _le_form_canon(self, L, R, h: Game, memo: dict) -> bool:
        key = (0, h.uid)
        r = memo.get(key)
        if r is None:
            le = self.le
            r = not (any(le(h, gl) for gl in L)
                     or any(self._le_canon_form(hr, L, R, memo) for hr in h.right))
            memo[key] = r
        return r

    def _le_canon_form(self, g: Game, L, R, memo: dict) -> bool:
        key = (1, g.uid)
        r = memo.get(key)
        if r is None:
            le = self.le
            r = not (any(self._le_form_canon(L, R, gl, memo) for gl in g.left)
                     or any(le(gr, g) for gr in R))
            memo[key] = r
        return r

    # algebra ------------------------------------------------------------

    def le(self, g: Game, h: Game) -> bool:
        if g is h:
            return True
        gn = g.number
        hn = h.number
        if gn is not None and hn is not None:
            return gn <= hn
        key = (g.uid, h.uid)
        r = self._le.get(key)
        if r is None:
            le = self.le
            r = True
            for gl in g.left:
                if le(h, gl):
                    r = False
                    break
            if r:
                for hr in h.right:
                    if le(hr, g):
                        r = False
                        break
            self._le[key] = r
        return r

    def compare(self, g: Game, h: Game) -> Relation:
        a = self.le(g, h)
        b = self.le(h, g)
        if a and b:
            return Relation.EQUAL
        if a:
            return Relation.LESS
        if b:
            return Relation.GREATER
        return Relation.CONFUSED

    def add(self, g: Game, h: Game) -> Game:
        gn = g.number
        hn = h.number
        if gn is not None:
            if hn is not None:
                return self.number(gn + hn)
            if gn.numerator == 0:
                return h
        elif hn is not None and hn.numerator == 0:
            return g
        key = (g.uid, h.uid) if g.uid <= h.uid else (h.uid, g.uid)
        r = self._sum.get(key)
        if r is not None:
            return r
        add = self.add
        if gn is not None:
            # number translation
            r = self.game([add(g, x) for x in h.left], [add(g, x) for x in h.right])
        elif hn is not None:
            r = self.game([add(x, h) for x in g.left], [add(x, h) for x in g.right])
        else:
            r = self.game(
                [add(x, h) for x in g.left] + [add(g, x) for x in h.left],
                [add(x, h) for x in g.right] + [add(g, x) for x in h.right])
        self._sum[key] = r
        return r

    def neg(self, g: Game) -> Game:
        if g.number is not None:
            return self.number(-g.number)
        r = self._neg.get(g.uid)
        if r is None:
            # negation of a canonical form is canonical
            r = self._intern([self.neg(x) for x in g.right], [self.neg(x) for x in g.left])
            self._neg[g.uid] = r
        return r

    def multiply_int(self, n: int, g: Game) -> Game:
        """``n`` copies of ``g`` (``-g`` copies when ``n`` is negative), by doubling."""
        if n < 0:
            return self.neg(self.multiply_int(-n, g))
        acc, base = self.zero, g
        while n:
            if n & 1:
                acc = self.add(acc, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return acc

    def sum(self, games: Iterable[Game]) -> Game:
        acc = self.zero
        for g in games:
            acc = self.add(acc, g)
        return acc

    def outcome(self, g: Game) -> Outcome:
        return _OUTCOME_OF_RELATION[self.compare(g, self.zero)]

    def parse(self, text: str) -> Game:
        return _Parser(self, text).parse()


def _uid(g: Game) -> int:
    return g.uid


_OUTCOME_OF_RELATION = {
    Relation.GREATER: Outcome.V,
    Relation.LESS: Outcome.H,
    Relation.CONFUSED: Outcome.FIRST,
    Relation.EQUAL: Outcome.SECOND,
}

default_store = GameStore()


def number(value) -> Game:
    return default_store.number(value)


def game(left: Iterable[Game], right: Iterable[Game]) -> Game:
    return default_store.game(left, right)


def zero() -> Game:
    return default_store.zero


def leq(g: Game, h: Game) -> bool:
    return g.store.le(g, h)


def compare(g: Game, h: Game) -> Relation:
    return g.store.compare(g, h)


def add(g: Game, h: Game) -> Game:
    return g.store.add(g, h)


def negate(g: Game) -> Game:
    return g.store.neg(g)


def multiply_int(n: int, g: Game) -> Game:
    return g.store.multiply_int(n, g)


def outcome_of_value(g: Game) -> Outcome:
    return g.store.outcome(g)


def parse_game(text: str, store: Optional[GameStore] = None) -> Game:
    return (store or default_store).parse(text)


# slash notation ---------------------------------------------------------

def format_game(g: Game) -> str:
    if g.number is not None:
        return str(g.number)
    return "{" + _format_bare(g)[0] + "}"


def _format_bare(g: Game) -> tuple[str, int]:
    bars = 0

    def side(opts) -> str:
        nonlocal bars
        parts = []
        for o in opts:
            if o.number is not None:
                parts.append(str(o.number))
            elif len(opts) == 1 and len(o.left) == 1 and len(o.right) == 1:
                text, b = _format_bare(o)
                bars = max(bars, b)
                parts.append(text)
            else:
                parts.append(format_game(o))
        return ",".join(parts)

    left = side(_sorted_for_print(g.left))
    right = side(_sorted_for_print(g.right))
    return left + "|" * (bars + 1) + right, bars + 1


def _sorted_for_print(opts) -> list:
    # numbers first in decreasing order, then other games by creation order
    nums = sorted((o for o in opts if o.number is not None), key=lambda o: o.number, reverse=True)
    rest = sorted((o for o in opts if o.number is None), key=_uid)
    return nums + rest


class _Parser:
    _NUMBER = re.compile(r"-?\d+(?:/\d+)?")

    def __init__(self, store: GameStore, text: str):
        self.store = store
        self.raw = text
        self.text = text.replace("−", "-")

    def error(self, message: str, pos: int):
        raise GameSyntaxError(message, self.raw, pos)

    def parse(self) -> Game:
        t = self.text
        start, end = 0, len(t)
        while start < end and t[start].isspace():
            start += 1
        while end > start and t[end - 1].isspace():
            end -= 1
        if start == end:
            self.error("empty game string", start)
        return self.item(start, end)

    def _strip(self, start: int, end: int) -> tuple[int, int]:
        t = self.text
        while start < end and t[start].isspace():
            start += 1
        while end > start and t[end - 1].isspace():
            end -= 1
        return start, end

    def _matching(self, open_pos: int, end: int) -> int:
        depth = 0
        t = self.text
        for i in range(open_pos, end):
            if t[i] == "{":
                depth += 1
            elif t[i] == "}":
                depth -= 1
                if depth == 0:
                    return i
        self.error("unbalanced '{'", open_pos)

    def item(self, start: int, end: int) -> Game:
        start, end = self._strip(start, end)
        if start == end:
            self.error("missing option", start)
        t = self.text
        if t[start] == "{" and self._matching(start, end) == end - 1:
            return self.body(start + 1, end - 1)
        if self._bar_runs(start, end):
            return self.body(start, end)
        m = self._NUMBER.fullmatch(t, start, end)
        if not m:
            self.error("expected a number or a game", start)
        try:
            return self.store.number(DyadicRational.parse(t[start:end]))
        except ValueError as exc:
            self.error(str(exc), start)

    def _bar_runs(self, start: int, end: int) -> list[tuple[int, int]]:
        runs = []
        depth = 0
        t = self.text
        i = start
        while i < end:
            c = t[i]
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
                if depth < 0:
                    self.error("unbalanced '}'", i)
            elif c == "|" and depth == 0:
                j = i
                while j < end and t[j] == "|":
                    j += 1
                runs.append((i, j))
                i = j
                continue
            i += 1
        if depth != 0:
            self.error("unbalanced '{'", start)
        return runs

    def body(self, start: int, end: int) -> Game:
        runs = self._bar_runs(start, end)
        if not runs:
            self.error("expected '|' inside braces", start)
        width = max(j - i for i, j in runs)
        top = [r for r in runs if r[1] - r[0] == width]
        if len(top) != 1:
            self.error("ambiguous separators of equal bar count", top[1][0])
        i, j = top[0]
        return self.store.game(self.side(start, i), self.side(j, end))

    def side(self, start: int, end: int) -> list[Game]:
        start, end = self._strip(start, end)
        if start == end:
            return []
        t = self.text
        items = []
        depth = 0
        s = start
        for i in range(start, end):
            c = t[i]
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
            elif c == "," and depth == 0:
                items.append((s, i))
                s = i + 1
        items.append((s, end))
        return [self.item(a, b) for a, b in items]

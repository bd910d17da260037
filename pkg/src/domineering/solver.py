"""Values and outcome classes of Domineering positions.

Two engines share the component machinery in :mod:`domineering.board`:

* :class:`ValueSolver` computes canonical values by recursion over moves,
  summing the values of independent components.
* :class:`OutcomeSolver` decides who wins a disjunctive sum of board parts
  and abstract games by win/loss search.  Components small enough for the
  value engine are folded into a single abstract game; bigger ones are
  searched jointly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .board import (
    crop_padded,
    Player,
    Position,
    padded_rows,
    popcount,
    rows_key,
    split_padded,
)
from .cgt import Game, GameStore, Outcome, ResourceError, default_store


def _vertical_capacity(rows: Sequence[int]) -> int:
    """Most vertical dominoes that fit: sum of floor(run/2) down every column."""
    pending = 0
    count = 0
    for f in rows:
        count += popcount(f & pending)
        pending = f & ~pending
    return count


_HCAP: dict[int, int] = {}


def _row_capacity(x: int) -> int:
    """Most horizontal dominoes in one row: sum of floor(run/2)."""
    r = _HCAP.get(x)
    if r is None:
        r = 0
        y = x
        while y:
            low = y & -y
            if y & (low << 1):
                r += 1
                y &= ~(low | (low << 1))
            else:
                y &= ~low
        _HCAP[x] = r
    return r


def _horizontal_capacity(rows: Sequence[int]) -> int:
    return sum(_row_capacity(x) for x in rows)


@dataclass
class SearchStats:
    nodes: int = 0
    tt_hits: int = 0
    values: int = 0
    elapsed: float = 0.0


class ValueSolver:
    """Canonical values of positions, memoized on symmetry-normalized components."""

    def __init__(self, store: Optional[GameStore] = None, max_cells: int = 40,
                 node_budget: Optional[int] = None, symmetric: bool = True):
        self.store = store or default_store
        self.max_cells = max_cells
        self.node_budget = node_budget
        self.symmetric = symmetric
        self.cache: dict[tuple, Game] = {}
        self.raw: dict[tuple[int, int], Game] = {}
        self.stats = SearchStats()

    def value_of_position(self, p: Position) -> Game:
        cells = p.empty_cells()
        if cells > self.max_cells:
            raise ResourceError(f"position has {cells} empty cells; value budget is {self.max_cells}")
        return self.value_of_padded(p.height, p.width, p.padded())

    def value_of_padded(self, h: int, w: int, free: int) -> Game:
        store = self.store
        raw = self.raw
        s = w + 1
        total = store.zero
        free &= (free << 1) | (free >> 1) | (free << s) | (free >> s)
        while free:
            comp = free & -free
            while True:
                grown = (comp | (comp << 1) | (comp >> 1) | (comp << s) | (comp >> s)) & free
                if grown == comp:
                    break
                comp = grown
            free ^= comp
            # row-shifted mask: a cheap, orientation-specific cache key
            rkey = (w, comp >> (((comp & -comp).bit_length() - 1) // s * s))
            g = raw.get(rkey)
            if g is None:
                g = self.component_value(*crop_padded(w, comp))
                raw[rkey] = g
            total = store.add(total, g)
        return total

    def component_value(self, h: int, w: int, free: int) -> Game:
        rows = padded_rows(h, w, free)
        key = rows_key(w, rows) if self.symmetric else (w, rows)
        g = self.cache.get(key)
        if g is not None:
            return g
        store = self.store
        s = w + 1
        vmoves = free & (free >> s)
        hmoves = free & (free >> 1)
        if not hmoves:
            g = store.number(_vertical_capacity(rows))
        elif not vmoves:
            g = store.number(-_horizontal_capacity(rows))
        else:
            self.stats.values += 1
            if self.node_budget is not None and self.stats.values > self.node_budget:
                raise ResourceError("value search exceeded its node budget")
            child = self.value_of_padded
            left = set()
            m = vmoves
            while m:
                b = m & -m
                m ^= b
                left.add(child(h, w, free & ~(b | (b << s))))
            right = set()
            m = hmoves
            while m:
                b = m & -m
                m ^= b
                right.add(child(h, w, free & ~(b | (b << 1))))
            g = store.game(left, right)
        self.cache[key] = g
        return g


def _stops(g: Game, memo: dict) -> tuple:
    """(left stop, right stop) of a canonical game."""
    if g.number is not None:
        return g.number, g.number
    r = memo.get(g.uid)
    if r is None:
        left = max(_stops(x, memo)[1] for x in g.left)
        right = min(_stops(x, memo)[0] for x in g.right)
        r = memo[g.uid] = (left, right)
    return r


class _Comp:
    """A component too large for the value engine, in normalized orientation."""

    __slots__ = ("key", "h", "w", "free", "rows", "cells",
                 "maxv", "maxh", "safev", "safeh", "children")

    def __init__(self, key: tuple):
        w, rows = key
        self.key = key
        self.h = len(rows)
        self.w = w
        self.rows = rows
        s = w + 1
        free = 0
        for r, x in enumerate(rows):
            free |= x << (r * s)
        self.free = free
        self.cells = popcount(free)
        self.maxv = _vertical_capacity(rows)
        self.maxh = _horizontal_capacity(rows)
        # cells the opponent can never cover give guaranteed moves
        only_v = free & ~((free << 1) | (free >> 1))
        only_h = free & ~((free << s) | (free >> s))
        self.safev = _vertical_capacity(padded_rows(self.h, w, only_v))
        self.safeh = _horizontal_capacity(padded_rows(self.h, w, only_h))
        self.children = {}


@dataclass
class SumPosition:
    """Disjunctive sum of board parts and abstract games."""

    parts: list = field(default_factory=list)
    abstract_parts: list = field(default_factory=list)

    def __post_init__(self):
        if not self.parts and not self.abstract_parts:
            raise ValueError("a sum needs at least one part")

    @classmethod
    def of(cls, *items) -> "SumPosition":
        parts = [x for x in items if isinstance(x, Position)]
        games = [x for x in items if isinstance(x, Game)]
        if len(parts) + len(games) != len(items):
            raise TypeError("parts must be Positions or Games")
        return cls(parts, games)


class OutcomeSolver:
    """Win/loss search over disjunctive sums.

    ``value_cells`` is the component size at or below which a component is
    replaced by its canonical value.  Components where only one player can
    move are always replaced by their (integer) value.
    """

    def __init__(self, store: Optional[GameStore] = None, value_cells: int = 14,
                 node_budget: int = 10 ** 9, timeout: Optional[float] = None,
                 values: Optional[ValueSolver] = None, use_tt: bool = True,
                 symmetric: bool = True):
        self.store = store or default_store
        self.values = values or ValueSolver(self.store, symmetric=symmetric)
        self.value_cells = value_cells
        self.node_budget = node_budget
        self.timeout = timeout
        self.use_tt = use_tt
        self.symmetric = symmetric
        self.tt: dict[tuple, bool] = {}
        self.comps: dict[tuple, _Comp] = {}
        self._stops: dict[int, tuple] = {}
        self._int_bounds: dict[int, tuple[int, int]] = {}
        self.stats = SearchStats()
        self._deadline = None

    # public surface -----------------------------------------------------

    def outcome(self, s: SumPosition) -> Outcome:
        bigs, small = self._prepare(s)
        v_first = self._run(bigs, small, Player.V)
        h_first = self._run(bigs, small, Player.H)
        if v_first and h_first:
            return Outcome.FIRST
        if v_first:
            return Outcome.V
        if h_first:
            return Outcome.H
        return Outcome.SECOND

    def first_player_wins(self, s: SumPosition, player: Player) -> bool:
        bigs, small = self._prepare(s)
        return self._run(bigs, small, player)

    # setup --------------------------------------------------------------

    def _prepare(self, s: SumPosition) -> tuple[tuple, Game]:
        store = self.store
        bigs: list = []
        small = store.sum(s.abstract_parts)
        for p in s.parts:
            b, g = self._enter(p.height, p.width, p.padded())
            bigs.extend(b)
            small = store.add(small, g)
        return tuple(sorted(bigs)), small

    def _run(self, bigs: tuple, small: Game, player: Player) -> bool:
        start = time.monotonic()
        self._deadline = None if self.timeout is None else start + self.timeout
        try:
            return self._wins(bigs, small, player is Player.V)
        finally:
            self.stats.elapsed += time.monotonic() - start

    def _key(self, w: int, rows: tuple) -> tuple:
        return rows_key(w, rows) if self.symmetric else (w, rows)

    def _enter(self, h: int, w: int, free: int) -> tuple[list, Game]:
        """Split a padded region into searched components and one summed value."""
        store = self.store
        bigs = []
        small = store.zero
        for ch, cw, cf in split_padded(h, w, free):
            cs = cw + 1
            if popcount(cf) <= self.value_cells or not (cf & (cf >> 1)) or not (cf & (cf >> cs)):
                small = store.add(small, self.values.component_value(ch, cw, cf))
            else:
                key = self._key(cw, padded_rows(ch, cw, cf))
                if key not in self.comps:
                    self.comps[key] = _Comp(key)
                bigs.append(key)
        return bigs, small

    def _children(self, comp: _Comp, vertical: bool) -> list:
        kids = comp.children.get(vertical)
        if kids is not None:
            return kids
        h, w, free = comp.h, comp.w, comp.free
        s = w + 1
        vm = free & (free >> s)
        hm = free & (free >> 1)
        kids = []
        if vertical:
            m = vm
            while m:
                b = m & -m
                m ^= b
                hit = popcount(hm & (b | (b >> 1) | (b << s) | (b << (s - 1))))
                lost = popcount(vm & (b | (b >> s) | (b << s))) - 1
                bigs, small = self._enter(h, w, free & ~(b | (b << s)))
                kids.append((2 * hit - lost, tuple(bigs), small))
        else:
            m = hm
            while m:
                b = m & -m
                m ^= b
                hit = popcount(vm & (b | (b << 1) | (b >> s) | (b >> (s - 1))))
                lost = popcount(hm & (b | (b >> 1) | (b << 1))) - 1
                bigs, small = self._enter(h, w, free & ~(b | (b << 1)))
                kids.append((2 * hit - lost, tuple(bigs), small))
        kids.sort(key=lambda k: -k[0])
        comp.children[vertical] = kids
        return kids

    def _integer_bounds(self, g: Game) -> tuple[int, int]:
        """Integers a <= g <= b, as tight as a couple of comparisons allow."""
        r = self._int_bounds.get(g.uid)
        if r is None:
            if g.number is not None:
                r = (g.number.floor(), g.number.ceil())
            else:
                store = self.store
                left, right = _stops(g, self._stops)
                a = right.ceil() - 1
                if store.le(store.number(a + 1), g):
                    a += 1
                b = left.floor() + 1
                if store.le(g, store.number(b - 1)):
                    b -= 1
                r = (a, b)
            self._int_bounds[g.uid] = r
        return r

    # search -------------------------------------------------------------

    def _tick(self):
        st = self.stats
        if st.nodes > self.node_budget:
            raise ResourceError(f"search exceeded its node budget of {self.node_budget}")
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise ResourceError("search timed out")

    def _wins(self, bigs: tuple, small: Game, vertical: bool) -> bool:
        """True when the player to move (Vertical if ``vertical``) wins."""
        st = self.stats
        st.nodes += 1
        if not st.nodes & 4095:
            self._tick()
        store = self.store
        if not bigs:
            if vertical:
                return not store.le(small, store.zero)
            return not store.le(store.zero, small)
        key = (bigs, small.uid, vertical)
        if self.use_tt:
            r = self.tt.get(key)
            if r is not None:
                st.tt_hits += 1
                return r

        comps = self.comps
        safev = safeh = maxv = maxh = 0
        for k in bigs:
            c = comps[k]
            safev += c.safev
            safeh += c.safeh
            maxv += c.maxv
            maxh += c.maxh
        lo, hi = self._integer_bounds(small)
        # replacing the abstract part by an integer below/above it gives sound bounds
        if vertical:
            if safev + max(lo, 0) > maxh + max(-lo, 0):
                return self._store(key, True)
            if safeh + max(-hi, 0) >= maxv + max(hi, 0):
                return self._store(key, False)
        else:
            if safeh + max(-hi, 0) > maxv + max(hi, 0):
                return self._store(key, True)
            if safev + max(lo, 0) >= maxh + max(-lo, 0):
                return self._store(key, False)

        moves = []
        seen = set()
        for i, k in enumerate(bigs):
            if k in seen:
                continue
            seen.add(k)
            for score, sub, val in self._children(comps[k], vertical):
                moves.append((score, i, sub, val))
        if len(seen) > 1:
            moves.sort(key=lambda m: -m[0])
        add = store.add
        wins = self._wins
        for _, i, sub, val in moves:
            nb = bigs[:i] + bigs[i + 1:] + sub if sub else bigs[:i] + bigs[i + 1:]
            if sub:
                nb = tuple(sorted(nb))
            if not wins(nb, add(small, val), not vertical):
                return self._store(key, True)
        for opt in (small.left if vertical else small.right):
            if not wins(bigs, opt, not vertical):
                return self._store(key, True)
        return self._store(key, False)

    def _store(self, key: tuple, result: bool) -> bool:
        if self.use_tt:
            self.tt[key] = result
        return result


# public surface ---------------------------------------------------------------

# boards at least this large go to the compiled searcher when they can
KERNEL_MIN_CELLS = 24
# thin boards decompose so well that the component search beats the kernel
_THIN = 2


def _as_sum(s) -> SumPosition:
    if isinstance(s, SumPosition):
        return s
    if isinstance(s, (Position, Game)):
        return SumPosition.of(s)
    return SumPosition.of(*s)


def value_of_position(p: Position, max_cells: int = 40,
                      node_budget: Optional[int] = None,
                      store: Optional[GameStore] = None) -> Game:
    """Canonical value of ``p``.

    Raises :class:`ResourceError` when ``p`` has more than ``max_cells``
    empty cells or the search expands more than ``node_budget`` positions.
    """
    return ValueSolver(store, max_cells=max_cells, node_budget=node_budget).value_of_position(p)


def _packed_board(s: SumPosition, store: GameStore):
    """Lay a sum out as one masked board, or return None.

    Parts sit side by side, separated by a blocked column.  An integer
    abstract part ``k`` becomes ``|k|`` isolated dominoes usable by one
    player only: 2x1 columns for Vertical, 1x2 strips for Horizontal.
    Anything else cannot be drawn and is left to the component search.
    """
    from ._kernel import MAX_SIDE

    total = store.sum(s.abstract_parts)
    if total.number is None or not total.number.is_integer():
        return None
    k = total.number.floor()
    blocks = [p.rows() for p in s.parts]
    widths = [p.width for p in s.parts]
    if k > 0:
        blocks.append((sum(1 << (2 * i) for i in range(k)),) * 2)
        widths.append(2 * k - 1)
    elif k < 0:
        blocks.append((sum(3 << (3 * i) for i in range(-k)),))
        widths.append(3 * -k - 1)
    h = max(len(b) for b in blocks)
    w = sum(widths) + len(widths) - 1
    if h > MAX_SIDE or w > MAX_SIDE:
        return None
    rows = [0] * h
    x = 0
    for b, bw in zip(blocks, widths):
        for r, bits in enumerate(b):
            rows[r] |= bits << x
        x += bw + 1
    return h, w, rows


def _kernel_first_wins(h: int, w: int, rows, player: Player, node_budget: int,
                       timeout: Optional[float], searcher=None) -> bool:
    from ._kernel import ABORT, WIN, BoardSearch

    bs = searcher or BoardSearch(h, w)
    vertical = player is Player.V
    if timeout is None:
        res = bs.first_player_wins(rows, vertical, node_budget)
    else:
        # the compiled search cannot watch the clock, so run it in slices;
        # the transposition table keeps earlier work
        deadline = time.monotonic() + timeout
        spent, step = 0, 1 << 20
        while True:
            res = bs.first_player_wins(rows, vertical, min(step, node_budget - spent))
            spent += bs.nodes
            if res != ABORT or spent >= node_budget or time.monotonic() > deadline:
                break
            step *= 2
    if res == ABORT:
        raise ResourceError(f"search for {h}x{w} with {player} to move ran out of budget")
    return res == WIN


class _Engine:
    """Picks the compiled searcher or the component search for a sum."""

    def __init__(self, node_budget: int, timeout: Optional[float], store: Optional[GameStore]):
        self.store = store or default_store
        self.node_budget = node_budget
        self.timeout = timeout
        self.py = None
        self.kernel = None
        self.board = None

    def prepare(self, s: SumPosition):
        cells = sum(p.empty_cells() for p in s.parts)
        thin = all(min(p.height, p.width) <= _THIN for p in s.parts)
        if cells >= KERNEL_MIN_CELLS and not thin:
            self.board = _packed_board(s, self.store)
        if self.board is None:
            self.py = OutcomeSolver(self.store, value_cells=16,
                                    node_budget=self.node_budget, timeout=self.timeout)
        return self

    def first_wins(self, s: SumPosition, player: Player) -> bool:
        if self.board is None:
            return self.py.first_player_wins(s, player)
        from ._kernel import BoardSearch

        h, w, rows = self.board
        if self.kernel is None:
            self.kernel = BoardSearch(h, w)
        return _kernel_first_wins(h, w, rows, player, self.node_budget, self.timeout, self.kernel)


def first_player_wins(s, player: Player, node_budget: int = 10 ** 9,
                      timeout: Optional[float] = None,
                      store: Optional[GameStore] = None) -> bool:
    """Whether ``player`` wins the sum ``s`` when moving first."""
    s = _as_sum(s)
    return _Engine(node_budget, timeout, store).prepare(s).first_wins(s, player)


def outcome_class(s, node_budget: int = 10 ** 9, timeout: Optional[float] = None,
                  store: Optional[GameStore] = None) -> Outcome:
    """Outcome class of a position or disjunctive sum, decided by search.

    ``s`` may be a :class:`SumPosition`, a single Position or Game, or a
    sequence of them.  Exhausting the node budget or the timeout (seconds,
    per search) raises :class:`ResourceError`.
    """
    s = _as_sum(s)
    eng = _Engine(node_budget, timeout, store).prepare(s)
    v_first = eng.first_wins(s, Player.V)
    h_first = eng.first_wins(s, Player.H)
    if v_first and h_first:
        return Outcome.FIRST
    if v_first:
        return Outcome.V
    if h_first:
        return Outcome.H
    return Outcome.SECOND


def prove_relation(s, bound: Game, rel: str, node_budget: int = 10 ** 9,
                   timeout: Optional[float] = None,
                   store: Optional[GameStore] = None) -> bool:
    """Decide ``s <= bound`` (``rel="le"``) or ``s >= bound`` (``rel="ge"``).

    ``s <= b`` holds exactly when Vertical, moving first on ``s - b``,
    loses; ``s >= b`` when Horizontal moving first loses.  Only that one
    search is run.
    """
    if rel in ("le", "<="):
        player = Player.V
    elif rel in ("ge", ">="):
        player = Player.H
    else:
        raise ValueError(f"relation must be 'le' or 'ge', not {rel!r}")
    st = store or default_store
    s = _as_sum(s)
    diff = SumPosition(list(s.parts), list(s.abstract_parts) + [st.neg(bound)])
    return not first_player_wins(diff, player, node_budget, timeout, st)


_rect_cache: dict[tuple[int, int], Outcome] = {}


def solve_rect_outcome(m: int, n: int, node_budget: int = 10 ** 9,
                       timeout: Optional[float] = None) -> Outcome:
    """Outcome class of the empty ``m`` x ``n`` board (``m`` rows).

    Single lines are decided by counting.  Boards of height or width two
    use the component search with one solver shared across calls, since
    their positions fall apart into small pieces; everything else goes to
    the compiled searcher.  Results are cached per process.
    """
    if m < 1 or n < 1:
        raise ValueError(f"bad board size {m}x{n}")
    key = (m, n)
    r = _rect_cache.get(key)
    if r is not None:
        return r
    if m == 1 or n == 1:
        moves = max(m, n) // 2
        r = Outcome.SECOND if moves == 0 else (Outcome.V if n == 1 else Outcome.H)
    elif min(m, n) <= _THIN:
        global _thin_solver
        if _thin_solver is None:
            _thin_solver = OutcomeSolver(value_cells=16)
        _thin_solver.node_budget = _thin_solver.stats.nodes + node_budget
        _thin_solver.timeout = timeout
        r = _thin_solver.outcome(SumPosition.of(Position(m, n)))
    else:
        from ._kernel import BoardSearch

        bs = BoardSearch(m, n)
        rows = [(1 << n) - 1] * m
        v_first = _kernel_first_wins(m, n, rows, Player.V, node_budget, timeout, bs)
        h_first = _kernel_first_wins(m, n, rows, Player.H, node_budget, timeout, bs)
        r = (Outcome.FIRST if v_first and h_first else Outcome.V if v_first
             else Outcome.H if h_first else Outcome.SECOND)
    _rect_cache[key] = r
    return r


_thin_solver: Optional[OutcomeSolver] = None

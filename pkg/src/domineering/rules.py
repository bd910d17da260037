"""Composition rules for rectangle outcome classes and a fixpoint engine.

A table cell ``(m, n)`` holds an :class:`OutcomeConstraint`, the set of
outcome classes still possible for the ``m`` x ``n`` board.  Rules emit
constraints; the engine intersects them into the table until nothing
changes.  Every shrink is recorded as a :class:`Fact` whose provenance
names the rule and the facts it used, so each cell carries a derivation
chain back to imported or searched facts.

All rules are stated for Horizontal, the player whose dominoes cross
vertical cut lines.  Their Vertical versions come from the transpose
rule: the table always holds ``(m, n)`` and ``(n, m)`` together, and a
horizontal rule applied to row ``n`` is the vertical rule on column ``n``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .cgt import Game, Outcome

V, H, FIRST, SECOND = Outcome.V, Outcome.H, Outcome.FIRST, Outcome.SECOND
_ALL = frozenset(Outcome)
# rendering order inside a code: "1H", "1V", "12", "2H"
_ORDER = (FIRST, SECOND, V, H)
_BY_SYMBOL = {o.value: o for o in Outcome}


class OutcomeConstraint:
    """Nonempty set of outcome classes; the full set means unknown."""

    __slots__ = ("allowed",)

    def __init__(self, allowed: Iterable[Outcome]):
        allowed = frozenset(allowed)
        if not allowed:
            raise ValueError("an outcome constraint cannot be empty")
        object.__setattr__(self, "allowed", allowed)

    def __setattr__(self, name, value):
        raise AttributeError("OutcomeConstraint is immutable")

    @classmethod
    def full(cls) -> "OutcomeConstraint":
        return _FULL

    @classmethod
    def of(cls, *outcomes: Outcome) -> "OutcomeConstraint":
        return cls(outcomes)

    @classmethod
    def parse(cls, code: str) -> "OutcomeConstraint":
        """Read a table code such as ``H``, ``1H``, ``12`` or ``-V``; blank is unknown."""
        text = code.strip()
        if not text or text == "?":
            return _FULL
        if text.startswith("-"):
            if len(text) != 2 or text[1] not in _BY_SYMBOL:
                raise ValueError(f"bad constraint code {code!r}")
            return cls(_ALL - {_BY_SYMBOL[text[1]]})
        try:
            outs = [_BY_SYMBOL[ch] for ch in text]
        except KeyError:
            raise ValueError(f"bad constraint code {code!r}") from None
        if len(set(outs)) != len(outs):
            raise ValueError(f"bad constraint code {code!r}")
        return cls(outs)

    @property
    def code(self) -> str:
        a = self.allowed
        if len(a) == 4:
            return ""
        if len(a) == 3:
            return "-" + next(iter(_ALL - a)).value
        return "".join(o.value for o in _ORDER if o in a)

    @property
    def is_full(self) -> bool:
        return len(self.allowed) == 4

    @property
    def exact(self) -> Optional[Outcome]:
        return next(iter(self.allowed)) if len(self.allowed) == 1 else None

    def swapped(self) -> "OutcomeConstraint":
        return OutcomeConstraint(o.swapped() for o in self.allowed)

    def meet(self, other: "OutcomeConstraint") -> Optional["OutcomeConstraint"]:
        """Intersection, or None when it is empty."""
        both = self.allowed & other.allowed
        return OutcomeConstraint(both) if both else None

    def __le__(self, other: "OutcomeConstraint") -> bool:
        return self.allowed <= other.allowed

    def __contains__(self, o: Outcome) -> bool:
        return o in self.allowed

    def __iter__(self) -> Iterator[Outcome]:
        return (o for o in _ORDER if o in self.allowed)

    def __len__(self) -> int:
        return len(self.allowed)

    def __eq__(self, other) -> bool:
        return isinstance(other, OutcomeConstraint) and self.allowed == other.allowed

    def __hash__(self) -> int:
        return hash(self.allowed)

    def __repr__(self) -> str:
        return f"OutcomeConstraint({self.code or 'full'})"

    def __str__(self) -> str:
        return self.code or "?"


_FULL = OutcomeConstraint(_ALL)
ONLY_H = OutcomeConstraint.of(H)
H_OR_SECOND = OutcomeConstraint.of(H, SECOND)
H_OR_FIRST = OutcomeConstraint.of(H, FIRST)
V_OR_FIRST = OutcomeConstraint.of(V, FIRST)
FIRST_OR_SECOND = OutcomeConstraint.of(FIRST, SECOND)


# facts ----------------------------------------------------------------------

IMPORTED = "imported"
SEARCH = "search"
RULE = "rule"


@dataclass(frozen=True)
class Provenance:
    """Where a fact came from.

    ``source`` is the citation tag for imported facts, the engine name for
    search facts and the rule name for derived ones.  ``premises`` are
    ids of facts in the same table.
    """

    kind: str
    source: str
    premises: tuple[int, ...] = ()
    note: str = ""

    @classmethod
    def imported(cls, tag: str, note: str = "") -> "Provenance":
        return cls(IMPORTED, tag, (), note)

    @classmethod
    def search(cls, engine: str = "search", note: str = "") -> "Provenance":
        return cls(SEARCH, engine, (), note)

    @classmethod
    def rule(cls, name: str, premises: Sequence[int] = (), note: str = "") -> "Provenance":
        return cls(RULE, name, tuple(premises), note)

    def __str__(self) -> str:
        if self.kind == RULE:
            s = f"rule {self.source}"
            if self.premises:
                s += " from " + ",".join(f"#{p}" for p in self.premises)
        else:
            s = f"{self.kind} {self.source}"
        return f"{s} [{self.note}]" if self.note else s


@dataclass(frozen=True)
class Fact:
    m: int
    n: int
    constraint: OutcomeConstraint
    provenance: Provenance
    fid: int = -1

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"bad cell ({self.m},{self.n})")

    @property
    def cell(self) -> tuple[int, int]:
        return self.m, self.n

    def __str__(self) -> str:
        tag = f"#{self.fid} " if self.fid >= 0 else ""
        return f"{tag}({self.m},{self.n}) {self.constraint}: {self.provenance}"


@dataclass(frozen=True)
class ValueFact:
    """A known value, or a one-sided bound, for the ``m`` x ``n`` board.

    ``relation`` is ``"eq"``, ``"le"`` (board <= value) or ``"ge"``.
    """

    m: int
    n: int
    value: Game
    relation: str
    provenance: Provenance
    fid: int = -1

    def __post_init__(self):
        if self.relation not in ("eq", "le", "ge"):
            raise ValueError(f"bad relation {self.relation!r}")

    @property
    def is_upper(self) -> bool:
        return self.relation in ("eq", "le")

    def __str__(self) -> str:
        from .cgt import format_game

        sym = {"eq": "=", "le": "<=", "ge": ">="}[self.relation]
        tag = f"#{self.fid} " if self.fid >= 0 else ""
        return f"{tag}|G({self.m},{self.n})| {sym} {format_game(self.value)}: {self.provenance}"


def transpose_value(vf: ValueFact) -> ValueFact:
    """The same fact about the transposed board (players swap, value negates)."""
    rel = {"eq": "eq", "le": "ge", "ge": "le"}[vf.relation]
    prov = Provenance.rule("transpose", (vf.fid,) if vf.fid >= 0 else ())
    return ValueFact(vf.n, vf.m, vf.value.store.neg(vf.value), rel, prov)


class ContradictionError(ValueError):
    """Two facts about one cell leave no outcome class possible."""

    def __init__(self, cell: tuple[int, int], existing: Fact, incoming: Fact):
        self.cell = cell
        self.existing = existing
        self.incoming = incoming
        super().__init__(f"CONTRADICTION at {cell}: {existing} vs {incoming}")


class FactTable:
    """Outcome constraints over ``max_m`` x ``max_n`` and its transpose.

    ``facts`` lists every accepted fact by id; ``cell_fact`` maps each
    cell to the fact that states its current constraint.
    """

    def __init__(self, max_m: int, max_n: int):
        if max_m < 1 or max_n < 1:
            raise ValueError("table bounds must be positive")
        self.max_m = max_m
        self.max_n = max_n
        self.facts: list = []
        self.cell_fact: dict[tuple[int, int], Fact] = {}
        self.values: list[ValueFact] = []

    # region ---------------------------------------------------------------

    def in_region(self, m: int, n: int) -> bool:
        return ((1 <= m <= self.max_m and 1 <= n <= self.max_n)
                or (1 <= n <= self.max_m and 1 <= m <= self.max_n))

    def row_widths(self, m: int) -> list[int]:
        top = max(self.max_n if m <= self.max_m else 0,
                  self.max_m if m <= self.max_n else 0)
        return list(range(1, top + 1))

    @property
    def heights(self) -> range:
        return range(1, max(self.max_m, self.max_n) + 1)

    # access ---------------------------------------------------------------

    def constraint(self, m: int, n: int) -> OutcomeConstraint:
        f = self.cell_fact.get((m, n))
        return f.constraint if f is not None else _FULL

    def fact(self, m: int, n: int) -> Optional[Fact]:
        return self.cell_fact.get((m, n))

    def __getitem__(self, cell: tuple[int, int]) -> OutcomeConstraint:
        return self.constraint(*cell)

    def __iter__(self) -> Iterator[Fact]:
        return iter(sorted(self.cell_fact.values(), key=lambda f: f.cell))

    def __len__(self) -> int:
        return len(self.cell_fact)

    def by_id(self, fid: int):
        return self.facts[fid]

    # updates --------------------------------------------------------------

    def _accept(self, f):
        f = replace(f, fid=len(self.facts))
        self.facts.append(f)
        return f

    def add(self, fact: Fact) -> Optional[Fact]:
        """Intersect ``fact`` into its cell.

        Returns the fact now stating the cell, or None when nothing
        shrank (including facts outside the region).  Raises
        :class:`ContradictionError` when the intersection is empty.
        """
        cell = fact.cell
        if not self.in_region(*cell):
            return None
        cur = self.cell_fact.get(cell)
        if cur is None:
            if fact.constraint.is_full:
                return None
            new = self._accept(fact)
        else:
            both = cur.constraint.meet(fact.constraint)
            if both is None:
                raise ContradictionError(cell, cur, fact)
            if both == cur.constraint:
                return None
            new = self._accept(fact)
            if both != fact.constraint:
                new = self._accept(Fact(cell[0], cell[1], both,
                                        Provenance.rule("intersection", (cur.fid, new.fid))))
        self.cell_fact[cell] = new
        return new

    def add_value(self, vf: ValueFact) -> ValueFact:
        vf = self._accept(vf)
        self.values.append(vf)
        return vf

    def copy(self, max_m: Optional[int] = None, max_n: Optional[int] = None) -> "FactTable":
        """A copy over the given region (default: the same one).

        Fact ids are kept, so provenance stays valid; cells outside the
        new region are dropped from ``cell_fact`` but their facts remain
        in the history.
        """
        t = FactTable(max_m or self.max_m, max_n or self.max_n)
        t.facts = list(self.facts)
        t.values = list(self.values)
        t.cell_fact = {c: f for c, f in self.cell_fact.items() if t.in_region(*c)}
        return t

    def chain(self, m: int, n: int) -> list:
        """Facts behind the current constraint of a cell, premises first."""
        f = self.cell_fact.get((m, n))
        if f is None:
            return []
        out, seen = [], set()

        def visit(x):
            if x.fid in seen:
                return
            seen.add(x.fid)
            for p in x.provenance.premises:
                visit(self.facts[p])
            out.append(x)

        visit(f)
        return out


# individual rules -------------------------------------------------------------

def one_hand_tied(c1: OutcomeConstraint, c2: OutcomeConstraint) -> OutcomeConstraint:
    """Constraint for width ``n1 + n2`` from the constraints for ``n1`` and ``n2``.

    Horizontal may refuse to cross the cut, so the wide board is at most
    the sum of the narrow ones.  One side must be exactly H.
    """
    for a, b in ((c1, c2), (c2, c1)):
        if a == ONLY_H:
            if b <= H_OR_SECOND:
                return ONLY_H
            if V not in b:
                return H_OR_FIRST
    return _FULL


def double_width(n: int, k: int) -> Fact:
    """The ``n`` x ``2nk`` board is a Horizontal win."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    return Fact(n, 2 * n * k, ONLY_H, Provenance.rule("double_width", (), f"{2 * n * k} = 2*{n}*{k}"))


def double_width_weak(n: int, k: int) -> Fact:
    """The older, weaker form: ``n`` x ``2nk`` is H or 2 (mirror strategy only)."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    return Fact(n, 2 * n * k, H_OR_SECOND,
                Provenance.rule("double_width_weak", (), f"{2 * n * k} = 2*{n}*{k}"))


def representation(j: int, k: int, w: int) -> Optional[tuple[int, int]]:
    """``(a, b)`` with ``w = a*j + b*k``, ``a >= 1``, ``b >= 0``, or None."""
    for a in range(1, w // j + 1):
        rest = w - a * j
        if rest % k == 0:
            return a, rest // k
    return None


def semigroup(m: int, j: int, k: int, w: int) -> OutcomeConstraint:
    """H for widths ``a*j + b*k`` with ``a >= 1``.

    The caller vouches that width ``j`` is H and width ``k`` is H or 2 at
    height ``m``.
    """
    return ONLY_H if representation(j, k, w) is not None else _FULL


def center_split_height2(k: int, c: OutcomeConstraint) -> OutcomeConstraint:
    """Constraint for the ``2`` x ``2k+1`` board when ``2`` x ``k`` is a second-player win.

    Vertical opens in the middle column and leaves two copies of the
    ``2`` x ``k`` board, a second-player win for Horizontal to move.
    """
    if k < 1:
        raise ValueError("k must be positive")
    return V_OR_FIRST if c <= OutcomeConstraint.of(SECOND) else _FULL


def transpose_rule(f: Fact) -> Fact:
    prem = (f.fid,) if f.fid >= 0 else ()
    return Fact(f.n, f.m, f.constraint.swapped(), Provenance.rule("transpose", prem))


def bound_constraint(outcome_of_bound: Outcome) -> OutcomeConstraint:
    """What ``board <= S`` says about the board, given the outcome class of ``S``."""
    return {H: ONLY_H, SECOND: H_OR_SECOND, FIRST: H_OR_FIRST, V: _FULL}[outcome_of_bound]


# engine -----------------------------------------------------------------------

RowRule = Callable[[FactTable, int, dict], Iterable[Fact]]


def _rule_double_width(t: FactTable, m: int, ctx: dict) -> Iterator[Fact]:
    for w in t.row_widths(m)[2 * m - 1::2 * m]:
        yield double_width(m, w // (2 * m))


def _rule_double_width_weak(t: FactTable, m: int, ctx: dict) -> Iterator[Fact]:
    for w in t.row_widths(m)[2 * m - 1::2 * m]:
        yield double_width_weak(m, w // (2 * m))


def _rule_one_hand_tied(t: FactTable, m: int, ctx: dict) -> Iterator[Fact]:
    widths = t.row_widths(m)
    top = widths[-1] if widths else 0
    cons = {w: t.constraint(m, w) for w in widths}
    hs = [w for w in widths if cons[w] == ONLY_H]
    for a in hs:
        fa = t.fact(m, a).fid
        for b in range(1, top - a + 1):
            n = a + b
            r = one_hand_tied(ONLY_H, cons[b])
            if r.is_full or cons[n] <= r:
                continue
            fb = t.fact(m, b)
            yield Fact(m, n, r, Provenance.rule("one_hand_tied", (fa, fb.fid), f"{n} = {a} + {b}"))
            cons[n] = t.constraint(m, n)


def _rule_semigroup(t: FactTable, m: int, ctx: dict) -> Iterator[Fact]:
    widths = t.row_widths(m)
    top = widths[-1] if widths else 0
    cons = {w: t.constraint(m, w) for w in widths}
    hs = [w for w in widths if cons[w] == ONLY_H]
    gens = [w for w in widths if cons[w] <= H_OR_SECOND]
    if not hs:
        return
    # how[x] = a generator ending one way of writing x as a sum of generators
    how = [0] * (top + 1)
    reach = [False] * (top + 1)
    reach[0] = True
    for x in range(1, top + 1):
        for g in gens:
            if g > x:
                break
            if reach[x - g]:
                reach[x], how[x] = True, g
                break
    for n in widths:
        if cons[n] == ONLY_H:
            continue
        for j in hs:
            if j <= n and reach[n - j]:
                parts, x = [j], n - j
                while x:
                    parts.append(how[x])
                    x -= how[x]
                prem = tuple(t.fact(m, p).fid for p in sorted(set(parts)))
                note = f"{n} = " + " + ".join(str(p) for p in sorted(parts, reverse=True))
                yield Fact(m, n, ONLY_H, Provenance.rule("semigroup", prem, note))
                break


def _rule_center_split(t: FactTable, m: int, ctx: dict) -> Iterator[Fact]:
    if m != 2:
        return
    widths = t.row_widths(2)
    for k in widths:
        n = 2 * k + 1
        if n > widths[-1]:
            break
        c = t.constraint(2, k)
        r = center_split_height2(k, c)
        if not r.is_full and not t.constraint(2, n) <= r:
            yield Fact(2, n, r, Provenance.rule("center_split", (t.fact(2, k).fid,), f"{n} = {k} + 1 + {k}"))


def _rule_value_sum(t: FactTable, m: int, ctx: dict) -> Iterator[Fact]:
    """Upper bounds from sums of known values along a row.

    Uses ``c`` copies of one value fact plus at most one other, which
    covers the decompositions used in practice while staying linear in
    the row length.
    """
    from .cgt import format_game

    done = ctx.setdefault("value_sum_rows", set())
    if m in done:
        return
    done.add(m)
    ups = [vf for vf in ctx["values"] if vf.m == m and vf.is_upper]
    if not ups:
        return
    store = ups[0].value.store
    widths = t.row_widths(m)
    top = widths[-1] if widths else 0
    found = []
    for base in ups:
        acc = store.zero
        extras = [None] + [e for e in ups if e is not base]
        for c in range(1, top // base.n + 1):
            acc = store.add(acc, base.value)
            for e in extras:
                width = c * base.n + (e.n if e else 0)
                if width > top:
                    continue
                total = store.add(acc, e.value) if e else acc
                out = store.outcome(total)
                r = bound_constraint(out)
                if r.is_full:
                    continue
                terms = f"{c}*({m},{base.n})" if c > 1 else f"({m},{base.n})"
                if e is not None:
                    terms += f" + ({m},{e.n})"
                rel = {H: "LESS than", SECOND: "EQUAL to", FIRST: "CONFUSED with"}[out]
                note = f"({m},{width}) <= {terms} = {format_game(total)}, {rel} 0"
                prem = (base.fid,) + ((e.fid,) if e else ())
                found.append((len(r), width, Fact(m, width, r, Provenance.rule("value_sum", prem, note))))
    # strongest first, so weaker duplicates change nothing
    found.sort(key=lambda x: (x[1], x[0]))
    for _, _, f in found:
        yield f


RULES: dict[str, RowRule] = {
    "double_width": _rule_double_width,
    "double_width_weak": _rule_double_width_weak,
    "one_hand_tied": _rule_one_hand_tied,
    "semigroup": _rule_semigroup,
    "center_split": _rule_center_split,
    "value_sum": _rule_value_sum,
}
DEFAULT_RULES = ("double_width", "one_hand_tied", "semigroup", "center_split", "value_sum")


def propagate(base: FactTable, max_m: Optional[int] = None, max_n: Optional[int] = None,
              rules: Sequence[str] = DEFAULT_RULES,
              rng: Optional[random.Random] = None) -> FactTable:
    """Apply ``rules`` and the transpose rule to a fixpoint.

    Returns a new table over ``max_m`` x ``max_n`` (default: the base
    table's bounds); input facts outside that region are dropped.  With
    ``rng`` the order of rows and rules is shuffled every round, which
    must not change the resulting constraints.
    """
    t = base.copy(max_m, max_n)
    for vf in list(t.values):
        if vf.provenance.source != "transpose":
            t.add_value(transpose_value(vf))
    ctx = {"values": list(t.values)}
    for f in list(t.cell_fact.values()):
        t.add(transpose_rule(f))
    # a square is its own transpose, so its class is symmetric in V and H
    for m in t.heights:
        if t.in_region(m, m):
            t.add(Fact(m, m, FIRST_OR_SECOND, Provenance.rule("transpose", (), "square board")))
    dirty = set(t.heights)
    funcs = [RULES[r] for r in rules]
    while dirty:
        order = sorted(dirty)
        dirty = set()
        if rng is not None:
            rng.shuffle(order)
        for m in order:
            fs = list(funcs)
            if rng is not None:
                rng.shuffle(fs)
            for rule in fs:
                for f in rule(t, m, ctx):
                    new = t.add(f)
                    if new is None:
                        continue
                    dirty.add(new.m)
                    tr = t.add(transpose_rule(new))
                    if tr is not None:
                        dirty.add(tr.m)
    return t


def constraint_grid(t: FactTable, max_m: int, max_n: int) -> list[list[OutcomeConstraint]]:
    return [[t.constraint(m, n) for n in range(1, max_n + 1)] for m in range(1, max_m + 1)]

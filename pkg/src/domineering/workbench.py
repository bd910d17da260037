"""Facts files, table rendering and the reproduction suites.

Facts files are CSV with the header ``m,n,code,source,note``.  Value
files use ``m,n,relation,value,source,note`` where ``relation`` is
``eq``, ``le`` or ``ge`` and ``value`` is in slash notation.  Tables are
TSV grids: the first row lists widths, the first column heights, and an
unknown cell is blank.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Optional, Union

from .board import Player, rect
from .cgt import (
    GameStore,
    Outcome,
    Relation,
    ResourceError,
    default_store,
    format_game,
    parse_game,
)
from .rules import (
    ContradictionError,
    Fact,
    FactTable,
    OutcomeConstraint,
    Provenance,
    ValueFact,
    propagate,
)

FACT_CODES = frozenset({"V", "H", "1", "2", "1H", "1V", "12", "2H", "-V", "-H"})
PathLike = Union[str, Path]


class FactsFileError(ValueError):
    pass


def data_path(name: str) -> Path:
    """Path of a file shipped in ``domineering/data``."""
    return Path(str(resources.files("domineering") / "data" / name))


# loading ----------------------------------------------------------------------

def _rows(path: PathLike, header: list[str]):
    text = Path(path).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(reader, 1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if lineno == 1 and [c.strip() for c in row[:len(header)]] == header:
            continue
        if len(row) < len(header) - 1 or len(row) > len(header):
            raise FactsFileError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        row = [c.strip() for c in row] + [""] * (len(header) - len(row))
        yield lineno, row


def _cell(path, lineno, m: str, n: str) -> tuple[int, int]:
    try:
        cell = int(m), int(n)
    except ValueError:
        raise FactsFileError(f"{path}:{lineno}: board size must be two integers") from None
    if cell[0] < 1 or cell[1] < 1:
        raise FactsFileError(f"{path}:{lineno}: board size must be positive")
    return cell


def read_facts(path: PathLike) -> list[Fact]:
    """Facts of a CSV file, with imported provenance, in file order."""
    out, seen = [], {}
    for lineno, (m, n, code, source, note) in _rows(path, ["m", "n", "code", "source", "note"]):
        cell = _cell(path, lineno, m, n)
        if code not in FACT_CODES:
            raise FactsFileError(f"{path}:{lineno}: bad constraint code {code!r}")
        if cell in seen:
            raise FactsFileError(f"{path}:{lineno}: duplicate cell {cell} (first on line {seen[cell]})")
        seen[cell] = lineno
        out.append(Fact(cell[0], cell[1], OutcomeConstraint.parse(code),
                        Provenance.imported(source or "unknown", note)))
    return out


def read_values(path: PathLike, store: Optional[GameStore] = None) -> list[ValueFact]:
    store = store or default_store
    out = []
    for lineno, (m, n, rel, text, source, note) in _rows(
            path, ["m", "n", "relation", "value", "source", "note"]):
        cell = _cell(path, lineno, m, n)
        if rel not in ("eq", "le", "ge"):
            raise FactsFileError(f"{path}:{lineno}: relation must be eq, le or ge")
        try:
            g = parse_game(text, store)
        except ValueError as e:
            raise FactsFileError(f"{path}:{lineno}: {e}") from None
        out.append(ValueFact(cell[0], cell[1], g, rel, Provenance.imported(source or "unknown", note)))
    return out


def load_facts(path: PathLike, max_m: Optional[int] = None, max_n: Optional[int] = None,
               values: Optional[PathLike] = None) -> FactTable:
    """A table holding the facts of ``path`` (and value facts of ``values``).

    The region defaults to a square large enough for every listed cell.
    Facts that contradict each other raise :class:`ContradictionError`.
    """
    facts = read_facts(path)
    vals = read_values(values) if values is not None else []
    size = max([max(f.m, f.n) for f in facts] + [max(v.m, v.n) for v in vals] + [1])
    t = FactTable(max_m or size, max_n or size)
    for f in facts:
        t.add(f)
    for v in vals:
        t.add_value(v)
    return t


def shipped_table(max_m: int = 16, max_n: int = 128, facts: str = "base_facts.csv") -> FactTable:
    """The shipped base facts and value facts over the given region."""
    t = load_facts(data_path(facts), values=data_path("values.csv"))
    return t.copy(max_m, max_n)


# expected table ----------------------------------------------------------------

def read_grid(path: PathLike) -> dict[tuple[int, int], OutcomeConstraint]:
    """Non-blank cells of a TSV grid."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        return {}
    widths = [int(x) for x in lines[0].split("\t")[1:]]
    out = {}
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        cols = line.split("\t")
        try:
            m = int(cols[0])
        except ValueError:
            raise FactsFileError(f"{path}:{lineno}: row label must be an integer") from None
        for n, code in zip(widths, cols[1:]):
            if code.strip():
                try:
                    out[(m, n)] = OutcomeConstraint.parse(code)
                except ValueError as e:
                    raise FactsFileError(f"{path}:{lineno}: {e}") from None
    return out


def expected_table(max_m: int = 31, max_n: int = 128) -> dict[tuple[int, int], OutcomeConstraint]:
    """The published table of known outcome classes, with its stated extensions.

    Beyond width 31: heights 1-5, 7, 9 and 11 are H; heights 6 and 13 are
    H at even and 1H at odd widths; height 8 follows its own listed row up
    to width 54 and is H at even widths after that.  Heights above 31 are
    the transposes.
    """
    base = read_grid(data_path("published_table.tsv"))
    base.update(read_grid(data_path("published_table_row8.tsv")))
    h = OutcomeConstraint.parse("H")
    h1 = OutcomeConstraint.parse("1H")
    out = {}
    for m in range(1, max(max_m, max_n) + 1):
        for n in range(1, max(max_m, max_n) + 1):
            if not ((m <= max_m and n <= max_n) or (n <= max_m and m <= max_n)):
                continue
            c = _expected_cell(base, m, n, h, h1)
            if c is None and m > 31 >= n:
                c = _expected_cell(base, n, m, h, h1)
                c = c.swapped() if c is not None else None
            if c is not None:
                out[(m, n)] = c
    return out


def _expected_cell(base, m, n, h, h1):
    if (m, n) in base:
        return base[(m, n)]
    if m > 31 or n <= 31:
        return None
    if m in (1, 2, 3, 4, 5, 7, 9, 11):
        return h
    if m in (6, 13):
        return h if n % 2 == 0 else h1
    if m == 8 and n > 54 and n % 2 == 0:
        return h
    return None


# rendering ----------------------------------------------------------------------

@dataclass
class Mismatch:
    cell: tuple[int, int]
    got: OutcomeConstraint
    expected: OutcomeConstraint

    @property
    def kind(self) -> str:
        """``conflict`` (disjoint), ``weaker`` (expected not derived),
        ``stronger`` (more than expected) or ``incomparable``."""
        if self.got.meet(self.expected) is None:
            return "conflict"
        if self.got <= self.expected:
            return "stronger"
        if self.expected <= self.got:
            return "weaker"
        return "incomparable"

    def __str__(self) -> str:
        return f"{self.cell}\tgot {self.got}\texpected {self.expected}\t{self.kind}"


@dataclass
class TableReport:
    tsv: str
    provenance: str
    mismatches: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        return [x for x in self.mismatches if x.kind != "stronger"]


def render_table(t: FactTable, max_m: int, max_n: int,
                 expected: Optional[dict] = None) -> TableReport:
    """TSV grid of codes, a provenance sidecar and the mismatches against ``expected``.

    The sidecar has one line per known cell naming the fact that states
    it, then every fact those cells depend on, so each derivation chain
    can be followed back to imported or searched facts.
    """
    lines = ["m\\n\t" + "\t".join(str(n) for n in range(1, max_n + 1))]
    cells = []
    for m in range(1, max_m + 1):
        row = []
        for n in range(1, max_n + 1):
            c = t.constraint(m, n)
            row.append(c.code)
            if not c.is_full:
                cells.append(t.fact(m, n))
        lines.append(f"{m}\t" + "\t".join(row))
    tsv = "\n".join(lines) + "\n"

    side = ["# cell\tcode\tfact"]
    needed = set()
    for f in cells:
        side.append(f"{f.m}\t{f.n}\t{f.constraint.code}\t#{f.fid}")
        needed.update(x.fid for x in t.chain(f.m, f.n))
    side.append("# fact\tcell\tcode\tprovenance")
    for fid in sorted(needed):
        x = t.facts[fid]
        if isinstance(x, ValueFact):
            side.append(f"#{fid}\t({x.m},{x.n})\tvalue\t{x}")
        else:
            side.append(f"#{fid}\t({x.m},{x.n})\t{x.constraint.code}\t{x.provenance}")
    provenance = "\n".join(side) + "\n"

    mismatches = []
    if expected is not None:
        for (m, n), e in sorted(expected.items()):
            if m <= max_m and n <= max_n:
                got = t.constraint(m, n)
                if got != e:
                    mismatches.append(Mismatch((m, n), got, e))
    return TableReport(tsv, provenance, mismatches)


# search facts ---------------------------------------------------------------------

def search_fact(m: int, n: int, first: Optional[Player] = None,
                node_budget: int = 10 ** 9) -> Fact:
    """A fact about the empty ``m`` x ``n`` board established by search.

    With ``first`` only that player's first-move question is searched,
    giving a two-class constraint.
    """
    from .solver import first_player_wins, solve_rect_outcome

    if first is None:
        o = solve_rect_outcome(m, n, node_budget=node_budget)
        return Fact(m, n, OutcomeConstraint.of(o), Provenance.search("solve_rect_outcome"))
    wins = first_player_wins(rect(m, n), first, node_budget=node_budget)
    if first is Player.V:
        c = OutcomeConstraint.parse("1V" if wins else "2H")
    else:
        c = OutcomeConstraint.parse("1H" if wins else "2V")
    note = f"{first} moving first {'wins' if wins else 'loses'}"
    return Fact(m, n, c, Provenance.search("first_player_wins", note))


# suites ----------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def __str__(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name}  ({self.seconds:.1f}s)  {self.detail}".rstrip()


@dataclass
class Report:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def check(self, name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
        start = time.monotonic()
        try:
            ok, detail = fn()
        except (ResourceError, ContradictionError) as e:
            ok, detail = False, f"{type(e).__name__}: {e}"
        r = CheckResult(name, bool(ok), detail, time.monotonic() - start)
        self.results.append(r)
        return r

    def __str__(self) -> str:
        n = sum(r.passed for r in self.results)
        return "\n".join(map(str, self.results)) + f"\n{n}/{len(self.results)} passed\n"


VALUE_GOLDENS = {
    (11, 2): "{1|||1/2|-1||-3/2|-7/2}",
    (15, 2): "{3|3/2||1|-1/2|||-1}",
    (19, 2): "{3/2|||1|-1/2||-1|-5/2}",
}
MULTIPLE_GOLDENS = [
    (7, (11, 2), "{2|0||-1/2|-2|||-5/2}", Relation.LESS),
    (3, (15, 2), "{3/2|||1|-1/2||-1|-5/2}", Relation.CONFUSED),
    (5, (15, 2), "{7/2|2||3/2|0|||-1/2}", Relation.CONFUSED),
    (7, (15, 2), "{2|||3/2|0||-1/2|-2}", Relation.CONFUSED),
    (9, (15, 2), "{4|5/2||2|1/2|||0}", Relation.CONFUSED),
    (3, (19, 2), "{4|5/2||2|1/2|||0}", None),
    (3, (9, 2), "{1|-1||-3/2|-3}", None),
]


def _value_checks(report: Report, store: GameStore) -> dict:
    from .solver import value_of_position

    vals = {}
    for (m, n), text in VALUE_GOLDENS.items():
        def run(m=m, n=n, text=text):
            g = value_of_position(rect(m, n), store=store)
            vals[(m, n)] = g
            return format_game(g) == text, format_game(g)
        report.check(f"value {m}x{n} = {text}", run)
    vals[(9, 2)] = value_of_position(rect(9, 2), store=store)
    for k, cell, text, rel in MULTIPLE_GOLDENS:
        def run(k=k, cell=cell, text=text, rel=rel):
            if cell not in vals:
                return False, "base value unavailable"
            g = store.multiply_int(k, vals[cell])
            ok = format_game(g) == text
            got = store.compare(g, store.zero)
            if rel is not None:
                ok = ok and got is rel
            return ok, f"{format_game(g)} {got.name} 0"
        report.check(f"{k}*|G({cell[0]},{cell[1]})| = {text}", run)

    def ident():
        g15, g19 = vals.get((15, 2)), vals.get((19, 2))
        if g15 is None or g19 is None:
            return False, "base value unavailable"
        a = store.multiply_int(3, g15) is g19
        b = store.multiply_int(3, g19) is store.multiply_int(9, g15)
        return a and b, f"3*G15 is G19: {a}; 3*G19 is 9*G15: {b}"
    report.check("handle identities 3*G(15,2) = G(19,2), 3*G(19,2) = 9*G(15,2)", ident)
    return vals


RESULTS_ITEMS = {
    1: ("6xn is 1H for n > 29", lambda m, n: m == 6 and n > 29, "1H"),
    2: ("8xn is H for n in {26,30,36,40,42,46,48,50,52} and even n > 54",
        lambda m, n: m == 8 and (n in (26, 30, 36, 40, 42, 46, 48, 50, 52) or (n > 54 and n % 2 == 0)), "H"),
    3: ("8xn is 1H for n in {28,34,38,44,54}", lambda m, n: m == 8 and n in (28, 34, 38, 44, 54), "1H"),
    4: ("9xn is H for n in {13,...,21} odd", lambda m, n: m == 9 and n in (13, 15, 17, 19, 21), "H"),
    5: ("11xn is H for n in {14,18} and odd n > 31",
        lambda m, n: m == 11 and (n in (14, 18) or (n > 31 and n % 2 == 1)), "H"),
    6: ("15xn is 1H for n in {6,10,14,18}", lambda m, n: m == 15 and n in (6, 10, 14, 18), "1H"),
    7: ("19x6 is 1", lambda m, n: (m, n) == (19, 6), "1"),
    8: ("n x 2kn is H", lambda m, n: n % (2 * m) == 0, "H"),
}


def results_items(t: FactTable) -> list[tuple[int, str, bool, str]]:
    """Check the eight derived results against a propagated table.

    An item holds when every cell it names is at least as tight as the
    stated constraint.
    """
    out = []
    for k, (desc, sel, code) in RESULTS_ITEMS.items():
        want = OutcomeConstraint.parse(code)
        cells = [(m, n) for m in t.heights for n in t.row_widths(m) if sel(m, n)]
        bad = [(c, t.constraint(*c).code) for c in cells if not t.constraint(*c) <= want]
        detail = f"{len(cells)} cells" + (f"; not derived: {bad[:5]}" if bad else "")
        out.append((k, desc, bool(cells) and not bad, detail))
    return out


def _rule_chain(t: FactTable, cell) -> set[str]:
    return {f.provenance.source for f in t.chain(*cell)}


def verify_paper(deep: bool = False, store: Optional[GameStore] = None,
                 outcomes: bool = True) -> Report:
    """Run every checkable claim and report pass/fail per item.

    The default run takes a few minutes.  ``deep`` adds the long
    searches: the 4x13 and 6x14 outcomes and the proof that the 9x7
    board is at most 1.
    """
    from .board import from_ascii
    from .solver import prove_relation, solve_rect_outcome, value_of_position

    store = store or default_store
    report = Report()
    _value_checks(report, store)

    if outcomes:
        expected = expected_table(31, 31)
        cases = [(m, n) for m in range(1, 7) for n in range(1, 7)]
        cases += [(5, n) for n in range(7, 11)] + [(7, 7), (2, 13)]
        if deep:
            cases += [(4, 13), (6, 14)]
        for m, n in cases:
            def run(m=m, n=n):
                o = solve_rect_outcome(m, n)
                want = expected[(m, n)].exact
                return o is want, f"search {o}, table {want}"
            report.check(f"outcome {m}x{n}", run)

    t = {}

    def prop():
        t["t"] = propagate(shipped_table(16, 128))
        return True, f"{len(t['t'].facts)} facts, no contradiction"
    report.check("propagate shipped facts over 16x128", prop)
    if "t" in t:
        table = t["t"]
        for k, desc, ok, detail in results_items(table):
            report.results.append(CheckResult(f"results item {k}: {desc}", ok, detail))
        report.check("11x14 is H via the value rule",
                     lambda: (table[(11, 14)].code == "H" and "value_sum" in _rule_chain(table, (11, 14)),
                              str(table.fact(11, 14))))

    def bounds():
        one = store.number(1)
        a = prove_relation(rect(2, 1), one, "le", store=store)
        b = prove_relation(rect(2, 1), one, "ge", store=store)
        return a and b, f"le {a}, ge {b}"
    report.check("2x1 = 1 by prove_relation", bounds)

    def gadget():
        p = from_ascii(data_path("composite_9x7.txt").read_text())
        parts = p.components()
        block = [c for c in parts if (c.height, c.width) == (9, 7) and c.empty_cells() == 63]
        rest = [c for c in parts if c not in block]
        g = store.sum(value_of_position(c, store=store) for c in rest)
        return len(block) == 1 and g == store.number(-1), f"components {[(c.height, c.width) for c in parts]}, gadget {format_game(g)}"
    report.check("composite figure is 9x7 plus a -1 gadget", gadget)

    if deep:
        def deep_proof():
            p = from_ascii(data_path("composite_9x7.txt").read_text())
            r = prove_relation(p, store.zero, "le", store=store)
            return r, f"9x7 + (-1) <= 0: {r}"
        report.check("9x7 <= 1 (composite figure, Vertical first loses)", deep_proof)

    for r in errata_suite().results:
        report.results.append(r)
    return report


def errata_suite(search: bool = True) -> Report:
    """The corrections to earlier tables.

    (a) 2x27 and 6x12 follow from rules, (b) the 4x13 = V transcription
    error contradicts search while the corrected entry yields 4x21 = H,
    (c) the 6x29 = 1H claim does not follow from the shipped facts.
    ``search=False`` skips the one search in (b).
    """
    report = Report()
    base = shipped_table(16, 32)

    def a():
        t = propagate(base)
        c27, c12 = t[(2, 27)], t[(6, 12)]
        r27 = _rule_chain(t, (2, 27))
        # the older mirror-strategy form of the double-width rule only gives H or 2
        weak = propagate(base, rules=("double_width_weak", "one_hand_tied", "center_split"))
        w12 = weak[(6, 12)]
        ok = (c27.code == "1" and {"center_split", "one_hand_tied"} <= r27
              and c12.code == "H" and w12.code == "H")
        return ok, f"2x27 {c27} via {sorted(r27 - {'transpose', 'intersection'})}; 6x12 {c12}, weak rules {w12}"
    report.check("errata: 2x27 and 6x12 are rule-derivable", a)

    def b():
        wrong = load_facts(data_path("erroneous_facts.csv"), values=data_path("values.csv")).copy(16, 32)
        if search:
            f = search_fact(4, 13, Player.V)
        else:
            f = Fact(4, 13, OutcomeConstraint.parse("2H"), Provenance.imported("corrected"))
        try:
            propagate(_with(wrong, f))
            caught = None
        except ContradictionError as e:
            caught = e
        right = propagate(_with(base, f))
        c21 = right[(4, 21)]
        ok = caught is not None and caught.cell in ((4, 13), (13, 4)) and c21.code == "H"
        return ok, f"{caught}; corrected 4x21 {c21}"
    report.check("errata: 4x13 = V contradicts search; corrected table gives 4x21 = H", b)

    def c():
        t = propagate(base)
        flagged = []
        for f in read_facts(data_path("prior_claims.csv")):
            got = t[(f.m, f.n)]
            if not got <= f.constraint:
                flagged.append(f"({f.m},{f.n}) claimed {f.constraint}, derivable {got}")
        return any(x.startswith("(6,29)") for x in flagged), "; ".join(flagged) or "nothing flagged"
    report.check("errata: 6x29 = 1H is flagged as unsupported", c)
    return report


def _with(t: FactTable, f: Fact) -> FactTable:
    t = t.copy()
    t.add(f)
    return t

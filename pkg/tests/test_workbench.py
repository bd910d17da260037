import pytest

from domineering.board import Player
from domineering.rules import ContradictionError, OutcomeConstraint, propagate
from domineering.workbench import (FactsFileError, data_path, errata_suite, expected_table,
                                   load_facts, read_facts, read_grid, read_values, render_table,
                                   results_items, search_fact, shipped_table)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_read_facts(tmp_path):
    p = write(tmp_path, "f.csv", "m,n,code,source,note\n2,4,H,me,\n# comment\n\n3,5,1H,me\n")
    facts = read_facts(p)
    assert [(f.m, f.n, f.constraint.code) for f in facts] == [(2, 4, "H"), (3, 5, "1H")]
    assert facts[0].provenance.source == "me"


@pytest.mark.parametrize("body,msg", [
    ("2,4,Q,me,\n", "bad constraint code"),
    ("2,4,H,me,\n2,4,H,you,\n", "duplicate cell"),
    ("x,4,H,me,\n", "two integers"),
    ("0,4,H,me,\n", "positive"),
    ("2,4\n", "fields"),
])
def test_read_facts_errors_carry_line_numbers(tmp_path, body, msg):
    p = write(tmp_path, "f.csv", "m,n,code,source,note\n" + body)
    with pytest.raises(FactsFileError, match=msg) as e:
        read_facts(p)
    assert ":2:" in str(e.value) or ":3:" in str(e.value)


def test_read_values(tmp_path):
    p = write(tmp_path, "v.csv", "m,n,relation,value,source,note\n2,2,eq,{1|-1},me,\n")
    (v,) = read_values(p)
    assert (v.m, v.n, v.relation) == (2, 2, "eq")
    bad = write(tmp_path, "b.csv", "m,n,relation,value,source,note\n2,2,lt,0,me,\n")
    with pytest.raises(FactsFileError):
        read_values(bad)
    bad = write(tmp_path, "c.csv", "m,n,relation,value,source,note\n2,2,eq,{1|,me,\n")
    with pytest.raises(FactsFileError):
        read_values(bad)


def test_contradictory_facts_file(tmp_path):
    p = write(tmp_path, "f.csv", "m,n,code,source,note\n2,4,H,a,\n4,2,H,b,\n")
    t = load_facts(p)
    with pytest.raises(ContradictionError):
        propagate(t)


def test_shipped_facts_are_small_and_imported():
    facts = read_facts(data_path("base_facts.csv"))
    assert 0 < len(facts) < 100
    assert all(f.provenance.kind == "imported" for f in facts)


def test_expected_table_extensions():
    e = expected_table(16, 128)
    assert e[(4, 13)].code == "2"
    assert e[(6, 14)].code == "H"
    assert e[(6, 33)].code == "1H" and e[(6, 34)].code == "H"
    assert e[(8, 56)].code == "H" and (8, 55) not in e
    assert e[(40, 3)].code == "V"


def test_render_table_roundtrip_and_mismatches(tmp_path):
    t = propagate(shipped_table(8, 40))
    rep = render_table(t, 8, 40, expected_table(8, 40))
    assert rep.failures == []
    p = write(tmp_path, "t.tsv", rep.tsv)
    grid = read_grid(p)
    assert grid[(8, 26)].code == "H"
    assert len(rep.tsv.splitlines()) == 9
    # every referenced fact appears in the sidecar
    assert "#" in rep.provenance and "imported" in rep.provenance
    wrong = dict(grid)
    wrong[(2, 4)] = OutcomeConstraint.parse("V")
    wrong[(6, 29)] = OutcomeConstraint.parse("H")
    kinds = {m.cell: m.kind for m in render_table(t, 8, 40, wrong).mismatches}
    assert kinds[(2, 4)] == "conflict"
    assert kinds[(6, 29)] == "weaker"


def test_search_fact_small():
    assert search_fact(3, 4).constraint.code == "H"
    assert search_fact(3, 4, Player.V).constraint.code == "2H"
    assert search_fact(3, 4, Player.H).constraint.code == "1H"
    assert search_fact(4, 4, Player.V).provenance.kind == "search"


def test_results_items_on_shipped_table():
    t = propagate(shipped_table(16, 128))
    items = results_items(t)
    assert [k for k, *_ in items] == list(range(1, 9))
    assert all(ok for _, _, ok, _ in items), [x for x in items if not x[2]]


def test_errata_without_search():
    rep = errata_suite(search=False)
    assert rep.passed, str(rep)
    assert len(rep.results) == 3

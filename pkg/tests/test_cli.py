import subprocess
import sys

import pytest

from domineering.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_value(capsys):
    assert run(capsys, "value", "2x2") == (0, "{1|-1}\n", "")
    assert run(capsys, "value", "9x2")[1] == "{3/2|0||-1/2|-5/2}\n"


def test_value_of_board_file_sum(capsys, tmp_path):
    p = tmp_path / "b.txt"
    p.write_text("..\n..\n\n.\n.\n", encoding="utf-8")
    code, out, _ = run(capsys, "value", str(p))
    assert code == 0 and out == "{2|0}\n"


def test_outcome(capsys):
    assert run(capsys, "outcome", "3x4")[:2] == (0, "H\n")
    assert run(capsys, "outcome", "5x5")[:2] == (0, "2\n")


def test_compare(capsys):
    assert run(capsys, "compare", "2x1", "1")[:2] == (0, "EQUAL\n")
    assert run(capsys, "compare", "2x2", "0")[:2] == (0, "CONFUSED\n")
    assert run(capsys, "compare", "1x4", "0")[:2] == (0, "LESS\n")


def test_prove_exit_codes(capsys):
    assert run(capsys, "prove", "2x1", "1", "le")[:2] == (0, "true\n")
    assert run(capsys, "prove", "2x1", "1/2", "le")[:2] == (1, "false\n")


@pytest.mark.parametrize("argv", [
    ["value", "missing-file.txt"],
    ["prove", "2x1", "{1|", "le"],
    ["prove", "2x1", "1", "lt"],
    ["table", "--max-m", "4", "--max-n", "8", "--facts", "nope.csv"],
    ["frobnicate"],
])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 3


def test_resource_errors(capsys):
    assert run(capsys, "value", "8x8")[0] == 2
    assert run(capsys, "outcome", "6x6", "--node-budget", "10")[0] == 2


def test_table(capsys, tmp_path):
    out = tmp_path / "t.tsv"
    code, _, err = run(capsys, "table", "--max-m", "16", "--max-n", "128", "--facts", "shipped",
                       "--expected", "published", "--out", str(out))
    assert code == 0
    assert "0 mismatches" in err
    assert out.read_text().startswith("m\\n\t1\t2")
    assert (tmp_path / "t.tsv.provenance.tsv").exists()


def test_table_mismatch_exit_code(capsys, tmp_path):
    grid = tmp_path / "g.tsv"
    grid.write_text("m\\n\t1\t2\t3\t4\n2\tV\t1\t1\tV\n", encoding="utf-8")
    code, _, err = run(capsys, "table", "--max-m", "4", "--max-n", "8", "--facts", "shipped",
                       "--expected", str(grid))
    assert code == 1
    assert "conflict" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "domineering", "value", "2x1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "1\n"

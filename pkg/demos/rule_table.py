"""
Outcome classes from a few facts and many rules
===============================================

Start from the shipped base facts (a few dozen small boards), apply the
inference rules to a fixpoint over 16 x 128, and compare with the
published table.  Then follow the derivation of one cell back to its
sources.
"""

from domineering import expected_table, propagate, render_table, shipped_table

base = shipped_table(16, 128)
print(f"{len(base.cell_fact)} known cells before propagation")

table = propagate(base)
report = render_table(table, 16, 128, expected_table(16, 128))
known = sum(not table.constraint(m, n).is_full for m in table.heights for n in table.row_widths(m))
print(f"{known} known cells after propagation, {len(report.failures)} disagree with the table")

# the first rows, first 40 widths
for line in report.tsv.splitlines()[:9]:
    print("\t".join(line.split("\t")[:41]))

# where does 11x14 = H come from?
print("\nderivation of 11x14:")
for f in table.chain(11, 14):
    print("  ", f)

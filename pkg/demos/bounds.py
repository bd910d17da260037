"""
Bounding a board by a number
============================

``prove_relation`` decides ``board <= g`` with one search: Vertical moving
first on ``board - g`` must lose.  A composite figure places a small
gadget of value ``-g`` next to the board, so the same question becomes an
ordinary outcome search.
"""

from domineering import default_store, format_game, from_ascii, prove_relation, rect, value_of_position
from domineering.workbench import data_path

store = default_store
one = store.number(1)
print("2x1 <= 1:", prove_relation(rect(2, 1), one, "le"))
print("2x1 >= 1:", prove_relation(rect(2, 1), one, "ge"))
print("2x2 <= 0:", prove_relation(rect(2, 2), store.zero, "le"))

figure = from_ascii(data_path("composite_9x7.txt").read_text())
print("\ncomposite figure:")
print(figure.to_ascii())
for part in figure.components():
    if part.empty_cells() < 63:
        print("gadget part", part.height, "x", part.width, "=", format_game(value_of_position(part)))

# the full 9x7 proof takes far longer than a demo; a 3x3 block shows the idea
print("\n3x3 <= 1:", prove_relation(rect(3, 3), one, "le"))

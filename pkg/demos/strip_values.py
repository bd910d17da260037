"""
Values of two-column strips
===========================

Canonical values of tall m x 2 boards, their multiples, and how they
compare with zero.  Runs in about a minute.
"""

from domineering import default_store, format_game, rect, value_of_position

store = default_store

# a single vertical domino is worth one move to Vertical
print("2x1 =", format_game(value_of_position(rect(2, 1))))
print("2x2 =", format_game(value_of_position(rect(2, 2))))

# tall strips have hot, many-layered values
values = {}
for m in (9, 11, 15):
    values[m] = value_of_position(rect(m, 2))
    print(f"{m}x2 =", format_game(values[m]))

# several copies of a strip can be compared with zero exactly
for k, m in [(3, 9), (7, 11), (3, 15), (5, 15)]:
    g = store.multiply_int(k, values[m])
    print(f"{k} * ({m}x2) = {format_game(g)}   compared with 0: {store.compare(g, store.zero).name}")

# values are interned, so equal games are the same object
g19 = value_of_position(rect(19, 2))
print("3 * (15x2) is 19x2:", store.multiply_int(3, values[15]) is g19)

import pytest

from domineering.board import BoardError, Move, Player, Position, from_ascii, parse_boards, rect


def test_rect_and_moves():
    p = rect(2, 3)
    assert p.empty_cells() == 6
    assert len(p.legal_moves(Player.V)) == 3
    assert len(p.legal_moves(Player.H)) == 4
    q = p.play(Move(Player.V, 0, 1))
    assert q.empty_cells() == 4
    assert not q.is_free(0, 1) and not q.is_free(1, 1)
    with pytest.raises(BoardError):
        q.play(Move(Player.H, 0, 0))


def test_ascii_roundtrip():
    text = "..#\n...\n#.."
    p = from_ascii(text)
    assert (p.height, p.width, p.empty_cells()) == (3, 3, 7)
    assert from_ascii(p.to_ascii()) == p


@pytest.mark.parametrize("text", ["", "..\n.", ".x", "\n\n"])
def test_ascii_errors(text):
    with pytest.raises(BoardError):
        from_ascii(text)


def test_parse_boards_sum():
    parts = parse_boards("..\n..\n\n\n...\n")
    assert [(p.height, p.width) for p in parts] == [(2, 2), (1, 3)]
    with pytest.raises(BoardError):
        parse_boards("\n \n")


def test_size_limits():
    with pytest.raises(BoardError):
        rect(0, 3)
    with pytest.raises(BoardError):
        rect(33, 32)
    rect(16, 64)


def test_components_are_cropped():
    p = from_ascii("..#..\n..#..\n#####\n....#")
    comps = sorted((c.height, c.width, c.empty_cells()) for c in p.components())
    assert comps == [(1, 4, 4), (2, 2, 4), (2, 2, 4)]


def test_symmetries():
    p = from_ascii("..#\n...")
    t = p.transpose()
    assert (t.height, t.width) == (3, 2)
    assert t.transpose() == p
    # vertical moves become horizontal ones
    assert len(t.legal_moves(Player.H)) == len(p.legal_moves(Player.V))
    assert p.rotate180().rotate180() == p
    assert p.mirror_horizontal().mirror_horizontal() == p
    assert p.normalize_key() == p.mirror_horizontal().normalize_key() == p.mirror_vertical().normalize_key()


def test_rows_and_padded_roundtrip():
    p = from_ascii(".#.\n##.\n...")
    assert Position.from_rows(p.width, p.rows()) == p
    assert Position.from_padded(p.height, p.width, p.padded()) == p

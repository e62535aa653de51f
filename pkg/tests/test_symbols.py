import pytest

from tokfst import EPSILON, FAILURE, AlphabetError, SymbolTable


def test_reserved_ids_are_fixed():
    assert EPSILON == 0
    assert FAILURE == 1
    table = SymbolTable(["a", "b", "ab"])
    assert table.id("a") == 2
    assert table.id("b") == 3
    assert table.id("ab") == 4


def test_round_trip_and_display():
    table = SymbolTable(["a", "b", "ab"])
    for tok in table:
        assert table.token(table.id(tok)) == tok
    assert table.display(EPSILON) == "ε"
    assert table.display(FAILURE) == "φ"
    assert table.display(4) == "ab"


def test_char_and_token_id_partitions():
    table = SymbolTable(["a", "b", "ab", "abc"])
    assert table.char_ids() == frozenset({2, 3})
    assert table.token_ids() == frozenset({2, 3, 4, 5})
    assert "ab" in table
    assert "ba" not in table
    assert len(table) == 4


def test_bad_lookups():
    table = SymbolTable(["a"])
    with pytest.raises(AlphabetError):
        table.id("z")
    with pytest.raises(AlphabetError):
        table.token(EPSILON)
    with pytest.raises(AlphabetError):
        table.token(99)


def test_bad_construction():
    with pytest.raises(AlphabetError):
        SymbolTable(["a", "a"])
    with pytest.raises(AlphabetError):
        SymbolTable([""])


def test_equality_is_by_token_sequence():
    assert SymbolTable(["a", "b"]) == SymbolTable(["a", "b"])
    assert SymbolTable(["a", "b"]) != SymbolTable(["b", "a"])
    assert hash(SymbolTable(["a", "b"])) == hash(SymbolTable(["a", "b"]))

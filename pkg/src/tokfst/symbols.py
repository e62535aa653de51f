"""Shared symbol table mapping token strings to dense integer ids.

All machines in a pipeline reference one table, so character symbols and
multi-character token symbols live in a single id space. Ids 0 and 1 are
reserved for the empty symbol and the failure symbol and never map to a
token string; real tokens start at id 2.
"""

from __future__ import annotations

from .errors import AlphabetError

EPSILON = 0  # consumes/emits nothing
FAILURE = 1  # input-only; traversable when no sibling arc matches, and at end of input

RESERVED = 2  # first real token id

_DISPLAY = {EPSILON: "ε", FAILURE: "φ"}


class SymbolTable:
    """Immutable bijection between token strings and ids >= 2."""

    def __init__(self, tokens=()):
        self._tokens: tuple[str, ...] = tuple(tokens)
        self._ids: dict[str, int] = {}
        for i, tok in enumerate(self._tokens):
            if not isinstance(tok, str) or not tok:
                raise AlphabetError(f"token {tok!r} is not a non-empty string")
            if tok in self._ids:
                raise AlphabetError(f"duplicate token {tok!r}")
            self._ids[tok] = i + RESERVED

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    def id(self, token: str) -> int:
        try:
            return self._ids[token]
        except KeyError:
            raise AlphabetError(f"token {token!r} is not in the symbol table") from None

    def token(self, sym: int) -> str:
        if sym in _DISPLAY or not RESERVED <= sym < RESERVED + len(self._tokens):
            raise AlphabetError(f"id {sym} does not name a token")
        return self._tokens[sym - RESERVED]

    def display(self, sym: int) -> str:
        """Printable form of any symbol id, rendering the reserved ids literally."""
        return _DISPLAY.get(sym) or self.token(sym)

    def ids(self, tokens) -> tuple[int, ...]:
        return tuple(self.id(t) for t in tokens)

    def char_ids(self) -> frozenset[int]:
        """Ids of the single-character tokens (the character alphabet)."""
        return frozenset(i + RESERVED for i, t in enumerate(self._tokens) if len(t) == 1)

    def token_ids(self) -> frozenset[int]:
        return frozenset(range(RESERVED, RESERVED + len(self._tokens)))

    def __contains__(self, token: str) -> bool:
        return token in self._ids

    def __len__(self) -> int:
        return len(self._tokens)

    def __iter__(self):
        return iter(self._tokens)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolTable) and self._tokens == other._tokens

    def __hash__(self) -> int:
        return hash(self._tokens)

    def __repr__(self) -> str:
        return f"SymbolTable({list(self._tokens)!r})"

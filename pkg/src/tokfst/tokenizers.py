"""Subword tokenizers over an open vocabulary.

A vocabulary is a set of string tokens in which every character of every
token is itself a token, so any text can be segmented. Two tokenizer families
are provided: greedy longest-match and byte-pair merge application. Both are
deterministic functions from text to one canonical token sequence out of the
(generally many) segmentations the vocabulary admits.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import AlphabetError, ConfigError
from .symbols import SymbolTable


@dataclass(frozen=True)
class Vocabulary:
    """A symbol table validated for open-vocabulary use."""

    table: SymbolTable

    def __post_init__(self):
        chars = {self.table.token(i) for i in self.table.char_ids()}
        for token in self.table.tokens:
            missing = sorted(set(token) - chars)
            if missing:
                raise ConfigError(
                    f"token {token!r} uses character {missing[0]!r} "
                    "which is not itself a token"
                )

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "Vocabulary":
        return cls(SymbolTable(tuple(tokens)))

    @cached_property
    def max_token_len(self) -> int:
        return max((len(t) for t in self.table.tokens), default=0)

    def encode_chars(self, text: str) -> tuple[int, ...]:
        """Map text to its character-by-character id sequence."""
        return tuple(self.table.id(ch) for ch in text)

    def decode(self, ids: Iterable[int]) -> str:
        return "".join(self.table.token(i) for i in ids)


def maxmatch_tokenize(text: str, vocab: Vocabulary) -> tuple[int, ...]:
    """Greedy longest-prefix segmentation.

    At each position the longest vocabulary token that prefixes the rest of
    the text is taken; single-character coverage guarantees progress.
    """
    table = vocab.table
    out: list[int] = []
    i = 0
    n = len(text)
    while i < n:
        for length in range(min(vocab.max_token_len, n - i), 0, -1):
            piece = text[i : i + length]
            if piece in table:
                out.append(table.id(piece))
                i += length
                break
        else:
            raise AlphabetError(f"character {text[i]!r} is not in the vocabulary")
    return tuple(out)


def apply_merge(seq: tuple[int, ...], merge: tuple[int, int], table: SymbolTable) -> tuple[int, ...]:
    """Replace every adjacent occurrence of the pair in one left-to-right pass.

    After a replacement scanning resumes after the new token, so `(a, a)`
    applied to `a a a` gives `aa a`.
    """
    x, y = merge
    merged = table.id(table.token(x) + table.token(y))
    out: list[int] = []
    i = 0
    while i < len(seq):
        if i + 1 < len(seq) and seq[i] == x and seq[i + 1] == y:
            out.append(merged)
            i += 2
        else:
            out.append(seq[i])
            i += 1
    return tuple(out)


@dataclass(frozen=True)
class BpeTokenizer:
    """A byte-pair tokenizer: an ordered merge list over a vocabulary.

    Each merge is a pair of token ids whose concatenation must also be a
    token. Merges must be usable in the order given: an operand is either a
    single character or the result of an earlier merge.
    """

    vocab: Vocabulary
    merges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "merges", tuple(tuple(m) for m in self.merges))
        table = self.vocab.table
        available = set(table.char_ids())
        produced: set[int] = set()
        for n, (x, y) in enumerate(self.merges):
            for operand in (x, y):
                token = table.token(operand)  # raises on unknown ids
                if operand not in available:
                    raise ConfigError(
                        f"merge {n} uses {token!r} before any merge produces it"
                    )
            combined = table.token(x) + table.token(y)
            if combined not in table:
                raise ConfigError(
                    f"merge {n} would produce {combined!r}, which is not a token"
                )
            result = table.id(combined)
            if result in produced:
                raise ConfigError(f"two merges produce the same token {combined!r}")
            produced.add(result)
            available.add(result)
        uncovered = set(table.token_ids()) - set(table.char_ids()) - produced
        if uncovered:
            token = table.token(min(uncovered))
            raise ConfigError(f"token {token!r} is not produced by any merge")

    @classmethod
    def from_token_pairs(
        cls, vocab: Vocabulary, pairs: Iterable[tuple[str, str]]
    ) -> "BpeTokenizer":
        table = vocab.table
        return cls(vocab, tuple((table.id(x), table.id(y)) for x, y in pairs))

    def merge_tokens(self) -> tuple[tuple[str, str], ...]:
        table = self.vocab.table
        return tuple((table.token(x), table.token(y)) for x, y in self.merges)

    def tokenize(self, text: str) -> tuple[int, ...]:
        """Apply the merge list in order, one full pass per merge."""
        seq = self.vocab.encode_chars(text)
        for merge in self.merges:
            seq = apply_merge(seq, merge, self.vocab.table)
        return seq

    def tokenize_incremental(self, text: str) -> tuple[int, ...]:
        """Repeatedly apply the earliest-listed merge present anywhere in the
        sequence. Agrees with tokenize() whenever the merge list is valid,
        because later merges never create operand pairs of earlier ones."""
        rank = {m: n for n, m in enumerate(self.merges)}
        seq = self.vocab.encode_chars(text)
        while True:
            present = [rank[p] for p in zip(seq, seq[1:]) if p in rank]
            if not present:
                return seq
            seq = apply_merge(seq, self.merges[min(present)], self.vocab.table)


def bpe_train(corpus: Iterable[str], steps: int) -> BpeTokenizer:
    """Learn a merge list of at most `steps` merges from example strings.

    Every round counts adjacent token pairs across the corpus (weighted by
    word frequency) and merges the most frequent pair whose concatenation is
    not already a token; ties break toward the pair whose first occurrence in
    corpus order comes earliest. Stops early with a warning when no pair is
    left to merge.
    """
    words: Counter[str] = Counter()
    order: list[str] = []
    for w in corpus:
        if w not in words:
            order.append(w)
        words[w] += 1
    chars = sorted({ch for w in order for ch in w})
    if not chars:
        raise ConfigError("cannot train on an empty corpus")
    tokens: list[str] = list(chars)
    vocab = Vocabulary.from_tokens(tokens)
    # token ids stay stable as the vocabulary grows (appends only), so the
    # tokenized corpus carries over between rounds
    seqs = {w: vocab.encode_chars(w) for w in order}
    merges: list[tuple[str, str]] = []

    for _ in range(steps):
        counts: Counter[tuple[int, int]] = Counter()
        first_seen: dict[tuple[int, int], int] = {}
        tick = 0
        for w in order:
            for pair in zip(seqs[w], seqs[w][1:]):
                joined = vocab.table.token(pair[0]) + vocab.table.token(pair[1])
                if joined in vocab.table:
                    continue
                counts[pair] += words[w]
                first_seen.setdefault(pair, tick)
                tick += 1
        if not counts:
            warnings.warn(
                f"stopping after {len(merges)} merges: no pair left to merge",
                stacklevel=2,
            )
            break
        best = max(counts, key=lambda p: (counts[p], -first_seen[p]))
        x, y = (vocab.table.token(i) for i in best)
        tokens.append(x + y)
        vocab = Vocabulary.from_tokens(tokens)
        merges.append((x, y))
        seqs = {w: apply_merge(seqs[w], best, vocab.table) for w in order}

    return BpeTokenizer.from_token_pairs(vocab, merges)


def count_segmentations(text: str, vocab: Vocabulary) -> int:
    """How many distinct token sequences spell out `text`."""
    n = len(text)
    ways = [0] * (n + 1)
    ways[n] = 1
    table = vocab.table
    for i in range(n - 1, -1, -1):
        total = 0
        for length in range(1, min(vocab.max_token_len, n - i) + 1):
            if text[i : i + length] in table:
                total += ways[i + length]
        ways[i] = total
    return ways[0]


def iter_segmentations(text: str, vocab: Vocabulary) -> Iterator[tuple[int, ...]]:
    """Yield every token-id sequence that concatenates to `text`."""
    table = vocab.table
    n = len(text)

    def walk(i: int, acc: list[int]) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(acc)
            return
        for length in range(1, min(vocab.max_token_len, n - i) + 1):
            piece = text[i : i + length]
            if piece in table:
                acc.append(table.id(piece))
                yield from walk(i + length, acc)
                acc.pop()

    return walk(0, [])

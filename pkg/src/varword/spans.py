"""Spans of variable-word sequences and block-subsequence recognition.

A span query names a finite sequence of variable words, one alphabet per
position, and a kind. Reduced kinds substitute one symbol into every
position in order; extracted kinds pick a non-empty increasing subset of
positions first. Constant kinds substitute letters only; variable kinds
allow the variable symbol, requiring it at least once.

Enumeration order is part of the contract: substitution tuples run in
lexicographic order with the variable symbol sorting before all letters,
and extracted index subsets run in colexicographic order (equivalently,
increasing subset bitmask). Extracted enumeration deduplicates equal
words, keeping the first occurrence; membership returns the least witness
in the same ordering.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import CapExceeded, InsufficientPrefix
from .words import (X, AlphabetLadder, VariableWord, VarSeq, Word, WordLike,
                    make_word)


class SpanKind(str, enum.Enum):
    REDUCED_CONSTANT = "reduced-constant"
    REDUCED_VARIABLE = "reduced-variable"
    EXTRACTED_CONSTANT = "extracted-constant"
    EXTRACTED_VARIABLE = "extracted-variable"

    @property
    def is_reduced(self) -> bool:
        return self in (SpanKind.REDUCED_CONSTANT, SpanKind.REDUCED_VARIABLE)

    @property
    def is_variable(self) -> bool:
        return self in (SpanKind.REDUCED_VARIABLE, SpanKind.EXTRACTED_VARIABLE)


@dataclass(frozen=True)
class SpanQuery:
    seq: tuple[VariableWord, ...]
    level_alphabets: tuple[frozenset[int], ...]
    kind: SpanKind

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(self.seq))
        object.__setattr__(self, "level_alphabets",
                           tuple(frozenset(a) for a in self.level_alphabets))
        object.__setattr__(self, "kind", SpanKind(self.kind))
        if not self.seq:
            raise ValueError("a span query needs at least one word")
        if len(self.seq) != len(self.level_alphabets):
            raise ValueError("one alphabet per position is required")
        for w in self.seq:
            if not isinstance(w, VariableWord):
                raise TypeError("span positions must hold variable words")
        for a in self.level_alphabets:
            if not a:
                raise ValueError("every position alphabet must be non-empty")

    @classmethod
    def over_ladder(cls, seq: Sequence[VariableWord], ladder: AlphabetLadder,
                    offset: int, kind: SpanKind) -> "SpanQuery":
        """Alphabets taken from consecutive ladder levels starting at ``offset``."""
        levels = tuple(ladder.level(offset + n) for n in range(len(seq)))
        return cls(tuple(seq), levels, kind)


@dataclass(frozen=True)
class SpanSelection:
    """One membership witness: chosen positions and the symbol per position."""

    indices: tuple[int, ...]
    symbols: tuple[int, ...]


@dataclass(frozen=True)
class BlockWitness:
    """Witness of a block-subsequence relation: window cuts plus one
    span selection per block. Cut j is the first parent index of block j's
    window; the final cut is one past the last window."""

    cuts: tuple[int, ...]
    selections: tuple[SpanSelection, ...]


def _options(alphabet: frozenset[int], with_x: bool) -> tuple[int, ...]:
    # The variable symbol sorts before all letters.
    letters = tuple(sorted(alphabet))
    return ((X,) + letters) if with_x else letters


def span_size(query: SpanQuery) -> int:
    """Closed-form selection count for the query.

    Exact word counts for reduced kinds; for extracted kinds the count is
    over (subset, symbol tuple) selections, an upper bound on distinct words.
    """
    sizes = [len(a) for a in query.level_alphabets]
    prod = 1
    for s in sizes:
        prod *= s
    prod1 = 1
    for s in sizes:
        prod1 *= s + 1
    if query.kind == SpanKind.REDUCED_CONSTANT:
        return prod
    if query.kind == SpanKind.REDUCED_VARIABLE:
        return prod1 - prod
    if query.kind == SpanKind.EXTRACTED_CONSTANT:
        return prod1 - 1
    prod2 = 1
    for s in sizes:
        prod2 *= s + 2
    return prod2 - prod1


def _substituted(block: VariableWord, symbol: int) -> tuple[int, ...]:
    if symbol == X:
        return block.symbols
    return tuple(symbol if s == X else s for s in block.symbols)


def enumerate_span(query: SpanQuery, cap: Optional[int] = None) -> Iterator[WordLike]:
    """Enumerate the span in the documented deterministic order."""
    size = span_size(query)
    if cap is not None and size > cap:
        raise CapExceeded(size, cap, "span selections")
    if query.kind.is_reduced:
        yield from _enumerate_reduced(query)
    else:
        yield from _enumerate_extracted(query)


def _enumerate_reduced(query: SpanQuery) -> Iterator[WordLike]:
    with_x = query.kind.is_variable
    opts = [_options(a, with_x) for a in query.level_alphabets]
    for choice in itertools.product(*opts):
        if with_x and X not in choice:
            continue
        symbols: list[int] = []
        for block, b in zip(query.seq, choice):
            symbols.extend(_substituted(block, b))
        yield make_word(symbols)


def _enumerate_extracted(query: SpanQuery) -> Iterator[WordLike]:
    with_x = query.kind.is_variable
    width = len(query.seq)
    seen: set[tuple[int, ...]] = set()
    for mask in range(1, 1 << width):
        indices = [i for i in range(width) if mask >> i & 1]
        opts = [_options(query.level_alphabets[i], with_x) for i in indices]
        for choice in itertools.product(*opts):
            if with_x and X not in choice:
                continue
            symbols: list[int] = []
            for i, b in zip(indices, choice):
                symbols.extend(_substituted(query.seq[i], b))
            key = tuple(symbols)
            if key in seen:
                continue
            seen.add(key)
            yield make_word(key)


def _forced_choice(block: VariableWord, segment: tuple[int, ...]) -> Optional[int]:
    """The unique symbol substituting into ``block`` to produce ``segment``,
    or None when no symbol works. Segment length must equal the block's."""
    choice: Optional[int] = None
    for b, t in zip(block.symbols, segment):
        if b == X:
            if choice is None:
                choice = t
            elif choice != t:
                return None
        elif b != t:
            return None
    return choice


def span_contains(query: SpanQuery, w: WordLike) -> Optional[SpanSelection]:
    """Decide membership of ``w`` in the span, returning the least witness."""
    if query.kind.is_variable:
        if not isinstance(w, VariableWord):
            return None
    else:
        if not isinstance(w, Word):
            return None
    if query.kind.is_reduced:
        return _contains_reduced(query, w)
    return _extracted_parse(w.symbols, query.seq, query.level_alphabets,
                            must_use_last=False)


def _contains_reduced(query: SpanQuery, w: WordLike) -> Optional[SpanSelection]:
    target = w.symbols
    if len(target) != sum(len(b) for b in query.seq):
        return None
    symbols = []
    pos = 0
    for block, alphabet in zip(query.seq, query.level_alphabets):
        segment = target[pos:pos + len(block)]
        choice = _forced_choice(block, segment)
        if choice is None:
            return None
        if choice != X and choice not in alphabet:
            return None
        symbols.append(choice)
        pos += len(block)
    return SpanSelection(tuple(range(len(query.seq))), tuple(symbols))


def _extracted_parse(target: tuple[int, ...], blocks: Sequence[VariableWord],
                     alphabets: Sequence[frozenset[int]],
                     must_use_last: bool) -> Optional[SpanSelection]:
    """Match ``target`` as a concatenation of substituted blocks taken along
    an increasing subset of positions. Returns the witness with the
    lexicographically least index tuple, preferring earlier positions.
    """
    width = len(blocks)
    total = len(target)

    def match(pos: int, idx: int) -> Optional[int]:
        block = blocks[idx]
        if pos + len(block) > total:
            return None
        choice = _forced_choice(block, target[pos:pos + len(block)])
        if choice is None:
            return None
        if choice != X and choice not in alphabets[idx]:
            return None
        return choice

    feasible: dict[tuple[int, int], bool] = {}

    def feas(pos: int, idx: int) -> bool:
        if pos == total:
            # A complete parse; when the last block is mandatory it must
            # already have been consumed.
            return (not must_use_last) or idx > width - 1
        if idx >= width:
            return False
        key = (pos, idx)
        if key in feasible:
            return feasible[key]
        ok = False
        choice = match(pos, idx)
        if choice is not None and feas(pos + len(blocks[idx]), idx + 1):
            ok = True
        if not ok and not (must_use_last and idx == width - 1):
            ok = feas(pos, idx + 1)
        feasible[key] = ok
        return ok

    if not feas(0, 0):
        return None
    indices: list[int] = []
    symbols: list[int] = []
    pos, idx = 0, 0
    while pos < total:
        choice = match(pos, idx)
        if choice is not None and feas(pos + len(blocks[idx]), idx + 1):
            indices.append(idx)
            symbols.append(choice)
            pos += len(blocks[idx])
            idx += 1
        else:
            idx += 1
    return SpanSelection(tuple(indices), tuple(symbols))


def is_reduced_block_subseq(t: Sequence[VariableWord], s: VarSeq, k: int,
                            ladder: AlphabetLadder) -> Optional[BlockWitness]:
    """Recognize ``t`` as a reduced k-block subsequence of ``s``.

    Window cuts are forced by cumulative lengths, so recognition is a
    single linear pass. Raises InsufficientPrefix when ``s`` cannot supply
    enough items to decide.
    """
    t = tuple(t)
    if not t:
        raise ValueError("the candidate subsequence must be non-empty")
    cuts = [0]
    selections = []
    c = 0
    for block in t:
        if not isinstance(block, VariableWord):
            raise TypeError("candidate blocks must be variable words")
        remaining = len(block)
        window: list[VariableWord] = []
        while remaining > 0:
            item = s[c + len(window)]
            window.append(item)
            remaining -= len(item)
        if remaining < 0:
            return None
        levels = tuple(ladder.level(k + n) for n in range(c, c + len(window)))
        sel = span_contains(
            SpanQuery(tuple(window), levels, SpanKind.REDUCED_VARIABLE), block)
        if sel is None:
            return None
        selections.append(
            SpanSelection(tuple(range(c, c + len(window))), sel.symbols))
        c += len(window)
        cuts.append(c)
    return BlockWitness(tuple(cuts), tuple(selections))


def is_extracted_block_subseq(t: Sequence[VariableWord], s: VarSeq, k: int,
                              ladder: AlphabetLadder) -> Optional[BlockWitness]:
    """Recognize ``t`` as an extracted k-block subsequence of ``s``.

    Witnesses are not unique; the one returned is least under the
    (cuts, inner indices) ordering, found by greedily minimizing the last
    parent index each block consumes. On a finite sequence a failed search
    returns None; on a stream it raises InsufficientPrefix once the budget
    is exhausted, since later items could still provide a match.
    """
    t = tuple(t)
    if not t:
        raise ValueError("the candidate subsequence must be non-empty")
    cuts = [0]
    selections = []
    c = 0
    for block in t:
        if not isinstance(block, VariableWord):
            raise TypeError("candidate blocks must be variable words")
        end = c
        found = None
        while found is None:
            try:
                window = [s[i] for i in range(c, end + 1)]
            except InsufficientPrefix:
                if s.is_finite:
                    return None
                raise
            levels = [ladder.level(k + n) for n in range(c, end + 1)]
            sel = _extracted_parse(block.symbols, window, levels,
                                   must_use_last=True)
            if sel is not None:
                found = SpanSelection(tuple(c + i for i in sel.indices),
                                      sel.symbols)
            else:
                end += 1
        selections.append(found)
        c = end + 1
        cuts.append(c)
    return BlockWitness(tuple(cuts), tuple(selections))

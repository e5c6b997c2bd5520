"""Words over an increasing alphabet ladder.

Letters are small non-negative integer ids; the variable symbol is a
reserved sentinel outside the letter-id space. Constant words, variable
words, alphabet ladders and sequences of variable words are immutable
values, safe to share between concurrent workers without coordination.

Sequences of variable words are either finite or generator-backed streams
with a hard budget; nothing in the package ever treats an infinite
sequence as a completed object.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Union

from .errors import InsufficientPrefix

# The variable symbol. Never a valid letter id.
X = -1

_DEFAULT_STREAM_BUDGET = 1 << 20


def _validate_symbols(symbols: tuple[int, ...], allow_x: bool) -> None:
    for s in symbols:
        if s == X:
            if not allow_x:
                raise ValueError("constant words cannot contain the variable symbol")
            continue
        if not isinstance(s, int) or isinstance(s, bool) or s < 0:
            raise ValueError(f"invalid letter id: {s!r}")


@dataclass(frozen=True)
class Word:
    """A constant word: a finite sequence of letter ids. May be empty."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        _validate_symbols(self.letters, allow_x=False)

    @property
    def symbols(self) -> tuple[int, ...]:
        return self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return render_word(self)


@dataclass(frozen=True)
class VariableWord:
    """A word over letters plus the variable symbol, occurring at least once."""

    symbols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        _validate_symbols(self.symbols, allow_x=True)
        if X not in self.symbols:
            raise ValueError("a variable word must contain the variable symbol")

    @property
    def is_left_variable(self) -> bool:
        return self.symbols[0] == X

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return render_word(self)


WordLike = Union[Word, VariableWord]

EMPTY = Word()


def x_word() -> VariableWord:
    """The single-symbol variable word."""
    return VariableWord((X,))


def make_word(symbols: Iterable[int]) -> WordLike:
    """Build a Word or VariableWord depending on whether the variable occurs."""
    symbols = tuple(symbols)
    return VariableWord(symbols) if X in symbols else Word(symbols)


def substitute(v: VariableWord, a: int) -> Word:
    """Replace every occurrence of the variable in ``v`` by the letter ``a``."""
    if not isinstance(a, int) or isinstance(a, bool) or a < 0:
        raise ValueError(f"invalid letter id: {a!r}")
    return Word(tuple(a if s == X else s for s in v.symbols))


def concat(u: WordLike, w: WordLike) -> WordLike:
    """Concatenate two words; the result is variable iff either input is."""
    return make_word(u.symbols + w.symbols)


def concat_all(parts: Iterable[WordLike]) -> WordLike:
    symbols: list[int] = []
    for p in parts:
        symbols.extend(p.symbols)
    return make_word(symbols)


def split_star(v: VariableWord) -> tuple[Word, VariableWord]:
    """Split ``v`` into its maximal constant prefix and left-variable suffix."""
    i = v.symbols.index(X)
    return Word(v.symbols[:i]), VariableWord(v.symbols[i:])


def star(v: VariableWord) -> Word:
    """The maximal constant prefix of ``v`` (empty when ``v`` is left variable)."""
    return split_star(v)[0]


def double_star(v: VariableWord) -> VariableWord:
    """The maximal left-variable suffix of ``v``."""
    return split_star(v)[1]


# ---------------------------------------------------------------------------
# Alphabet ladders

TAIL_CONSTANT = "constant"
TAIL_ARITHMETIC = "arithmetic"


@dataclass(frozen=True)
class AlphabetLadder:
    """An increasing chain of finite alphabets with a finite description.

    ``levels`` lists the explicit alphabets; beyond them the tail rule
    applies: ``constant`` repeats the last level, ``arithmetic`` grows it
    by ``step`` fresh letter ids per level.
    """

    levels: tuple[frozenset[int], ...]
    tail: str = TAIL_CONSTANT
    step: int = 0

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(frozenset(l) for l in self.levels))
        if not self.levels:
            raise ValueError("a ladder needs at least one explicit level")
        prev: frozenset[int] = frozenset()
        for lvl in self.levels:
            if not lvl:
                raise ValueError("every level must be non-empty")
            for a in lvl:
                if not isinstance(a, int) or isinstance(a, bool) or a < 0 or a == X:
                    raise ValueError(f"invalid letter id in level: {a!r}")
            if not prev <= lvl:
                raise ValueError("levels must be increasing")
            prev = lvl
        if self.tail not in (TAIL_CONSTANT, TAIL_ARITHMETIC):
            raise ValueError(f"unknown tail rule: {self.tail!r}")
        if self.tail == TAIL_ARITHMETIC and self.step < 1:
            raise ValueError("arithmetic tail needs step >= 1")
        if self.tail == TAIL_CONSTANT and self.step != 0:
            raise ValueError("constant tail takes no step")

    def level(self, n: int) -> frozenset[int]:
        if n < 0:
            raise ValueError("level index must be non-negative")
        if n < len(self.levels):
            return self.levels[n]
        last = self.levels[-1]
        if self.tail == TAIL_CONSTANT:
            return last
        extra = (n - len(self.levels) + 1) * self.step
        top = max(last)
        return last | frozenset(range(top + 1, top + 1 + extra))

    def letters(self, n: int) -> tuple[int, ...]:
        """Level ``n`` as a sorted tuple."""
        return _ladder_letters(self, n)

    @classmethod
    def constant(cls, alphabet: int | Iterable[int]) -> "AlphabetLadder":
        """Constant ladder; an int means the alphabet {0, ..., n-1}."""
        if isinstance(alphabet, int):
            alphabet = range(alphabet)
        return cls((frozenset(alphabet),))

    @classmethod
    def from_sizes(cls, sizes: Iterable[int], tail: str = TAIL_CONSTANT,
                   step: int = 0) -> "AlphabetLadder":
        """Explicit levels {0, ..., s-1} for each size, then the tail rule."""
        levels = tuple(frozenset(range(s)) for s in sizes)
        return cls(levels, tail=tail, step=step)


@functools.lru_cache(maxsize=4096)
def _ladder_letters(ladder: AlphabetLadder, n: int) -> tuple[int, ...]:
    return tuple(sorted(ladder.level(n)))


# ---------------------------------------------------------------------------
# Sequences of variable words

class VarSeq:
    """A finite sequence of variable words, or a budget-bounded lazy stream.

    Streams carry a generator mapping an index to the item at that index;
    materialized items are cached. Any access at or beyond the budget, or
    beyond the end of a finite sequence, raises InsufficientPrefix.
    """

    __slots__ = ("_items", "_gen", "_budget")

    def __init__(self, items: Iterable[VariableWord] = (),
                 gen: Optional[Callable[[int], VariableWord]] = None,
                 budget: Optional[int] = None):
        self._items: list[VariableWord] = list(items)
        for it in self._items:
            if not isinstance(it, VariableWord):
                raise TypeError(f"sequence items must be variable words, got {it!r}")
        self._gen = gen
        if budget is None:
            budget = len(self._items) if gen is None else _DEFAULT_STREAM_BUDGET
        self._budget = budget
        if len(self._items) > self._budget:
            raise ValueError("materialized prefix exceeds the budget")

    @property
    def budget(self) -> int:
        return self._budget

    @property
    def is_finite(self) -> bool:
        return self._gen is None

    def finite_length(self) -> Optional[int]:
        return len(self._items) if self._gen is None else None

    def materialized(self) -> tuple[VariableWord, ...]:
        return tuple(self._items)

    def __getitem__(self, i: int) -> VariableWord:
        if i < 0:
            raise IndexError("negative indices are not supported")
        if i >= self._budget:
            raise InsufficientPrefix(
                f"index {i} is beyond the sequence budget {self._budget}")
        while len(self._items) <= i:
            if self._gen is None:
                raise InsufficientPrefix(
                    f"index {i} is beyond the finite sequence of length {len(self._items)}")
            item = self._gen(len(self._items))
            if not isinstance(item, VariableWord):
                raise TypeError("sequence generator must yield variable words")
            self._items.append(item)
        return self._items[i]

    def take(self, n: int) -> tuple[VariableWord, ...]:
        return tuple(self[i] for i in range(n))

    def tail(self, m: int) -> "VarSeq":
        """The sequence with the first ``m`` items dropped."""
        if m == 0:
            return self
        if self._gen is None:
            return VarSeq(self._items[m:])
        return VarSeq(gen=lambda j: self[m + j], budget=max(self._budget - m, 0))

    @classmethod
    def constant(cls, word: VariableWord,
                 budget: int = _DEFAULT_STREAM_BUDGET) -> "VarSeq":
        return cls(gen=lambda i: word, budget=budget)

    @classmethod
    def composed(cls, blocks: Iterable[VariableWord], parent: "VarSeq",
                 parent_start: int) -> "VarSeq":
        """``blocks`` followed by the tail of ``parent`` from ``parent_start``."""
        blocks = tuple(blocks)
        n = len(blocks)
        budget = max(parent.budget - parent_start + n, n)
        return cls(items=blocks,
                   gen=lambda i: parent[parent_start + (i - n)],
                   budget=budget)


def shift(s: VarSeq) -> VarSeq:
    """Re-cut a sequence so every block after the first is left variable.

    Output item 0 is s0 followed by the constant prefix of s1; item n is the
    left-variable suffix of sn followed by the constant prefix of s(n+1).
    Consumes one item of lookahead, so the result is one item shorter.
    """
    s[0], s[1]  # noqa: B018 - force the required lookahead now

    def gen(n: int) -> VariableWord:
        if n == 0:
            out = concat(s[0], star(s[1]))
        else:
            out = concat(double_star(s[n]), star(s[n + 1]))
        assert isinstance(out, VariableWord)
        return out

    return VarSeq(gen=gen, budget=max(s.budget - 1, 0))


# ---------------------------------------------------------------------------
# Text rendering

def render_word(w: WordLike) -> str:
    """Render a word: empty as the epsilon token, the variable as "x",
    letters as decimal ids, dot-separated only when some id needs it."""
    symbols = w.symbols
    if not symbols:
        return "ε"
    if all(s == X or s < 10 for s in symbols):
        return "".join("x" if s == X else str(s) for s in symbols)
    return ".".join("x" if s == X else str(s) for s in symbols)


def parse_word(text: str) -> WordLike:
    """Inverse of render_word."""
    text = text.strip()
    if text == "ε" or text == "":
        return EMPTY
    if "." in text:
        tokens = text.split(".")
    else:
        tokens = list(text)
    symbols = []
    for tok in tokens:
        if tok == "x":
            symbols.append(X)
        elif tok.isdigit():
            symbols.append(int(tok))
        else:
            raise ValueError(f"cannot parse word token {tok!r} in {text!r}")
    return make_word(symbols)

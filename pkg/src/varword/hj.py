"""Finite Hales-Jewett machinery.

Exhaustive monochromatic combinatorial-line search over a fixed dimension,
witness verification, and exact threshold computation at tiny scale by
enumerating every coloring. Colorings of the cube are arbitrary callables
on letter tuples; colors only need to be hashable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Optional

from .errors import CapExceeded
from .words import X, VariableWord, substitute

CubeColoring = Callable[[tuple[int, ...]], Hashable]


@dataclass(frozen=True)
class HJWitness:
    """A monochromatic combinatorial line: substituting any alphabet letter
    into the line yields a point of the stated color."""

    n: int
    alphabet: tuple[int, ...]
    line: VariableWord
    color: Hashable

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(self.alphabet)))
        if not self.alphabet:
            raise ValueError("the alphabet must be non-empty")
        if len(self.line) != self.n:
            raise ValueError("the line length must equal the dimension")

    def points(self) -> Iterator[tuple[int, ...]]:
        for a in self.alphabet:
            yield substitute(self.line, a).letters


def line_count(p: int, n: int) -> int:
    return (p + 1) ** n - p ** n


def line_candidates(n: int, alphabet: Iterable[int]) -> Iterator[VariableWord]:
    """All lines of the cube in lexicographic order, variable symbol first."""
    options = (X,) + tuple(sorted(alphabet))
    for symbols in itertools.product(options, repeat=n):
        if X in symbols:
            yield VariableWord(symbols)


def find_monochromatic_line(n: int, alphabet: Iterable[int], coloring: CubeColoring,
                            max_candidates: Optional[int] = None) -> Optional[HJWitness]:
    """Exhaustively search the cube for a monochromatic line.

    Returns the first witness in lexicographic line order, or None when no
    line is monochromatic. The candidate count is checked against
    ``max_candidates`` up front.
    """
    alphabet = tuple(sorted(alphabet))
    if n < 1 or not alphabet:
        raise ValueError("dimension and alphabet must be non-trivial")
    count = line_count(len(alphabet), n)
    if max_candidates is not None and count > max_candidates:
        raise CapExceeded(count, max_candidates, "candidate lines")
    for line in line_candidates(n, alphabet):
        color = coloring(substitute(line, alphabet[0]).letters)
        if all(coloring(substitute(line, a).letters) == color
               for a in alphabet[1:]):
            return HJWitness(n, alphabet, line, color)
    return None


def verify_hj_witness(witness: HJWitness, coloring: CubeColoring) -> bool:
    """Re-check a witness by recomputing every substitution."""
    if len(witness.line) != witness.n:
        return False
    return all(coloring(point) == witness.color for point in witness.points())


def word_rank(point: tuple[int, ...], alphabet: tuple[int, ...]) -> int:
    """Mixed-radix rank of a cube point in lexicographic order."""
    index = {a: i for i, a in enumerate(alphabet)}
    r = 0
    for a in point:
        r = r * len(alphabet) + index[a]
    return r


def rank_word(r: int, n: int, alphabet: tuple[int, ...]) -> tuple[int, ...]:
    digits = []
    for _ in range(n):
        r, d = divmod(r, len(alphabet))
        digits.append(alphabet[d])
    return tuple(reversed(digits))


def _alphabet_rank_maps(n: int, alphabet: tuple[int, ...]) -> list[list[int]]:
    """For each non-identity alphabet permutation, the induced map on point
    ranks: entry r is the rank of the permutation preimage of point r."""
    p = len(alphabet)
    points = list(itertools.product(alphabet, repeat=n))
    maps = []
    for perm in itertools.permutations(range(p)):
        if perm == tuple(range(p)):
            continue
        inverse = {alphabet[perm[i]]: alphabet[i] for i in range(p)}
        maps.append([word_rank(tuple(inverse[a] for a in pt), alphabet)
                     for pt in points])
    return maps


def hj_holds(p: int, q: int, n: int, max_colorings: Optional[int] = None,
             prune_symmetry: bool = False) -> bool:
    """Whether every q-coloring of the n-cube over {0..p-1} has a
    monochromatic line, decided by exhausting all colorings.

    Colorings are iterated as base-q counters over points in lexicographic
    order. Optional pruning skips colorings that are not lexicographically
    minimal in their alphabet-permutation orbit; it cannot change the answer
    because permuting letters maps lines to lines.
    """
    if p < 1 or q < 1 or n < 1:
        raise ValueError("p, q and n must be positive")
    alphabet = tuple(range(p))
    total = q ** (p ** n)
    if max_colorings is not None and total > max_colorings:
        raise CapExceeded(total, max_colorings, "colorings")
    lines = [[word_rank(pt, alphabet) for pt in
              (substitute(line, a).letters for a in alphabet)]
             for line in line_candidates(n, alphabet)]
    rank_maps = _alphabet_rank_maps(n, alphabet) if prune_symmetry else []
    for coloring in itertools.product(range(q), repeat=p ** n):
        if prune_symmetry and any(
                tuple(coloring[m[r]] for r in range(len(coloring))) < coloring
                for m in rank_maps):
            continue
        if not any(all(coloring[r] == coloring[pts[0]] for r in pts)
                   for pts in lines):
            return False
    return True


def hj_profile(p: int, q: int, n_max: int, max_colorings: Optional[int] = None,
               prune_symmetry: bool = False) -> dict[int, bool]:
    """The checked set: for each dimension up to ``n_max``, whether the
    monochromatic-line property holds for every coloring."""
    total = sum(q ** (p ** n) for n in range(1, n_max + 1))
    if max_colorings is not None and total > max_colorings:
        raise CapExceeded(total, max_colorings, "colorings")
    return {n: hj_holds(p, q, n, prune_symmetry=prune_symmetry)
            for n in range(1, n_max + 1)}


def hj_number(p: int, q: int, n_max: int, max_colorings: Optional[int] = None,
              prune_symmetry: bool = False) -> Optional[int]:
    """The least dimension at or below ``n_max`` at which every q-coloring
    admits a monochromatic line, or None when no such dimension exists.

    The property is not assumed monotone in the dimension; every dimension
    up to ``n_max`` is checked and the least passing one is reported.
    """
    profile = hj_profile(p, q, n_max, max_colorings=max_colorings,
                         prune_symmetry=prune_symmetry)
    passing = [n for n, ok in profile.items() if ok]
    return min(passing) if passing else None

"""Shared test helpers: seeded generators and the coloring corpus."""

import random

import pytest

from varword import (AlphabetLadder, VariableWord, Word, X, builtin,
                     dfa_coloring, table_coloring)

LADDER2 = AlphabetLadder.constant(2)
LADDER3 = AlphabetLadder.constant(3)
LADDER_2TO3 = AlphabetLadder((frozenset({0, 1}), frozenset({0, 1, 2})))


def random_variable_word(rng, max_len=8, letters=(0, 1, 2)):
    length = rng.randint(1, max_len)
    symbols = [rng.choice((X,) + tuple(letters)) for _ in range(length)]
    symbols[rng.randrange(length)] = X
    return VariableWord(tuple(symbols))


def random_word(rng, max_len=6, letters=(0, 1, 2)):
    length = rng.randint(0, max_len)
    return Word(tuple(rng.choice(letters) for _ in range(length)))


def random_span_element(rng, window, levels):
    """One element of the reduced variable span of the window."""
    while True:
        symbols = [rng.choice((X,) + tuple(sorted(lv))) for lv in levels]
        if X in symbols:
            break
    out = []
    for block, sym in zip(window, symbols):
        out.extend(sym if t == X else t for t in block.symbols)
    return VariableWord(tuple(out))


def random_extracted_element(rng, window, levels):
    """One element of the extracted variable span of the window."""
    while True:
        chosen = [j for j in range(len(window)) if rng.random() < 0.7]
        if chosen:
            break
    while True:
        symbols = [rng.choice((X,) + tuple(sorted(levels[j]))) for j in chosen]
        if X in symbols:
            break
    out = []
    for j, sym in zip(chosen, symbols):
        out.extend(sym if t == X else t for t in window[j].symbols)
    return VariableWord(tuple(out))


def build_corpus():
    """Deterministic corpus of (name, coloring, ladder) triples: builtin
    families, random small DFAs, and random prefix tables with horizon 6."""
    rng = random.Random(20250810)
    corpus = []
    for q in (2, 3):
        corpus.append((f"length-mod-{q}", builtin("length-mod", q), LADDER2))
        corpus.append((f"length-mod-{q}-L3", builtin("length-mod", q), LADDER3))
    corpus.append(("last-letter-2", builtin("last-letter", (0, 1)), LADDER2))
    corpus.append(("last-letter-3", builtin("last-letter", (0, 1, 2)), LADDER3))
    corpus.append(("last-letter-2to3", builtin("last-letter", (0, 1, 2)), LADDER_2TO3))
    for letter in (0, 1):
        for q in (2, 3):
            corpus.append((f"count-{letter}-mod-{q}",
                           builtin("letter-count-mod", letter, q), LADDER2))
    corpus.append(("constant", builtin("constant"), LADDER2))
    for i in range(20):
        states = rng.randint(2, 4)
        if i % 2 == 0:
            alphabet, ladder = (0, 1), LADDER2
        else:
            alphabet, ladder = (0, 1, 2), LADDER3
        q = rng.choice((2, 3))
        transitions = {(s, a): rng.randrange(states)
                       for s in range(states) for a in alphabet}
        colors = [rng.randint(1, q) for _ in range(states)]
        colors[rng.randrange(states)] = q
        corpus.append((f"dfa-{i}", dfa_coloring(states, alphabet, transitions, colors),
                       ladder))
    for i in range(20):
        if i % 2 == 0:
            alphabet, ladder = (0, 1), LADDER2
        else:
            alphabet, ladder = (0, 1, 2), LADDER3
        q = rng.choice((2, 3))
        entries = {}
        for _ in range(rng.randint(3, 8)):
            length = rng.randint(0, 3)
            word = Word(tuple(rng.choice(alphabet) for _ in range(length)))
            entries[word] = rng.randint(1, q)
        corpus.append((f"table-{i}", table_coloring(entries, 6, 1), ladder))
    return corpus


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()

"""Monochromatic-structure certificates and their independent verifiers.

A certificate carries everything needed to re-check its claim by plain
enumeration: the ladder, the blocks, the color and the coloring itself.
Verifiers never trust the emitting search. Documents are canonical text,
so identical certificates serialize to identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .coloring import (ColoringOracle, coloring_from_sections,
                       coloring_sections)
from .docio import format_sections, parse_sections
from .errors import CapExceeded, ParseError
from .words import (TAIL_ARITHMETIC, TAIL_CONSTANT, X, AlphabetLadder,
                    VariableWord, parse_word, render_word, substitute)


@dataclass(frozen=True)
class CSCertificate:
    """Blocks whose left-to-right products over the ladder levels are all of
    one color; every block after the first is a left variable word."""

    ladder: AlphabetLadder
    depth: int
    words: tuple[VariableWord, ...]
    color: int
    coloring: ColoringOracle
    mode: str
    budget: int
    checked: int = 0


@dataclass(frozen=True)
class CarlsonCertificate:
    """Blocks whose products along every non-empty increasing subset of
    positions, with letters from the level of each chosen position, are all
    of one color."""

    ladder: AlphabetLadder
    depth: int
    words: tuple[VariableWord, ...]
    color: int
    coloring: ColoringOracle
    mode: str
    budget: int
    checked: int = 0


@dataclass(frozen=True)
class HJCertificate:
    """A monochromatic combinatorial line for a fixed-dimension coloring."""

    n: int
    alphabet: tuple[int, ...]
    line: VariableWord
    color: int
    coloring: ColoringOracle
    mode: str = "direct"
    budget: int = 0


Certificate = CSCertificate | CarlsonCertificate | HJCertificate


def cs_product_count(ladder: AlphabetLadder, depth: int) -> int:
    total = 0
    prod = 1
    for n in range(depth + 1):
        prod *= len(ladder.level(n))
        total += prod
    return total


def carlson_product_count(ladder: AlphabetLadder, depth: int) -> int:
    prod = 1
    for n in range(depth + 1):
        prod *= len(ladder.level(n)) + 1
    return prod - 1


def verify_cs_certificate(cert: CSCertificate,
                          coloring: Optional[ColoringOracle] = None,
                          cap: int = 10_000_000) -> bool:
    """Enumerate every prefix product and compare its color; also checks
    the left-variable condition on every block after the first."""
    coloring = coloring or cert.coloring
    if len(cert.words) != cert.depth + 1:
        return False
    if any(not isinstance(w, VariableWord) for w in cert.words):
        return False
    if any(not w.is_left_variable for w in cert.words[1:]):
        return False
    count = cs_product_count(cert.ladder, cert.depth)
    if count > cap:
        raise CapExceeded(count, cap, "certificate products")
    prefixes: list[tuple[int, ...]] = [()]
    for n, block in enumerate(cert.words):
        letters = cert.ladder.letters(n)
        prefixes = [p + tuple(a if s == X else s for s in block.symbols)
                    for p in prefixes for a in letters]
        for p in prefixes:
            if coloring.evaluate_letters(p) != cert.color:
                return False
    return True


def verify_carlson_certificate(cert: CarlsonCertificate,
                               coloring: Optional[ColoringOracle] = None,
                               cap: int = 10_000_000) -> bool:
    """Enumerate the products of every non-empty increasing subset of block
    positions and compare their colors."""
    coloring = coloring or cert.coloring
    if len(cert.words) != cert.depth + 1:
        return False
    if any(not isinstance(w, VariableWord) for w in cert.words):
        return False
    count = carlson_product_count(cert.ladder, cert.depth)
    if count > cap:
        raise CapExceeded(count, cap, "certificate products")
    partial: list[tuple[int, ...]] = [()]
    for n, block in enumerate(cert.words):
        letters = cert.ladder.letters(n)
        extended = [p + tuple(a if s == X else s for s in block.symbols)
                    for p in partial for a in letters]
        for p in extended:
            if coloring.evaluate_letters(p) != cert.color:
                return False
        partial.extend(extended)
    return True


def verify_hj_certificate(cert: HJCertificate,
                          coloring: Optional[ColoringOracle] = None) -> bool:
    coloring = coloring or cert.coloring
    if len(cert.line) != cert.n:
        return False
    return all(coloring.evaluate(substitute(cert.line, a)) == cert.color
               for a in cert.alphabet)


def verify_certificate(cert: Certificate,
                       coloring: Optional[ColoringOracle] = None,
                       cap: int = 10_000_000) -> bool:
    if isinstance(cert, CSCertificate):
        return verify_cs_certificate(cert, coloring, cap)
    if isinstance(cert, CarlsonCertificate):
        return verify_carlson_certificate(cert, coloring, cap)
    return verify_hj_certificate(cert, coloring)


# ---------------------------------------------------------------------------
# Documents

def _ladder_rows(ladder: AlphabetLadder) -> list[tuple[str, str]]:
    levels = " | ".join(" ".join(str(a) for a in sorted(lvl))
                        for lvl in ladder.levels)
    rows = [("levels", levels)]
    if ladder.tail == TAIL_ARITHMETIC:
        rows.append(("tail", f"arithmetic {ladder.step}"))
    else:
        rows.append(("tail", "constant"))
    return rows


def _parse_ladder(section) -> AlphabetLadder:
    levels = []
    for chunk in section.require("levels").split("|"):
        try:
            levels.append(frozenset(int(t) for t in chunk.split()))
        except ValueError:
            raise ParseError("malformed ladder levels", section.line) from None
    tail_text = section.get("tail", "constant").split()
    if tail_text[0] == "constant":
        tail, step = TAIL_CONSTANT, 0
    elif tail_text[0] == "arithmetic" and len(tail_text) == 2:
        tail, step = TAIL_ARITHMETIC, int(tail_text[1])
    else:
        raise ParseError(f"unknown tail rule {' '.join(tail_text)!r}", section.line)
    try:
        return AlphabetLadder(tuple(levels), tail=tail, step=step)
    except ValueError as exc:
        raise ParseError(str(exc), section.line) from None


def save_certificate(cert: Certificate) -> str:
    head: list[tuple[str, str]] = []
    sections: list[tuple[str, list[tuple[str, str]]]] = []
    if isinstance(cert, HJCertificate):
        head = [("kind", "hj"), ("n", str(cert.n)),
                ("alphabet", " ".join(str(a) for a in cert.alphabet)),
                ("color", str(cert.color)), ("mode", cert.mode),
                ("budget", str(cert.budget))]
        sections.append(("certificate", head))
        sections.append(("words", [("line", render_word(cert.line))]))
    else:
        kind = "cs" if isinstance(cert, CSCertificate) else "carlson"
        head = [("kind", kind), ("depth", str(cert.depth)),
                ("color", str(cert.color)), ("mode", cert.mode),
                ("budget", str(cert.budget)), ("checked", str(cert.checked))]
        sections.append(("certificate", head))
        sections.append(("ladder", _ladder_rows(cert.ladder)))
        sections.append(("words", [(f"w{i}", render_word(w))
                                   for i, w in enumerate(cert.words)]))
    sections.extend(coloring_sections(cert.coloring))
    return format_sections(sections)


def load_certificate(text: str) -> Certificate:
    sections = parse_sections(text)
    if not sections or sections[0].name != "certificate":
        line = sections[0].line if sections else 1
        raise ParseError("expected a [certificate] section first", line)
    head = sections[0]
    kind = head.require("kind")
    color = int(head.require("color"))
    mode = head.get("mode", "direct")
    budget = int(head.get("budget", "0"))
    by_name = {}
    coloring_start = None
    for i, section in enumerate(sections[1:], start=1):
        if section.name == "coloring":
            coloring_start = i
            break
        by_name[section.name] = section
    if coloring_start is None:
        raise ParseError("missing [coloring] section", head.line)
    coloring = coloring_from_sections(sections[coloring_start:])

    def words_rows():
        section = by_name.get("words")
        if section is None:
            raise ParseError("missing [words] section", head.line)
        return section

    if kind == "hj":
        n = int(head.require("n"))
        alphabet = tuple(int(t) for t in head.require("alphabet").split())
        section = words_rows()
        line_text = section.require("line")
        word = parse_word(line_text)
        if not isinstance(word, VariableWord):
            raise ParseError("the line must be a variable word", section.line)
        return HJCertificate(n, alphabet, word, color, coloring, mode, budget)
    if kind not in ("cs", "carlson"):
        raise ParseError(f"unknown certificate kind {kind!r}", head.line)
    depth = int(head.require("depth"))
    checked = int(head.get("checked", "0"))
    ladder_section = by_name.get("ladder")
    if ladder_section is None:
        raise ParseError("missing [ladder] section", head.line)
    ladder = _parse_ladder(ladder_section)
    section = words_rows()
    words = []
    for i in range(depth + 1):
        text_i = section.get(f"w{i}")
        if text_i is None:
            raise ParseError(f"missing word w{i}", section.line)
        word = parse_word(text_i)
        if not isinstance(word, VariableWord):
            raise ParseError(f"w{i} must be a variable word", section.line)
        words.append(word)
    cls = CSCertificate if kind == "cs" else CarlsonCertificate
    return cls(ladder, depth, tuple(words), color, coloring, mode, budget, checked)

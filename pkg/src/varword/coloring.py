"""Finite colorings of constant words.

A coloring oracle is a pure total map from words to colors 1..q together
with a serializable source description. Sources are builtin families,
prefix tables with a horizon, complete DFAs, or mixed-radix products.
Oracles are immutable after construction; concurrent evaluation is safe.

Hot paths evaluate on raw letter tuples via ``evaluate_letters``;
``evaluate`` is the word-level wrapper.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

from .docio import Section, format_sections, parse_sections
from .errors import IncompleteTable, ParseError, UnknownName
from .words import Word, parse_word, render_word

Letters = tuple[int, ...]


@dataclass(frozen=True)
class BuiltinSpec:
    name: str
    args: tuple


@dataclass(frozen=True)
class TableSpec:
    entries: tuple[tuple[Letters, int], ...]
    horizon: int
    default: int


@dataclass(frozen=True)
class DfaSpec:
    states: int
    start: int
    alphabet: tuple[int, ...]
    transitions: tuple[tuple[int, int, int], ...]
    colors: tuple[int, ...]


@dataclass(frozen=True)
class ProductSpec:
    parts: tuple


SourceSpec = Union[BuiltinSpec, TableSpec, DfaSpec, ProductSpec]


@dataclass(frozen=True)
class ColoringOracle:
    q: int
    evaluate_letters: Callable[[Letters], int]
    source: SourceSpec

    def evaluate(self, w: Word) -> int:
        return self.evaluate_letters(w.letters)

    def __hash__(self):
        return hash(self.source)

    def __eq__(self, other):
        return isinstance(other, ColoringOracle) and self.source == other.source


BUILTIN_NAMES = ("constant", "length-mod", "last-letter", "letter-count-mod")


def builtin(name: str, *args) -> ColoringOracle:
    """Construct a named builtin coloring.

    constant: q = 1.
    length-mod(q): 1 + (length mod q).
    last-letter(alphabet, empty_color=1): position of the last letter in the
      alphabet, 1-based; the empty word and unknown letters get empty_color.
    letter-count-mod(letter, q): 1 + (occurrences of letter, mod q).
    """
    if name == "constant":
        if args:
            raise UnknownName("constant takes no arguments")
        return ColoringOracle(1, lambda ls: 1, BuiltinSpec(name, ()))
    if name == "length-mod":
        (q,) = args
        q = int(q)
        if q < 1:
            raise UnknownName("length-mod needs a positive modulus")
        return ColoringOracle(q, lambda ls: 1 + len(ls) % q,
                              BuiltinSpec(name, (q,)))
    if name == "last-letter":
        alphabet = tuple(sorted(int(a) for a in args[0]))
        empty_color = int(args[1]) if len(args) > 1 else 1
        if not alphabet:
            raise UnknownName("last-letter needs a non-empty alphabet")
        q = len(alphabet)
        if not 1 <= empty_color <= q:
            raise UnknownName("empty color out of range")
        index = {a: i + 1 for i, a in enumerate(alphabet)}

        def ev(ls: Letters) -> int:
            if not ls:
                return empty_color
            return index.get(ls[-1], empty_color)

        return ColoringOracle(q, ev, BuiltinSpec(name, (alphabet, empty_color)))
    if name == "letter-count-mod":
        letter, q = int(args[0]), int(args[1])
        if q < 1:
            raise UnknownName("letter-count-mod needs a positive modulus")
        return ColoringOracle(q, lambda ls: 1 + ls.count(letter) % q,
                              BuiltinSpec(name, (letter, q)))
    raise UnknownName(f"unknown builtin coloring {name!r}")


def table_coloring(entries: Mapping[Word, int] | Iterable[tuple[Word, int]],
                   horizon: int, default: int) -> ColoringOracle:
    """Prefix-table coloring: the longest entry that is a prefix of the word
    decides its color; anything else, and every word longer than the
    horizon, gets the default color."""
    items = entries.items() if isinstance(entries, Mapping) else entries
    canon = tuple(sorted(((w.letters, int(c)) for w, c in items),
                         key=lambda e: (len(e[0]), e[0])))
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    colors = [c for _, c in canon] + [default]
    q = max(colors)
    if min(colors) < 1:
        raise ValueError("colors must be positive")
    by_len = sorted(canon, key=lambda e: -len(e[0]))

    def ev(ls: Letters) -> int:
        if len(ls) > horizon:
            return default
        for prefix, color in by_len:
            if ls[:len(prefix)] == prefix:
                return color
        return default

    return ColoringOracle(q, ev, TableSpec(canon, horizon, default))


def dfa_coloring(states: int, alphabet: Iterable[int],
                 transitions: Mapping[tuple[int, int], int],
                 colors: Sequence[int], start: int = 0) -> ColoringOracle:
    """DFA coloring: the color of the state reached reading the word."""
    alphabet = tuple(sorted(set(int(a) for a in alphabet)))
    colors = tuple(int(c) for c in colors)
    if states < 1 or len(colors) != states:
        raise ValueError("one color per state is required")
    if not 0 <= start < states:
        raise ValueError("start state out of range")
    if min(colors) < 1:
        raise ValueError("colors must be positive")
    table: dict[tuple[int, int], int] = {}
    for state in range(states):
        for a in alphabet:
            if (state, a) not in transitions:
                raise IncompleteTable(f"missing transition ({state}, {a})")
            nxt = int(transitions[(state, a)])
            if not 0 <= nxt < states:
                raise ValueError(f"transition target out of range: {nxt}")
            table[(state, a)] = nxt
    canon = tuple(sorted((s, a, t) for (s, a), t in table.items()))
    q = max(colors)

    def ev(ls: Letters) -> int:
        state = start
        for a in ls:
            nxt = table.get((state, a))
            if nxt is None:
                raise IncompleteTable(f"letter {a} is outside the DFA alphabet")
            state = nxt
        return colors[state]

    return ColoringOracle(q, ev, DfaSpec(states, start, alphabet, canon, colors))


def product_coloring(*oracles: ColoringOracle) -> ColoringOracle:
    """Mixed-radix product; component colors recoverable via decode_product.
    Nested products are flattened (the encoding is associative)."""
    parts: list[ColoringOracle] = []
    for oracle in oracles:
        if isinstance(oracle.source, ProductSpec):
            parts.extend(_component_oracles(oracle))
        else:
            parts.append(oracle)
    if not parts:
        raise ValueError("a product needs at least one component")
    q = 1
    for part in parts:
        q *= part.q
    evaluators = [p.evaluate_letters for p in parts]
    qs = [p.q for p in parts]

    def ev(ls: Letters) -> int:
        code = 0
        for f, pq in zip(evaluators, qs):
            code = code * pq + (f(ls) - 1)
        return 1 + code

    return ColoringOracle(q, ev, ProductSpec(tuple(p.source for p in parts)))


def _component_oracles(oracle: ColoringOracle) -> list[ColoringOracle]:
    assert isinstance(oracle.source, ProductSpec)
    return [_from_spec(s) for s in oracle.source.parts]


def decode_product(oracle: ColoringOracle, color: int) -> tuple[int, ...]:
    """Component colors of a product color."""
    if not isinstance(oracle.source, ProductSpec):
        raise ValueError("not a product coloring")
    qs = [_from_spec(s).q for s in oracle.source.parts]
    code = color - 1
    out = []
    for pq in reversed(qs):
        code, d = divmod(code, pq)
        out.append(d + 1)
    return tuple(reversed(out))


def _from_spec(spec: SourceSpec) -> ColoringOracle:
    if isinstance(spec, BuiltinSpec):
        return builtin(spec.name, *spec.args)
    if isinstance(spec, TableSpec):
        entries = [(Word(ls), c) for ls, c in spec.entries]
        return table_coloring(entries, spec.horizon, spec.default)
    if isinstance(spec, DfaSpec):
        transitions = {(s, a): t for s, a, t in spec.transitions}
        return dfa_coloring(spec.states, spec.alphabet, transitions,
                            spec.colors, start=spec.start)
    if isinstance(spec, ProductSpec):
        return product_coloring(*[_from_spec(s) for s in spec.parts])
    raise TypeError(f"unknown source spec {spec!r}")


# ---------------------------------------------------------------------------
# Documents

def _builtin_body(spec: BuiltinSpec) -> list[tuple[str, str]]:
    rows = [("name", spec.name)]
    if spec.name == "length-mod":
        rows.append(("modulus", str(spec.args[0])))
    elif spec.name == "last-letter":
        rows.append(("alphabet", " ".join(str(a) for a in spec.args[0])))
        rows.append(("empty-color", str(spec.args[1])))
    elif spec.name == "letter-count-mod":
        rows.append(("letter", str(spec.args[0])))
        rows.append(("modulus", str(spec.args[1])))
    return rows


def _body_sections(spec: SourceSpec) -> list[tuple[str, list[tuple[str, str]]]]:
    if isinstance(spec, BuiltinSpec):
        return [("builtin", _builtin_body(spec))]
    if isinstance(spec, TableSpec):
        rows = [("horizon", str(spec.horizon)), ("default", str(spec.default))]
        for letters, color in spec.entries:
            rows.append((f"entry {render_word(Word(letters))}", str(color)))
        return [("table", rows)]
    if isinstance(spec, DfaSpec):
        rows = [("states", str(spec.states)), ("start", str(spec.start)),
                ("alphabet", " ".join(str(a) for a in spec.alphabet))]
        for s, a, t in spec.transitions:
            rows.append((f"trans {s} {a}", str(t)))
        for s, c in enumerate(spec.colors):
            rows.append((f"color {s}", str(c)))
        return [("dfa", rows)]
    if isinstance(spec, ProductSpec):
        out: list[tuple[str, list[tuple[str, str]]]] = []
        for part in spec.parts:
            out.extend(_body_sections(part))
        return out
    raise TypeError(f"unknown source spec {spec!r}")


def coloring_sections(oracle: ColoringOracle) -> list[tuple[str, list[tuple[str, str]]]]:
    spec = oracle.source
    kind = {BuiltinSpec: "builtin", TableSpec: "table",
            DfaSpec: "dfa", ProductSpec: "product"}[type(spec)]
    head = [("kind", kind), ("q", str(oracle.q))]
    if isinstance(spec, ProductSpec):
        head.append(("components", str(len(spec.parts))))
    return [("coloring", head)] + _body_sections(spec)


def save_coloring(oracle: ColoringOracle) -> str:
    return format_sections(coloring_sections(oracle))


_KNOWN_SECTIONS = {"coloring", "builtin", "table", "dfa"}


def _parse_int(value: str, line: int, what: str = "integer") -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"expected an {what}, got {value!r}", line) from None


def _parse_builtin(section: Section) -> ColoringOracle:
    name = section.require("name")
    try:
        if name == "constant":
            return builtin("constant")
        if name == "length-mod":
            return builtin("length-mod",
                           _parse_int(section.require("modulus"), section.line))
        if name == "last-letter":
            alphabet = [_parse_int(t, section.line)
                        for t in section.require("alphabet").split()]
            empty = _parse_int(section.get("empty-color", "1"), section.line)
            return builtin("last-letter", alphabet, empty)
        if name == "letter-count-mod":
            return builtin("letter-count-mod",
                           _parse_int(section.require("letter"), section.line),
                           _parse_int(section.require("modulus"), section.line))
    except UnknownName as exc:
        raise ParseError(str(exc), section.line) from None
    raise ParseError(f"unknown builtin name {name!r}", section.line)


def _parse_table(section: Section) -> ColoringOracle:
    horizon = _parse_int(section.require("horizon"), section.line)
    default = _parse_int(section.require("default"), section.line)
    entries = []
    for text, value, line in section.rows("entry"):
        try:
            word = parse_word(text)
        except ValueError as exc:
            raise ParseError(str(exc), line) from None
        if not isinstance(word, Word):
            raise ParseError("table entries must be constant words", line)
        entries.append((word, _parse_int(value, line)))
    return table_coloring(entries, horizon, default)


def _parse_dfa(section: Section) -> ColoringOracle:
    states = _parse_int(section.require("states"), section.line)
    start = _parse_int(section.get("start", "0"), section.line)
    alphabet = [_parse_int(t, section.line)
                for t in section.require("alphabet").split()]
    transitions = {}
    for text, value, line in section.rows("trans"):
        try:
            s, a = (int(t) for t in text.split())
        except ValueError:
            raise ParseError("expected 'trans STATE LETTER = STATE'", line) from None
        transitions[(s, a)] = _parse_int(value, line)
    colors = [0] * states
    for text, value, line in section.rows("color"):
        s = _parse_int(text, line, "state")
        if not 0 <= s < states:
            raise ParseError(f"state {s} out of range", line)
        colors[s] = _parse_int(value, line)
    if 0 in colors:
        raise ParseError("every state needs a color row", section.line)
    try:
        return dfa_coloring(states, alphabet, transitions, colors, start=start)
    except (IncompleteTable, ValueError) as exc:
        raise ParseError(str(exc), section.line) from None


def load_coloring(text: str) -> ColoringOracle:
    sections = parse_sections(text)
    return coloring_from_sections(sections)


def coloring_from_sections(sections: list[Section]) -> ColoringOracle:
    if not sections or sections[0].name != "coloring":
        line = sections[0].line if sections else 1
        raise ParseError("expected a [coloring] section first", line)
    for section in sections:
        if section.name not in _KNOWN_SECTIONS:
            raise ParseError(f"unknown section [{section.name}]", section.line)
    head = sections[0]
    kind = head.require("kind")
    declared_q = _parse_int(head.require("q"), head.line)
    bodies = sections[1:]
    parsers = {"builtin": _parse_builtin, "table": _parse_table, "dfa": _parse_dfa}
    if kind == "product":
        count = _parse_int(head.require("components"), head.line)
        if len(bodies) != count:
            raise ParseError(f"expected {count} component sections", head.line)
        oracle = product_coloring(*[parsers[b.name](b) for b in bodies])
    elif kind in parsers:
        if len(bodies) != 1 or bodies[0].name != kind:
            raise ParseError(f"expected exactly one [{kind}] section", head.line)
        oracle = parsers[kind](bodies[0])
    else:
        raise ParseError(f"unknown coloring kind {kind!r}", head.line)
    if oracle.q != declared_q:
        raise ParseError(f"declared q = {declared_q} but the source has q = {oracle.q}",
                         head.line)
    return oracle

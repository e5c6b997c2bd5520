"""Certificate extraction engines.

Two engines, each in two modes. Direct mode is an exhaustive backtracking
search over candidate block tuples in enumeration order under a length
budget; it is the workhorse and is complete for the lengths it visits.
Proof-guided mode follows the largeness argument: refine the color classes
to one that certifies large, repeatedly split off a block through the
quotient step, reindex the nested streams, and assemble the certificate
blocks from products that the class provably absorbs.

Every certificate emitted by either mode is re-verified by enumeration
before being returned; the searches are advisory, the verifier is the
authority. Failure is always BudgetExhausted, never a nonexistence claim.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

from .certificates import (CarlsonCertificate, CSCertificate,
                           carlson_product_count, cs_product_count,
                           verify_carlson_certificate, verify_cs_certificate)
from .coloring import ColoringOracle
from .errors import BudgetExhausted, CapExceeded, InsufficientPrefix
from .hj import find_monochromatic_line
from .largeness import (DEFAULT_BUDGET, Budget, Cuts, FusionStep,
                        LargenessEvidence, Meter, ProbeMode, Prober,
                        RefineResult, SetOracle, Verdict, color_class,
                        ef_quotient, fusion_reindex, intersect_sets,
                        one_mono_word, refine_candidates)
from .spans import SpanKind, SpanQuery, enumerate_span
from .words import (X, AlphabetLadder, VariableWord, VarSeq, Word,
                    concat_all, star, substitute, x_word)

MODE_DIRECT = "direct"
MODE_PROOF_GUIDED = "proof-guided"


@dataclass(frozen=True)
class PipelineStep:
    """One quotient step: a block in the span of the consumed stream prefix,
    the words it pins, and a narrower stream on which the quotient set
    certifies large at the advanced level."""

    m: int
    word: VariableWord
    stream: VarSeq
    quotient_words: tuple[Word, ...]
    k_next: int
    cuts: Cuts
    prefix: tuple[VariableWord, ...]
    pair_index: int
    evidence: LargenessEvidence


def _substituted_symbols(block: VariableWord, a: int) -> tuple[int, ...]:
    return tuple(a if s == X else s for s in block.symbols)


def _compose(blocks: Sequence[VariableWord], letters: Sequence[int],
             tail: Optional[VariableWord] = None) -> tuple[int, ...]:
    symbols: list[int] = []
    for block, a in zip(blocks, letters):
        symbols.extend(_substituted_symbols(block, a))
    if tail is not None:
        symbols.extend(tail.symbols)
    return tuple(symbols)


def _line_to_word(stream: VarSeq, start: int, line: VariableWord) -> VariableWord:
    """Map a line over cube positions to the word it denotes over the
    stream blocks at those positions."""
    symbols: list[int] = []
    for j, b in enumerate(line.symbols):
        block = stream[start + j]
        symbols.extend(block.symbols if b == X else _substituted_symbols(block, b))
    return VariableWord(tuple(symbols))


def _least_cover(word: VariableWord, s: VarSeq, k: int, ladder: AlphabetLadder,
                 limit: int) -> int:
    """The least window count such that ``word`` lies in the extracted
    variable span of that many initial stream items."""
    from .spans import _extracted_parse  # shared matcher
    for end in range(limit):
        window = [s[i] for i in range(end + 1)]
        levels = [ladder.level(k + i) for i in range(end + 1)]
        if _extracted_parse(word.symbols, window, levels, must_use_last=True):
            return end + 1
    raise BudgetExhausted("prefix concatenation did not parse within the window limit")


def _pair_family(prefix_query: SpanQuery, line_query: SpanQuery,
                 cap: int) -> list[tuple[Word, VariableWord]]:
    us = list(enumerate_span(prefix_query, cap=cap))
    ys = list(enumerate_span(line_query, cap=cap))
    return [(u, y) for u in us for y in ys]


def cs_step(E: SetOracle, s: VarSeq, k: int, ladder: AlphabetLadder,
            budget: Optional[Budget] = None,
            meter: Optional[Meter] = None) -> Optional[PipelineStep]:
    """Split one block off the stream for the reduced, shifted notion.

    Returns None when the probe refutes largeness at bounded depth; raises
    BudgetExhausted when no verdict fits the budget. On success the
    quotient of the set by the returned words certifies large on the
    returned stream at level k + m.
    """
    meter = meter or Meter(budget or DEFAULT_BUDGET)
    prober = Prober(E, s, k, ladder, ProbeMode.REDUCED_SHIFTED, meter)
    evidence = prober.run()
    while True:
        if evidence.verdict is Verdict.COUNTEREXAMPLE_PREFIX:
            return None
        if evidence.verdict is Verdict.BUDGET_EXHAUSTED:
            raise BudgetExhausted("probe could not certify the precondition")
        prefix = tuple(prober.prefix)
        cover = prober.end
        base = ladder.letters(k)
        regrown = False
        for dim in range(1, meter.budget.max_line_dim + 1):
            m = cover + dim
            try:
                anchor_letter = min(ladder.level(k + m))
                anchor = VariableWord(
                    _substituted_symbols(s[m], anchor_letter) + s[m + 1].symbols)
            except InsufficientPrefix:
                raise BudgetExhausted("stream too short for the line stage") from None
            table: dict[tuple[int, ...], tuple] = {}
            refuting = None
            for point in itertools.product(base, repeat=dim):
                symbols: list[int] = []
                for j, b in enumerate(point):
                    symbols.extend(_substituted_symbols(s[cover + j], b))
                extension = VariableWord(tuple(symbols) + anchor.symbols)
                witness = prober.good_witness(extension)
                if witness is None:
                    refuting = (extension, (cover, m + 2))
                    break
                table[point] = witness
            if refuting is not None:
                prober.grow(*refuting)
                evidence = prober.run()
                regrown = True
                break
            found = find_monochromatic_line(
                dim, base, lambda p: table[p],
                max_candidates=meter.budget.max_candidates)
            if found is None:
                continue
            line_word = _line_to_word(s, cover, found.line)
            prefix_query = SpanQuery(
                prefix, tuple(ladder.level(k + i) for i in range(len(prefix))),
                SpanKind.REDUCED_CONSTANT)
            line_query = SpanQuery(
                tuple(s[cover + j] for j in range(dim)),
                (frozenset(base),) * dim, SpanKind.REDUCED_VARIABLE)
            try:
                pairs = _pair_family(prefix_query, line_query,
                                     meter.budget.max_span)
            except CapExceeded as exc:
                raise BudgetExhausted(str(exc)) from None
            chosen = Word(_compose(prefix, found.color))
            first = next(i for i, (u, y) in enumerate(pairs)
                         if u == chosen and y == line_word)
            order = [first] + [i for i in range(len(pairs)) if i != first]
            parts = []
            for i in order:
                u, y = pairs[i]
                words = tuple(Word(u.letters + substitute(y, a).letters)
                              for a in base)
                parts.append(ef_quotient(E, words))
            for result in refine_candidates(parts, s.tail(m), k + m, ladder,
                                            ProbeMode.REDUCED_SHIFTED, meter):
                pair_index = order[result.index]
                u, y = pairs[pair_index]
                word = VariableWord(u.letters + y.symbols)
                quotient_words = tuple(
                    Word(u.letters + substitute(y, a).letters) for a in base)
                return PipelineStep(m, word, result.stream, quotient_words,
                                    k + m, result.cuts, prefix, pair_index,
                                    result.evidence)
            raise BudgetExhausted("no pair quotient certified large")
        if not regrown:
            raise BudgetExhausted("no monochromatic line within the dimension budget")


def carlson_step(E: SetOracle, s: VarSeq, k: int, ladder: AlphabetLadder,
                 budget: Optional[Budget] = None,
                 meter: Optional[Meter] = None) -> Optional[PipelineStep]:
    """Split one block off the stream for the extracted notion.

    Like cs_step but with extracted spans, a fully substituted anchor word
    found by the monochromatic-word search, and the quotient intersected
    with the set itself.
    """
    meter = meter or Meter(budget or DEFAULT_BUDGET)
    prober = Prober(E, s, k, ladder, ProbeMode.EXTRACTED, meter)
    evidence = prober.run()
    while True:
        if evidence.verdict is Verdict.COUNTEREXAMPLE_PREFIX:
            return None
        if evidence.verdict is Verdict.BUDGET_EXHAUSTED:
            raise BudgetExhausted("probe could not certify the precondition")
        prefix = tuple(prober.prefix)
        cover = _least_cover(concat_all(prefix), s, k, ladder, prober.end)
        base = ladder.letters(k)
        regrown = False
        for dim in range(1, meter.budget.max_line_dim + 1):
            m = cover + dim
            anchor_m, anchor = one_mono_word(E, s.tail(m), k + m, ladder,
                                             meter=meter)
            table = {}
            refuting = None
            for point in itertools.product(base, repeat=dim):
                symbols: list[int] = []
                for j, b in enumerate(point):
                    symbols.extend(_substituted_symbols(s[cover + j], b))
                extension = VariableWord(tuple(symbols) + anchor.symbols)
                witness = prober.good_witness(extension)
                if witness is None:
                    refuting = (extension, (cover, m + anchor_m + 1))
                    break
                table[point] = witness
            if refuting is not None:
                prober.grow(*refuting)
                evidence = prober.run()
                regrown = True
                break
            found = find_monochromatic_line(
                dim, base, lambda p: table[p],
                max_candidates=meter.budget.max_candidates)
            if found is None:
                continue
            line_word = _line_to_word(s, cover, found.line)
            prefix_query = SpanQuery(
                prefix, tuple(ladder.level(k + i) for i in range(len(prefix))),
                SpanKind.EXTRACTED_CONSTANT)
            line_query = SpanQuery(
                tuple(s[cover + j] for j in range(dim)),
                (frozenset(base),) * dim, SpanKind.REDUCED_VARIABLE)
            try:
                pairs = _pair_family(prefix_query, line_query,
                                     meter.budget.max_span)
            except CapExceeded as exc:
                raise BudgetExhausted(str(exc)) from None
            hj_u, hj_a = found.color
            first = next(i for i, (u, y) in enumerate(pairs)
                         if u == hj_u and y == line_word)
            order = [first] + [i for i in range(len(pairs)) if i != first]
            parts = []
            for i in order:
                u, y = pairs[i]
                words = tuple(Word(u.letters + substitute(y, a).letters)
                              for a in base)
                parts.append(intersect_sets(E, ef_quotient(E, words)))
            for result in refine_candidates(parts, s.tail(m), k + m, ladder,
                                            ProbeMode.EXTRACTED, meter):
                pair_index = order[result.index]
                u, y = pairs[pair_index]
                word = VariableWord(u.letters + y.symbols)
                quotient_words = tuple(
                    Word(u.letters + substitute(y, a).letters) for a in base)
                return PipelineStep(m, word, result.stream, quotient_words,
                                    k + m, result.cuts, prefix, pair_index,
                                    result.evidence)
            raise BudgetExhausted("no pair quotient certified large")
        if not regrown:
            raise BudgetExhausted("no monochromatic line within the dimension budget")


# ---------------------------------------------------------------------------
# Direct mode

def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Compositions of ``total`` into ``parts`` positive parts, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _block_candidates(ladder: AlphabetLadder, start: int, length: int,
                      left_variable: bool) -> Iterator[tuple[int, ...]]:
    """Symbol tuples for a block occupying ladder positions start..start+len-1,
    variable symbol first at every position, containing it at least once."""
    opts = []
    for j in range(length):
        letters = ladder.letters(start + j)
        if left_variable and j == 0:
            opts.append((X,))
        else:
            opts.append((X,) + letters)
    for symbols in itertools.product(*opts):
        if X in symbols:
            yield symbols


def _direct_search(coloring: ColoringOracle, ladder: AlphabetLadder, depth: int,
                   meter: Meter, left_variable_tail: bool,
                   subset_products: bool) -> tuple[tuple[VariableWord, ...], int]:
    """Backtracking over block tuples in enumeration order.

    Candidates are flattened symbol strings cut into depth+1 blocks, each
    position constrained to its ladder level plus the variable symbol.
    Partial products are checked block by block, so most candidates die at
    the first block.
    """
    evaluate = coloring.evaluate_letters

    def extend_products(prev: list[tuple[int, ...]], block: tuple[int, ...],
                        level: int, color: Optional[int]
                        ) -> Optional[tuple[list[tuple[int, ...]], int]]:
        bases = prev + [()] if subset_products else prev
        out = []
        for p in bases:
            for a in ladder.letters(level):
                prod = p + tuple(a if t == X else t for t in block)
                meter.charge_eval()
                got = evaluate(prod)
                if color is None:
                    color = got
                elif got != color:
                    return None
                out.append(prod)
        return out, color

    for total in range(depth + 1, meter.budget.max_total_length + 1):
        for lengths in _compositions(total, depth + 1):
            starts = [sum(lengths[:i]) for i in range(depth + 1)]

            def descend(n: int, prev: list[tuple[int, ...]],
                        color: Optional[int],
                        chosen: list[tuple[int, ...]]
                        ) -> Optional[tuple[tuple[VariableWord, ...], int]]:
                if n == depth + 1:
                    return tuple(VariableWord(b) for b in chosen), color
                for block in _block_candidates(
                        ladder, starts[n], lengths[n],
                        left_variable_tail and n >= 1):
                    meter.charge_candidates()
                    extended = extend_products(prev, block, n, color)
                    if extended is None:
                        continue
                    nxt, got = extended
                    if subset_products:
                        nxt = prev + nxt
                    found = descend(n + 1, nxt, got, chosen + [block])
                    if found is not None:
                        return found
                return None

            # Prefix products grow from the empty product; subset products
            # add it back at every block themselves.
            found = descend(0, [] if subset_products else [()], None, [])
            if found is not None:
                return found
    raise BudgetExhausted("no certificate within the length budget")


# ---------------------------------------------------------------------------
# Proof-guided mode

class _BlockSource:
    """Lazily runs quotient steps, recording the level chain and the fusion
    data for each stage."""

    def __init__(self, E: SetOracle, stream: VarSeq, k: int,
                 ladder: AlphabetLadder, meter: Meter,
                 step_fn: Callable[..., Optional[PipelineStep]],
                 carlson: bool):
        self.ladder = ladder
        self.meter = meter
        self.step_fn = step_fn
        self.carlson = carlson
        self.blocks: list[VariableWord] = []
        self.ks: list[int] = [k]
        self.fusion_steps: list[FusionStep] = []
        self._E = E
        self._stream = stream

    def ensure(self, n: int) -> None:
        while len(self.blocks) <= n:
            step = self.step_fn(self._E, self._stream, self.ks[-1],
                                self.ladder, meter=self.meter)
            if step is None:
                raise BudgetExhausted("largeness refuted mid-pipeline")
            self.blocks.append(step.word)
            self.ks.append(step.k_next)
            self.fusion_steps.append(FusionStep(step.m, step.k_next, step.cuts))
            quotient = ef_quotient(self._E, step.quotient_words)
            self._E = intersect_sets(self._E, quotient) if self.carlson else quotient
            self._stream = step.stream

    def block(self, n: int) -> VariableWord:
        self.ensure(n)
        return self.blocks[n]

    def level(self, n: int) -> int:
        self.ensure(max(n - 1, 0))
        return self.ks[n]

    def view_from(self, offset: int, budget: int) -> VarSeq:
        return VarSeq(gen=lambda i: self.block(offset + i), budget=budget)


def _reduced_span_words(blocks: Sequence[VariableWord],
                        levels: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]
    for block, letters in zip(blocks, levels):
        out = [p + _substituted_symbols(block, a) for p in out for a in letters]
    return out


def _extracted_span_words(blocks: Sequence[VariableWord],
                          levels: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    partial: list[tuple[int, ...]] = [()]
    for block, letters in zip(blocks, levels):
        new = [p + _substituted_symbols(block, a) for p in partial for a in letters]
        out.extend(new)
        partial.extend(new)
    return sorted(set(out))


def _cs_assemble(E: SetOracle, source: _BlockSource, ladder: AlphabetLadder,
                 depth: int, meter: Meter) -> tuple[VariableWord, ...]:
    """Chain blocks into anchored segments whose shifted products the class
    absorbs, then re-cut the segments so every block after the first is
    left variable."""
    rs = [0, 1]
    ts = [source.block(0)]
    for stage in range(1, depth + 2):
        levels = [ladder.letters(source.level(rs[i + 1] - 1))
                  for i in range(stage)]
        absorbed = _reduced_span_words(ts, levels)
        base = rs[stage]
        found = None
        for extra in range(meter.budget.max_probe_depth + 1):
            source.ensure(base + extra + 1)
            letter_axes = [ladder.letters(source.level(base) + i)
                           for i in range(extra + 1)]
            tail_star = star(source.block(base + extra + 1)).letters
            for choice in itertools.product(*letter_axes):
                symbols: list[int] = []
                for i, a in enumerate(choice):
                    symbols.extend(_substituted_symbols(source.block(base + i), a))
                product = tuple(symbols) + tail_star
                ok = True
                for head in absorbed:
                    meter.charge_eval()
                    if not E.member(Word(head + product)):
                        ok = False
                        break
                if ok:
                    found = (extra, choice)
                    break
            if found is not None:
                break
        if found is None:
            raise BudgetExhausted("no absorbed product for the assembly stage")
        extra, choice = found
        symbols = []
        for i, a in enumerate(choice):
            symbols.extend(_substituted_symbols(source.block(base + i), a))
        symbols.extend(source.block(base + extra + 1).symbols)
        ts.append(VariableWord(tuple(symbols)))
        rs.append(base + extra + 2)
    fusion_reindex(source.ks[0], source.fusion_steps)
    words = [VariableWord(ts[0].symbols + star(ts[1]).letters)]
    for n in range(1, depth + 1):
        head = ts[n].symbols[ts[n].symbols.index(X):]
        words.append(VariableWord(head + star(ts[n + 1]).letters))
    return tuple(words)


def _carlson_assemble(E: SetOracle, source: _BlockSource, ladder: AlphabetLadder,
                      depth: int, meter: Meter) -> tuple[VariableWord, ...]:
    """Chain monochromatic segments, then pair consecutive segments so every
    subset product ends inside an absorbed segment."""
    rs = [0, 1]
    ts = [source.block(0)]
    for stage in range(1, 2 * depth + 2):
        levels = [ladder.letters(source.level(rs[i])) for i in range(stage)]
        absorbed = _extracted_span_words(ts, levels)
        base = rs[stage]
        guard = intersect_sets(E, SetOracle(
            lambda z, heads=tuple(absorbed): all(
                E.member(Word(h + z.letters)) for h in heads),
            "assembly guard"))
        view = source.view_from(base, budget=meter.budget.max_probe_depth + 2)
        extra, word = one_mono_word(guard, view, source.level(base), ladder,
                                    meter=meter)
        ts.append(word)
        rs.append(base + extra + 1)
    fusion_reindex(source.ks[0], source.fusion_steps)
    return tuple(VariableWord(ts[2 * n].symbols + ts[2 * n + 1].symbols)
                 for n in range(depth + 1))


def _proof_guided(coloring: ColoringOracle, ladder: AlphabetLadder, depth: int,
                  meter: Meter, carlson: bool) -> tuple[tuple[VariableWord, ...], int]:
    if coloring.q == 1:
        return (x_word(),) * (depth + 1), 1
    seed = VarSeq.constant(x_word())
    classes = [color_class(coloring, i) for i in range(1, coloring.q + 1)]
    mode = ProbeMode.EXTRACTED if carlson else ProbeMode.REDUCED_SHIFTED
    step_fn = carlson_step if carlson else cs_step
    assemble = _carlson_assemble if carlson else _cs_assemble
    candidates = refine_candidates(classes, seed, 0, ladder, mode, meter)
    while True:
        try:
            candidate = next(candidates)
        except (StopIteration, BudgetExhausted):
            break
        part = classes[candidate.index]
        try:
            source = _BlockSource(part, candidate.stream, 0, ladder, meter,
                                  step_fn, carlson)
            words = assemble(part, source, ladder, depth, meter)
            return words, candidate.index + 1
        except BudgetExhausted:
            continue
    raise BudgetExhausted("no color class completed the pipeline within budget")


# ---------------------------------------------------------------------------
# Entry points

def cs_extract(coloring: ColoringOracle, ladder: AlphabetLadder, depth: int,
               mode: str = MODE_DIRECT,
               budget: Optional[Budget] = None) -> CSCertificate:
    """Extract a verified prefix-product certificate of the given depth."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    budget = budget or DEFAULT_BUDGET
    meter = Meter(budget)
    if mode == MODE_DIRECT:
        words, color = _direct_search(coloring, ladder, depth, meter,
                                      left_variable_tail=True,
                                      subset_products=False)
    elif mode == MODE_PROOF_GUIDED:
        words, color = _proof_guided(coloring, ladder, depth, meter,
                                     carlson=False)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    cert = CSCertificate(ladder, depth, words, color, coloring, mode,
                         budget.max_evaluations,
                         checked=cs_product_count(ladder, depth))
    if not verify_cs_certificate(cert):
        raise BudgetExhausted("internal: emitted certificate failed verification")
    return cert


def carlson_extract(coloring: ColoringOracle, ladder: AlphabetLadder, depth: int,
                    mode: str = MODE_DIRECT,
                    budget: Optional[Budget] = None) -> CarlsonCertificate:
    """Extract a verified subset-product certificate of the given depth."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    budget = budget or DEFAULT_BUDGET
    meter = Meter(budget)
    if mode == MODE_DIRECT:
        words, color = _direct_search(coloring, ladder, depth, meter,
                                      left_variable_tail=False,
                                      subset_products=True)
    elif mode == MODE_PROOF_GUIDED:
        words, color = _proof_guided(coloring, ladder, depth, meter,
                                     carlson=True)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    cert = CarlsonCertificate(ladder, depth, words, color, coloring, mode,
                              budget.max_evaluations,
                              checked=carlson_product_count(ladder, depth))
    if not verify_carlson_certificate(cert):
        raise BudgetExhausted("internal: emitted certificate failed verification")
    return cert

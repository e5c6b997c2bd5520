"""Bounded-depth largeness probing and its supporting machinery.

True largeness of a word set quantifies over all infinite block
subsequences of a stream and is not decidable. The probe here searches,
greedily and under explicit budgets, for a finite prefix of blocks such
that every tested one-block extension admits a substitution tuple landing
the shifted product inside the set. Failures drive the search: a prefix
refuted by some extension grows by that extension, so an unproductive run
accumulates a concrete bad sequence all of whose checked products avoid
the set. The three verdicts are therefore

  FOUND_PREFIX            every tested extension admitted a good product,
  COUNTEREXAMPLE_PREFIX   the bad sequence reached the depth budget,
  BUDGET_EXHAUSTED        no verdict within budget (never a claim).

Two modes exist. In reduced-shifted mode extensions come from reduced
spans of the windows following the prefix and products carry the constant
prefix of the extension as a trailing term. In extracted mode extensions
come from extracted spans, products take the form (subset product of the
prefix) followed by the fully substituted extension, and the substituted
letter ranges over the level one past the prefix length.

Also here: the right-extension quotient of a set by a finite word set,
color-class refinement over a partition, the search for one variable word
whose substitutions all land in a set, and cut reindexing for chains of
nested block subsequences.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .coloring import ColoringOracle
from .errors import (BudgetExhausted, CapExceeded, Inconclusive,
                     InsufficientPrefix, WitnessInconsistent)
from .hj import find_monochromatic_line
from .spans import SpanKind, SpanQuery, enumerate_span
from .words import (X, AlphabetLadder, VariableWord, VarSeq, Word, WordLike,
                    concat_all, star, substitute)


@dataclass(frozen=True)
class SetOracle:
    """A pure total membership predicate on constant words."""

    member: Callable[[Word], bool]
    description: str = ""


def full_set() -> SetOracle:
    return SetOracle(lambda w: True, "all words")


def empty_set() -> SetOracle:
    return SetOracle(lambda w: False, "no words")


def color_class(coloring: ColoringOracle, color: int) -> SetOracle:
    return SetOracle(lambda w: coloring.evaluate(w) == color,
                     f"color class {color}")


def intersect_sets(a: SetOracle, b: SetOracle) -> SetOracle:
    return SetOracle(lambda w: a.member(w) and b.member(w),
                     f"({a.description}) and ({b.description})")


def ef_quotient(E: SetOracle, F: Iterable[Word]) -> SetOracle:
    """The set of right extensions compatible with every word of ``F``:
    members are exactly the z with wz in E for all w in F."""
    prefixes = tuple(sorted({w.letters for w in F}))
    if not prefixes:
        raise ValueError("the quotient needs a non-empty word set")
    member = E.member
    return SetOracle(
        lambda z: all(member(Word(p + z.letters)) for p in prefixes),
        f"({E.description}) over {len(prefixes)} prefixes")


# ---------------------------------------------------------------------------
# Budgets

@dataclass(frozen=True)
class Budget:
    """Hard limits for the bounded searches.

    max_evaluations   membership / coloring evaluations
    max_candidates    candidate structures enumerated
    max_probe_depth   growth rounds of a probe's bad sequence
    max_window        widest extension window a probe tests
    max_span          cap for any single span enumeration
    max_line_dim      iterative-deepening limit for line searches
    max_total_length  longest flattened candidate in direct searches
    """

    max_evaluations: int = 1_000_000
    max_candidates: int = 1_000_000
    max_probe_depth: int = 5
    max_window: int = 2
    max_span: int = 20_000
    max_line_dim: int = 3
    max_total_length: int = 14


DEFAULT_BUDGET = Budget()


class Meter:
    """Mutable usage counters charging against a Budget."""

    def __init__(self, budget: Budget):
        self.budget = budget
        self.evaluations = 0
        self.candidates = 0

    def charge_eval(self, n: int = 1) -> None:
        self.evaluations += n
        if self.evaluations > self.budget.max_evaluations:
            raise BudgetExhausted(
                f"evaluation budget {self.budget.max_evaluations} exhausted")

    def charge_candidates(self, n: int = 1) -> None:
        self.candidates += n
        if self.candidates > self.budget.max_candidates:
            raise BudgetExhausted(
                f"candidate budget {self.budget.max_candidates} exhausted")

    def snapshot(self) -> dict[str, int]:
        return {"evaluations": self.evaluations, "candidates": self.candidates}


# ---------------------------------------------------------------------------
# Cut maps

@dataclass(frozen=True)
class Cuts:
    """A strictly increasing cut map with slope-one tail.

    Entry j is the first parent index of child block j's window; beyond the
    explicit entries the map continues with increments of one (an identity
    tail). Cut maps compose like the block-subsequence relations they
    witness."""

    explicit: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "explicit", tuple(self.explicit))
        if not self.explicit or self.explicit[0] != 0:
            raise ValueError("cuts must start at 0")
        if any(a >= b for a, b in zip(self.explicit, self.explicit[1:])):
            raise ValueError("cuts must be strictly increasing")

    def at(self, j: int) -> int:
        if j < len(self.explicit):
            return self.explicit[j]
        return self.explicit[-1] + (j - len(self.explicit) + 1)

    def compose(self, inner: "Cuts") -> "Cuts":
        """The cut map of the composite relation: outer applied after inner."""
        length = len(inner.explicit) + len(self.explicit)
        return Cuts(tuple(self.at(inner.at(j)) for j in range(length)))


IDENTITY_CUTS = Cuts((0,))


# ---------------------------------------------------------------------------
# Probe

class ProbeMode(str, enum.Enum):
    REDUCED_SHIFTED = "reduced-shifted"
    EXTRACTED = "extracted"


class Verdict(str, enum.Enum):
    FOUND_PREFIX = "found-prefix"
    COUNTEREXAMPLE_PREFIX = "counterexample-prefix"
    BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass(frozen=True)
class ExtensionCheck:
    """One tested extension. For reduced-shifted mode the witness is the
    good substitution tuple; for extracted mode it is (prefix product,
    letter). None marks a refuting extension."""

    extension: VariableWord
    window: tuple[int, int]
    witness: Optional[tuple]


@dataclass(frozen=True)
class LargenessEvidence:
    verdict: Verdict
    mode: ProbeMode
    k: int
    prefix: tuple[VariableWord, ...]
    windows: tuple[tuple[int, int], ...]
    transcript: tuple[ExtensionCheck, ...]
    budget_used: dict[str, int] = field(compare=False, default_factory=dict)

    @property
    def cuts(self) -> Cuts:
        """Cut map of the prefix-plus-identity-tail stream over its base."""
        return Cuts(tuple(w[0] for w in self.windows) + (self.windows[-1][1],))


class Prober:
    """Greedy bounded prefix search; resumable so that downstream steps can
    feed refuting extensions back in."""

    def __init__(self, E: SetOracle, s: VarSeq, k: int, ladder: AlphabetLadder,
                 mode: ProbeMode, meter: Meter):
        self.E = E
        self.s = s
        self.k = k
        self.ladder = ladder
        self.mode = ProbeMode(mode)
        self.meter = meter
        self.prefix: list[VariableWord] = [s[0]]
        self.windows: list[tuple[int, int]] = [(0, 1)]
        self.transcript: list[ExtensionCheck] = []
        self._grown = 0
        self._prefix_products: Optional[list[tuple[int, ...]]] = None

    @property
    def end(self) -> int:
        return self.windows[-1][1]

    def _letters(self, level: int) -> tuple[int, ...]:
        return self.ladder.letters(self.k + level)

    def good_witness(self, extension: VariableWord) -> Optional[tuple]:
        """A witness that the prefix handles this extension, or None.

        Reduced-shifted mode: a letter tuple, one level per prefix position,
        whose substituted product followed by the extension's constant
        prefix lies in the set. Extracted mode: a pair (subset product of
        the prefix, letter at the level one past the prefix length) whose
        concatenation with the substituted extension lies in the set."""
        if self.mode is ProbeMode.REDUCED_SHIFTED:
            ext_star = star(extension).letters
            for choice in itertools.product(
                    *[self._letters(i) for i in range(len(self.prefix))]):
                symbols: list[int] = []
                for block, a in zip(self.prefix, choice):
                    symbols.extend(a if s == X else s for s in block.symbols)
                symbols.extend(ext_star)
                self.meter.charge_eval()
                if self.E.member(Word(tuple(symbols))):
                    return choice
            return None
        for prod in self._extracted_prefix_products():
            for a in self._letters(len(self.prefix)):
                sub = substitute(extension, a).letters
                self.meter.charge_eval()
                if self.E.member(Word(prod + sub)):
                    return (Word(prod), a)
        return None

    def _extracted_prefix_products(self) -> list[tuple[int, ...]]:
        if self._prefix_products is None:
            levels = tuple(self.ladder.level(self.k + i)
                           for i in range(len(self.prefix)))
            query = SpanQuery(tuple(self.prefix), levels,
                              SpanKind.EXTRACTED_CONSTANT)
            self._prefix_products = [
                w.letters for w in
                enumerate_span(query, cap=self.meter.budget.max_span)]
        return self._prefix_products

    def _extensions(self) -> Iterator[tuple[VariableWord, tuple[int, int]]]:
        start = self.end
        kind = (SpanKind.REDUCED_VARIABLE
                if self.mode is ProbeMode.REDUCED_SHIFTED
                else SpanKind.EXTRACTED_VARIABLE)
        for width in range(1, self.meter.budget.max_window + 1):
            window = tuple(self.s[start + j] for j in range(width))
            levels = tuple(self.ladder.level(self.k + start + j)
                           for j in range(width))
            query = SpanQuery(window, levels, kind)
            for ext in enumerate_span(query, cap=self.meter.budget.max_span):
                self.meter.charge_candidates()
                yield ext, (start, start + width)

    def grow(self, extension: VariableWord, window: tuple[int, int]) -> None:
        if window[0] != self.end:
            raise ValueError("extension window must adjoin the prefix")
        self.prefix.append(extension)
        self.windows.append(window)
        self._grown += 1
        self._prefix_products = None

    def run(self) -> LargenessEvidence:
        try:
            while True:
                refuting = None
                tested = 0
                for ext, window in self._extensions():
                    witness = self.good_witness(ext)
                    self.transcript.append(ExtensionCheck(ext, window, witness))
                    tested += 1
                    if witness is None:
                        refuting = (ext, window)
                        break
                if refuting is None:
                    if tested == 0:
                        return self._evidence(Verdict.BUDGET_EXHAUSTED)
                    return self._evidence(Verdict.FOUND_PREFIX)
                self.grow(*refuting)
                if self._grown > self.meter.budget.max_probe_depth:
                    return self._evidence(Verdict.COUNTEREXAMPLE_PREFIX)
        except (BudgetExhausted, CapExceeded, InsufficientPrefix):
            return self._evidence(Verdict.BUDGET_EXHAUSTED)

    def _evidence(self, verdict: Verdict) -> LargenessEvidence:
        return LargenessEvidence(
            verdict, self.mode, self.k, tuple(self.prefix),
            tuple(self.windows), tuple(self.transcript),
            self.meter.snapshot())


def largeness_probe(E: SetOracle, s: VarSeq, k: int, ladder: AlphabetLadder,
                    mode: ProbeMode = ProbeMode.REDUCED_SHIFTED,
                    budget: Optional[Budget] = None,
                    meter: Optional[Meter] = None) -> LargenessEvidence:
    """Probe whether ``E`` is large in ``s`` at level offset ``k``, to
    bounded depth. Inconclusiveness is a verdict, not an error."""
    meter = meter or Meter(budget or DEFAULT_BUDGET)
    try:
        prober = Prober(E, s, k, ladder, mode, meter)
    except (InsufficientPrefix, BudgetExhausted):
        return LargenessEvidence(Verdict.BUDGET_EXHAUSTED, ProbeMode(mode), k,
                                 (), (), (), meter.snapshot())
    return prober.run()


def replay_evidence(E: SetOracle, evidence: LargenessEvidence,
                    ladder: AlphabetLadder) -> bool:
    """Re-check every transcript entry of a probe against the set.

    Extensions were always tested at the then-current end of the prefix, so
    the blocks in force for a check are those whose windows end at or
    before the check's window start."""
    for check in evidence.transcript:
        if check.witness is None:
            continue
        blocks = [b for b, w in zip(evidence.prefix, evidence.windows)
                  if w[1] <= check.window[0]]
        if evidence.mode is ProbeMode.REDUCED_SHIFTED:
            symbols: list[int] = []
            for block, a in zip(blocks, check.witness):
                symbols.extend(a if s == X else s for s in block.symbols)
            symbols.extend(star(check.extension).letters)
            if not E.member(Word(tuple(symbols))):
                return False
        else:
            prod, a = check.witness
            if not E.member(Word(prod.letters + substitute(check.extension, a).letters)):
                return False
    return True


# ---------------------------------------------------------------------------
# Color refinement

@dataclass(frozen=True)
class RefineResult:
    index: int
    stream: VarSeq
    evidence: LargenessEvidence
    cuts: Cuts
    rejected: tuple[int, ...]


def refine_candidates(parts: Sequence[SetOracle], s: VarSeq, k: int,
                      ladder: AlphabetLadder, mode: ProbeMode,
                      meter: Meter) -> Iterator[RefineResult]:
    """Walk the parts in order, narrowing the stream past each part that is
    refuted, and yield every part that certifies on the current stream.
    The first yield is the refinement result proper; later yields support
    retry by callers whose downstream work fails."""
    stream = s
    cuts = IDENTITY_CUTS
    rejected: list[int] = []
    for index, part in enumerate(parts):
        ev = Prober(part, stream, k, ladder, mode, meter).run()
        if ev.verdict is Verdict.FOUND_PREFIX:
            yield RefineResult(index, stream, ev, cuts, tuple(rejected))
        elif ev.verdict is Verdict.COUNTEREXAMPLE_PREFIX:
            rejected.append(index)
            stream = VarSeq.composed(ev.prefix, stream, ev.windows[-1][1])
            cuts = cuts.compose(ev.cuts)
        else:
            raise Inconclusive(
                f"probe budget exhausted while refining part {index}")


def color_refine(parts: Sequence[SetOracle], s: VarSeq, k: int,
                 ladder: AlphabetLadder,
                 mode: ProbeMode = ProbeMode.REDUCED_SHIFTED,
                 budget: Optional[Budget] = None,
                 meter: Optional[Meter] = None) -> RefineResult:
    """Find one part that certifies large on a block subsequence of ``s``."""
    meter = meter or Meter(budget or DEFAULT_BUDGET)
    for result in refine_candidates(parts, s, k, ladder, mode, meter):
        return result
    raise Inconclusive("no part certified within budget")


# ---------------------------------------------------------------------------
# One monochromatic word

def one_mono_word(E: SetOracle, s: VarSeq, k: int, ladder: AlphabetLadder,
                  budget: Optional[Budget] = None,
                  meter: Optional[Meter] = None,
                  strategy: str = "scan") -> tuple[int, VariableWord]:
    """Find a variable word in the extracted variable span of an initial
    window of ``s`` all of whose level-k substitutions lie in ``E``.

    Returns (m, w) with w drawn from the span of the first m+1 items. The
    default strategy scans span candidates in enumeration order; the
    subset-coloring strategy re-derives the word through line searches over
    induced power-set colorings and is intended for tiny instances only.
    """
    meter = meter or Meter(budget or DEFAULT_BUDGET)
    if strategy == "scan":
        return _mono_word_scan(E, s, k, ladder, meter)
    if strategy == "subset-coloring":
        return _mono_word_subset_coloring(E, s, k, ladder, meter)
    raise ValueError(f"unknown strategy {strategy!r}")


def _mono_alphabet(ladder: AlphabetLadder, k: int) -> tuple[int, ...]:
    return ladder.letters(k)


def _mono_word_scan(E: SetOracle, s: VarSeq, k: int, ladder: AlphabetLadder,
                    meter: Meter) -> tuple[int, VariableWord]:
    # Bitmask order enumerates index subsets colexicographically, so the
    # window count (the subset's maximum) grows as slowly as possible.
    targets = _mono_alphabet(ladder, k)
    seen: set[tuple[int, ...]] = set()
    try:
        for mask in itertools.count(1):
            indices = [i for i in range(mask.bit_length()) if mask >> i & 1]
            blocks = [s[i] for i in indices]
            opts = [(X,) + ladder.letters(k + i) for i in indices]
            for choice in itertools.product(*opts):
                if X not in choice:
                    continue
                symbols: list[int] = []
                for block, b in zip(blocks, choice):
                    symbols.extend(b if t == X else t for t in block.symbols)
                key = tuple(symbols)
                if key in seen:
                    continue
                seen.add(key)
                meter.charge_candidates()
                candidate = VariableWord(key)
                ok = True
                for a in targets:
                    meter.charge_eval()
                    if not E.member(substitute(candidate, a)):
                        ok = False
                        break
                if ok:
                    return indices[-1], candidate
    except InsufficientPrefix:
        raise BudgetExhausted(
            "stream exhausted before a monochromatic word appeared") from None
    raise AssertionError("unreachable")


def _mono_word_subset_coloring(E: SetOracle, s: VarSeq, k: int,
                               ladder: AlphabetLadder,
                               meter: Meter) -> tuple[int, VariableWord]:
    """Inductive construction: keep a bad sequence whose extracted products
    all avoid the set; each round colors candidate continuation words by the
    exact subset of optional-letter prefix tuples whose product lands in
    the set, and a monochromatic line over that power-set coloring either
    yields the wanted word or extends the bad sequence. The optional-letter
    device (None skips a block) stays local to this function. The line
    dimension is deepened iteratively instead of using worst-case bounds."""
    bad: list[VariableWord] = []
    consumed = 0  # items of s used by the bad sequence
    while len(bad) <= meter.budget.max_probe_depth:
        letters = ladder.letters(k + len(bad))
        prefix_opts = [(None,) + ladder.letters(k + i) for i in range(len(bad))]
        prefix_tuples = list(itertools.product(*prefix_opts))

        def assemble(tpl, tail: tuple[int, ...]) -> Word:
            symbols: list[int] = []
            for block, a in zip(bad, tpl):
                if a is None:
                    continue
                symbols.extend(a if t == X else t for t in block.symbols)
            symbols.extend(tail)
            return Word(tuple(symbols))

        outcome = None  # (windows used, line word, subset of good tuples)
        for dim in range(1, meter.budget.max_line_dim + 1):
            try:
                windows = [s[consumed + j] for j in range(dim)]
            except InsufficientPrefix:
                raise BudgetExhausted("stream exhausted mid-construction") from None

            def cube_color(point: tuple[int, ...]) -> tuple[bool, ...]:
                symbols: list[int] = []
                for block, a in zip(windows, point):
                    symbols.extend(a if t == X else t for t in block.symbols)
                tail = tuple(symbols)
                verdicts = []
                for tpl in prefix_tuples:
                    meter.charge_eval()
                    verdicts.append(E.member(assemble(tpl, tail)))
                return tuple(verdicts)

            witness = find_monochromatic_line(
                dim, letters, cube_color,
                max_candidates=meter.budget.max_candidates)
            if witness is None:
                continue
            symbols: list[int] = []
            for block, b in zip(windows, witness.line.symbols):
                symbols.extend(b if t == X else t for t in block.symbols)
            outcome = (dim, VariableWord(tuple(symbols)), witness.color)
            break
        if outcome is None:
            raise BudgetExhausted("no line within the dimension budget")
        dim, line_word, subset = outcome
        for tpl, inside in zip(prefix_tuples, subset):
            if inside:
                head: list[int] = []
                for block, a in zip(bad, tpl):
                    if a is None:
                        continue
                    head.extend(a if t == X else t for t in block.symbols)
                return consumed + dim - 1, VariableWord(tuple(head) + line_word.symbols)
        bad.append(line_word)
        consumed += dim
    raise BudgetExhausted("bad sequence reached the depth budget")


# ---------------------------------------------------------------------------
# Fusion reindexing

@dataclass(frozen=True)
class FusionStep:
    """One stage of a nested block-subsequence chain: the stage consumed
    ``m`` blocks of the previous stream, moved the level offset to ``k``,
    and the new stream sits inside the remaining tail with the given cuts."""

    m: int
    k: int
    cuts: Cuts


def fusion_reindex(k0: int, steps: Sequence[FusionStep]) -> tuple[int, ...]:
    """Cut indices locating each stage's block inside the original stream.

    Index n is computed by lifting position 0 of stage n's stream down the
    chain: one stage maps its index j to m + cuts(j) in the stream below.
    The result is strictly increasing, starts at 0, and satisfies
    k0 + p_n >= k_n.
    """
    ks = [k0]
    for i, step in enumerate(steps):
        if step.m < 1:
            raise WitnessInconsistent(f"step {i + 1}: m must be at least 1")
        if step.k != ks[-1] + step.m:
            raise WitnessInconsistent(
                f"step {i + 1}: level {step.k} is not previous plus {step.m}")
        if not isinstance(step.cuts, Cuts):
            raise WitnessInconsistent(f"step {i + 1}: cuts must be a cut map")
        ks.append(step.k)
    ps = [0]
    for n in range(1, len(steps) + 1):
        j = 0
        for step in reversed(steps[:n]):
            j = step.m + step.cuts.at(j)
        ps.append(j)
    for a, b in zip(ps, ps[1:]):
        if a >= b:
            raise WitnessInconsistent("computed cut indices are not increasing")
    for n, p in enumerate(ps):
        if k0 + p < ks[n]:
            raise WitnessInconsistent(
                f"cut index {n} violates the level inequality")
    return tuple(ps)

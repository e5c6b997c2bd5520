import itertools
import random

import pytest

from varword import (AlphabetLadder, CapExceeded, InsufficientPrefix,
                     SpanKind, SpanQuery, VariableWord, VarSeq, Word, X,
                     enumerate_span, is_extracted_block_subseq,
                     is_reduced_block_subseq, parse_word, shift,
                     span_contains, span_size, x_word)
from tests.conftest import (LADDER2, random_extracted_element,
                            random_span_element, random_variable_word)

V = parse_word
A01 = frozenset({0, 1})


def query(seq, kind, alphabets=None):
    seq = tuple(seq)
    alphabets = alphabets or (A01,) * len(seq)
    return SpanQuery(seq, alphabets, kind)


def brute_reduced(seq, alphabets, variable):
    """Independent enumeration: substitute one symbol per position."""
    out = set()
    opts = [sorted(a) + ([X] if variable else []) for a in alphabets]
    for choice in itertools.product(*opts):
        if variable and X not in choice:
            continue
        symbols = []
        for block, b in zip(seq, choice):
            symbols.extend(b if t == X else t for t in block.symbols)
        out.add(tuple(symbols))
    return out


def brute_extracted(seq, alphabets, variable):
    out = set()
    n = len(seq)
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        opts = [sorted(alphabets[i]) + ([X] if variable else []) for i in idx]
        for choice in itertools.product(*opts):
            if variable and X not in choice:
                continue
            symbols = []
            for i, b in zip(idx, choice):
                symbols.extend(b if t == X else t for t in seq[i].symbols)
            out.add(tuple(symbols))
    return out


class TestEnumerate:
    def test_reduced_constant_example(self):
        q = query((x_word(), V("0x")), SpanKind.REDUCED_CONSTANT)
        got = list(enumerate_span(q))
        assert [str(w) for w in got] == ["000", "001", "100", "101"]
        assert span_size(q) == 4

    def test_reduced_variable_example(self):
        q = query((x_word(), V("0x")), SpanKind.REDUCED_VARIABLE)
        got = {str(w) for w in enumerate_span(q)}
        assert got == {"x00", "x01", "00x", "10x", "x0x"}
        assert span_size(q) == 3 ** 2 - 2 ** 2 == 5

    def test_reduced_variable_order(self):
        # The variable symbol sorts first within each position.
        q = query((x_word(), V("0x")), SpanKind.REDUCED_VARIABLE)
        assert [str(w) for w in enumerate_span(q)] == \
            ["x0x", "x00", "x01", "00x", "10x"]

    def test_extracted_constant_example(self):
        q = query((x_word(), V("0x")), SpanKind.EXTRACTED_CONSTANT)
        got = [str(w) for w in enumerate_span(q)]
        assert got == ["0", "1", "00", "01", "000", "001", "100", "101"]

    def test_cap_exceeded_reports_count(self):
        q = query((x_word(),) * 8, SpanKind.REDUCED_CONSTANT)
        with pytest.raises(CapExceeded) as err:
            list(enumerate_span(q, cap=10))
        assert err.value.required == 2 ** 8

    def test_reduced_counts_are_exact(self):
        rng = random.Random(3)
        for _ in range(40):
            width = rng.randint(1, 3)
            seq = tuple(random_variable_word(rng, 3) for _ in range(width))
            alphabets = tuple(frozenset(range(rng.randint(1, 3)))
                              for _ in range(width))
            for kind in (SpanKind.REDUCED_CONSTANT, SpanKind.REDUCED_VARIABLE):
                q = SpanQuery(seq, alphabets, kind)
                got = list(enumerate_span(q))
                assert len(got) == len(set(got)) == span_size(q)

    def test_matches_brute_force(self):
        rng = random.Random(4)
        for _ in range(25):
            width = rng.randint(1, 3)
            seq = tuple(random_variable_word(rng, 3) for _ in range(width))
            alphabets = tuple(frozenset(range(rng.randint(1, 3)))
                              for _ in range(width))
            for kind in SpanKind:
                q = SpanQuery(seq, alphabets, kind)
                got = {w.symbols for w in enumerate_span(q)}
                brute = (brute_reduced if kind.is_reduced else brute_extracted)(
                    seq, alphabets, kind.is_variable)
                assert got == brute


class TestContains:
    def test_witness_read_off(self):
        q = query((x_word(), V("0x")), SpanKind.REDUCED_CONSTANT)
        sel = span_contains(q, V("101"))
        assert sel is not None and sel.symbols == (1, 1)

    def test_length_mismatch(self):
        q = query((x_word(), V("0x")), SpanKind.REDUCED_CONSTANT)
        assert span_contains(q, V("11")) is None

    def test_extracted_witness(self):
        q = query((x_word(), V("0x")), SpanKind.EXTRACTED_CONSTANT)
        sel = span_contains(q, V("01"))
        assert sel is not None
        assert sel.indices == (1,) and sel.symbols == (1,)

    def test_agrees_with_enumeration(self):
        rng = random.Random(5)
        for _ in range(25):
            width = rng.randint(1, 3)
            seq = tuple(random_variable_word(rng, 3) for _ in range(width))
            alphabets = tuple(frozenset(range(rng.randint(1, 3)))
                              for _ in range(width))
            for kind in SpanKind:
                q = SpanQuery(seq, alphabets, kind)
                members = set(enumerate_span(q))
                for w in members:
                    assert span_contains(q, w) is not None
                for _ in range(10):
                    probe = random_variable_word(rng, 6) if kind.is_variable \
                        else Word(tuple(rng.choice((0, 1, 2))
                                        for _ in range(rng.randint(0, 6))))
                    assert (span_contains(q, probe) is not None) == (probe in members)

    def test_wrong_type_rejected(self):
        q = query((x_word(),), SpanKind.REDUCED_CONSTANT)
        assert span_contains(q, x_word()) is None
        qv = query((x_word(),), SpanKind.REDUCED_VARIABLE)
        assert span_contains(qv, Word((0,))) is None


class TestReducedBlockSubseq:
    def test_identity_block(self):
        s = VarSeq.constant(x_word())
        w = is_reduced_block_subseq((x_word(),), s, 0, LADDER2)
        assert w is not None and w.cuts == (0, 1)

    def test_hand_example(self):
        s = VarSeq.constant(x_word())
        w = is_reduced_block_subseq((V("0x"), V("x1x")), s, 0, LADDER2)
        assert w is not None
        assert w.cuts == (0, 2, 5)
        assert w.selections[0].symbols == (0, X)
        assert w.selections[1].symbols == (X, 1, X)

    def test_letter_out_of_level(self):
        # Letter 2 is never available on the 2-letter ladder.
        s = VarSeq.constant(x_word())
        assert is_reduced_block_subseq((V("2x"),), s, 0, LADDER2) is None

    def test_insufficient_prefix(self):
        s = VarSeq((x_word(), x_word()))
        with pytest.raises(InsufficientPrefix):
            is_reduced_block_subseq((V("xxx"),), s, 0, LADDER2)

    def test_level_offset_matters(self):
        ladder = AlphabetLadder((frozenset({0}), frozenset({0, 1})))
        s = VarSeq.constant(x_word())
        # Letter 1 only enters at level 1, so it fails at offset 0 in the
        # first window but passes with offset 1.
        assert is_reduced_block_subseq((V("1x"),), s, 0, ladder) is None
        assert is_reduced_block_subseq((V("1x"),), s, 1, ladder) is not None


class TestExtractedBlockSubseq:
    def test_reduced_implies_extracted(self):
        rng = random.Random(6)
        s = VarSeq.constant(x_word())
        for _ in range(30):
            blocks = []
            c = 0
            for _ in range(rng.randint(1, 3)):
                width = rng.randint(1, 2)
                window = [s[c + j] for j in range(width)]
                levels = [LADDER2.level(c + j) for j in range(width)]
                blocks.append(random_span_element(rng, window, levels))
                c += width
            assert is_reduced_block_subseq(blocks, s, 0, LADDER2) is not None
            assert is_extracted_block_subseq(blocks, s, 0, LADDER2) is not None

    def test_least_witness(self):
        s = VarSeq.constant(x_word())
        w = is_extracted_block_subseq((x_word(), x_word()), s, 0, LADDER2)
        assert w is not None
        assert w.cuts == (0, 1, 2)
        assert [sel.indices for sel in w.selections] == [(0,), (1,)]

    def test_insufficient_prefix(self):
        s = VarSeq.constant(x_word(), budget=3)
        with pytest.raises(InsufficientPrefix):
            is_extracted_block_subseq((V("xxxx"),), s, 0, LADDER2)

    def test_finite_absent(self):
        s = VarSeq((x_word(), x_word()))
        assert is_extracted_block_subseq((V("xxx"),), s, 0, LADDER2) is None


def build_reduced_subseq(rng, s, k, ladder, n_blocks, max_window=2):
    blocks = []
    c = 0
    for _ in range(n_blocks):
        width = rng.randint(1, max_window)
        window = [s[c + j] for j in range(width)]
        levels = [ladder.level(k + c + j) for j in range(width)]
        blocks.append(random_span_element(rng, window, levels))
        c += width
    return tuple(blocks), c


def build_extracted_subseq(rng, s, k, ladder, n_blocks, max_window=2):
    blocks = []
    c = 0
    for _ in range(n_blocks):
        width = rng.randint(1, max_window)
        window = [s[c + j] for j in range(width)]
        levels = [ladder.level(k + c + j) for j in range(width)]
        blocks.append(random_extracted_element(rng, window, levels))
        c += width
    return tuple(blocks), c


class TestNestingFacts:
    """Span nesting, transitivity with level weakening, and shift
    preservation, all at recognizer level on constructed instances."""

    def test_span_nesting_reduced(self):
        rng = random.Random(8)
        s = VarSeq.constant(x_word())
        for _ in range(20):
            t, consumed = build_reduced_subseq(rng, s, 0, LADDER2, 2)
            levels = tuple(LADDER2.level(n) for n in range(len(t)))
            parent_levels = tuple(LADDER2.level(n) for n in range(consumed))
            parent = tuple(s[i] for i in range(consumed))
            for kind in (SpanKind.REDUCED_CONSTANT, SpanKind.REDUCED_VARIABLE):
                child_q = SpanQuery(t, levels, kind)
                parent_q = SpanQuery(parent, parent_levels, kind)
                for w in enumerate_span(child_q, cap=200):
                    assert span_contains(parent_q, w) is not None

    def test_span_nesting_extracted(self):
        rng = random.Random(9)
        s = VarSeq.constant(x_word())
        for _ in range(20):
            t, consumed = build_extracted_subseq(rng, s, 0, LADDER2, 2)
            levels = tuple(LADDER2.level(n) for n in range(len(t)))
            parent_levels = tuple(LADDER2.level(n) for n in range(consumed))
            parent = tuple(s[i] for i in range(consumed))
            for kind in (SpanKind.EXTRACTED_CONSTANT, SpanKind.EXTRACTED_VARIABLE):
                child_q = SpanQuery(t, levels, kind)
                parent_q = SpanQuery(parent, parent_levels, kind)
                for w in enumerate_span(child_q, cap=400):
                    assert span_contains(parent_q, w) is not None

    def test_transitivity_reduced(self):
        rng = random.Random(10)
        s = VarSeq.constant(x_word())
        for _ in range(25):
            k0 = rng.randint(0, 1)
            k1 = rng.randint(k0, 2)
            t, _ = build_reduced_subseq(rng, s, k1, LADDER2, 4)
            w, _ = build_reduced_subseq(rng, VarSeq(t), k0, LADDER2, 2)
            assert is_reduced_block_subseq(w, s, k1, LADDER2) is not None

    def test_transitivity_extracted(self):
        rng = random.Random(11)
        s = VarSeq.constant(x_word())
        for _ in range(25):
            k0 = rng.randint(0, 1)
            k1 = rng.randint(k0, 2)
            t, _ = build_extracted_subseq(rng, s, k1, LADDER2, 4)
            w, _ = build_extracted_subseq(rng, VarSeq(t), k0, LADDER2, 2)
            assert is_extracted_block_subseq(w, s, k1, LADDER2) is not None

    def test_shift_preserves_reduced(self):
        rng = random.Random(12)
        s = VarSeq.constant(x_word())
        for _ in range(25):
            t, _ = build_reduced_subseq(rng, s, 0, LADDER2, 3)
            shifted = shift(VarSeq(t)).take(2)
            assert is_reduced_block_subseq(shifted, shift(s), 0, LADDER2) is not None

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varword import (EMPTY, AlphabetLadder, InsufficientPrefix, VariableWord,
                     VarSeq, Word, X, concat, concat_all, double_star,
                     make_word, parse_word, render_word, shift, split_star,
                     star, substitute, x_word)

V = parse_word
settings.register_profile("suite", derandomize=True, max_examples=100)
settings.load_profile("suite")

variable_words = st.lists(
    st.sampled_from([X, 0, 1, 2]), min_size=1, max_size=8
).filter(lambda s: X in s).map(lambda s: VariableWord(tuple(s)))


def all_variable_words(max_len, letters=(0, 1)):
    for length in range(1, max_len + 1):
        for symbols in itertools.product((X,) + letters, repeat=length):
            if X in symbols:
                yield VariableWord(symbols)


class TestTypes:
    def test_word_rejects_variable(self):
        with pytest.raises(ValueError):
            Word((0, X))

    def test_variable_word_needs_x(self):
        with pytest.raises(ValueError):
            VariableWord((0, 1))

    def test_empty_word_is_valid(self):
        assert len(EMPTY) == 0
        assert render_word(EMPTY) == "ε"

    def test_left_variable(self):
        assert V("x01").is_left_variable
        assert not V("0x1").is_left_variable

    def test_negative_letter_rejected(self):
        with pytest.raises(ValueError):
            Word((-3,))


class TestSubstitute:
    def test_single_symbol(self):
        assert substitute(x_word(), 0) == Word((0,))

    def test_textual(self):
        assert substitute(V("0x1x"), 2) == V("0212")

    def test_injective_exhaustive(self):
        # All variable words of length <= 4 over {0,1}: two letters give
        # two distinct substitution images.
        for v in all_variable_words(4):
            images = {substitute(v, a) for a in (0, 1)}
            assert len(images) == 2

    @given(variable_words, st.sampled_from([0, 1, 2]), st.sampled_from([0, 1, 2]))
    def test_injective_property(self, v, a, b):
        if a != b:
            assert substitute(v, a) != substitute(v, b)

    def test_rejects_bad_letter(self):
        with pytest.raises(ValueError):
            substitute(x_word(), -1)


class TestConcat:
    def test_empty_identity(self):
        assert concat(EMPTY, V("01")) == V("01")

    def test_variable_result(self):
        out = concat(Word((0,)), V("x1"))
        assert out == V("0x1")
        assert isinstance(out, VariableWord)

    def test_constant_result(self):
        assert isinstance(concat(V("01"), V("10")), Word)

    def test_associativity_random(self):
        rng = random.Random(7)
        pool = [V("x0"), V("01"), V("1x1"), EMPTY, V("x"), V("210")]
        for _ in range(100):
            a, b, c = (rng.choice(pool) for _ in range(3))
            assert concat(concat(a, b), c) == concat(a, concat(b, c))
            assert concat_all([a, b, c]) == concat(a, concat(b, c))


class TestSplitStar:
    def test_left_variable_gives_empty_star(self):
        assert split_star(V("x01")) == (EMPTY, V("x01"))

    def test_plain(self):
        assert split_star(V("0x1x")) == (Word((0,)), V("x1x"))

    def test_round_trip_exhaustive(self):
        for v in all_variable_words(5):
            head, tail = split_star(v)
            assert concat(head, tail) == v
            assert X not in head.letters
            assert tail.is_left_variable

    @given(variable_words)
    def test_round_trip_property(self, v):
        head, tail = split_star(v)
        assert concat(head, tail) == v
        assert tail.is_left_variable
        assert star(v) == head and double_star(v) == tail


class TestShift:
    def test_fixes_left_variable_tails(self):
        s = VarSeq((V("x0"), V("x1"), x_word()))
        out = shift(s)
        assert out.take(2) == (V("x0"), V("x1"))

    def test_hand_example(self):
        # item 0 joins the first block with the next constant prefix; item 1
        # is the remaining left-variable part plus the following prefix.
        s = VarSeq((V("0x"), V("1x0"), x_word()))
        out = shift(s)
        assert out.take(2) == (V("0x1"), V("x0"))

    def test_needs_two_items(self):
        with pytest.raises(InsufficientPrefix):
            shift(VarSeq((x_word(),)))

    def test_output_items_left_variable_from_one(self):
        rng = random.Random(11)
        from tests.conftest import random_variable_word
        for _ in range(50):
            items = tuple(random_variable_word(rng, 4) for _ in range(5))
            out = shift(VarSeq(items))
            for i in range(1, 4):
                assert out[i].is_left_variable

    def test_idempotent_on_prefix(self):
        rng = random.Random(13)
        from tests.conftest import random_variable_word
        for _ in range(100):
            items = tuple(random_variable_word(rng, 4) for _ in range(6))
            once = shift(VarSeq(items))
            twice = shift(once)
            assert twice.take(4) == once.take(4)


class TestLadder:
    def test_monotone(self):
        ladder = AlphabetLadder((frozenset({0}), frozenset({0, 1})),
                                tail="arithmetic", step=2)
        for n in range(8):
            assert ladder.level(n) <= ladder.level(n + 1)

    def test_constant_tail(self):
        ladder = AlphabetLadder.from_sizes([2, 3])
        assert ladder.level(10) == frozenset({0, 1, 2})

    def test_arithmetic_tail(self):
        ladder = AlphabetLadder.from_sizes([2], tail="arithmetic", step=1)
        assert ladder.level(0) == frozenset({0, 1})
        assert ladder.level(2) == frozenset({0, 1, 2, 3})

    def test_rejects_decreasing(self):
        with pytest.raises(ValueError):
            AlphabetLadder((frozenset({0, 1}), frozenset({1})))

    def test_rejects_empty_level(self):
        with pytest.raises(ValueError):
            AlphabetLadder((frozenset(),))


class TestVarSeq:
    def test_budget_enforced(self):
        s = VarSeq.constant(x_word(), budget=3)
        assert s[2] == x_word()
        with pytest.raises(InsufficientPrefix):
            s[3]

    def test_finite_bounds(self):
        s = VarSeq((x_word(),))
        with pytest.raises(InsufficientPrefix):
            s[1]

    def test_tail(self):
        s = VarSeq((V("x0"), V("x1"), V("x2")))
        assert s.tail(1).take(2) == (V("x1"), V("x2"))

    def test_composed(self):
        parent = VarSeq.constant(V("x9"), budget=10)
        s = VarSeq.composed((V("x0"),), parent, 3)
        assert s[0] == V("x0")
        assert s[1] == V("x9")

    def test_items_must_be_variable(self):
        with pytest.raises(TypeError):
            VarSeq((Word((0,)),))


class TestText:
    def test_round_trip_small(self):
        for text in ("ε", "x", "010", "x0x", "1x"):
            assert render_word(parse_word(text)) == text

    def test_big_ids_dot_separated(self):
        w = make_word((10, X, 3))
        assert render_word(w) == "10.x.3"
        assert parse_word("10.x.3") == w

    def test_reject_garbage(self):
        with pytest.raises(ValueError):
            parse_word("0y1")

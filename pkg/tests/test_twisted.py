import pytest
from hypothesis import given, settings, strategies as st

from coxlen.twisted import (
    LCG64,
    REVERSE,
    SWAP,
    TwistedPalindrome,
    generate_decomposed,
    generate_twisted_palindromes,
    is_twisted_palindrome,
    pair_condition,
    verify_middle_deletion,
)
from oracles import brute_universal_length


def test_lcg_reference_values():
    rng = LCG64(0)
    # x1 = c, x2 = a*c + c (mod 2^64)
    c, a = 1442695040888963407, 6364136223846793005
    assert rng.next32() == c >> 32
    assert rng.next32() == ((a * c + c) % 2 ** 64) >> 32


def test_pair_conditions():
    assert pair_condition((1, 2, 3), (3, 2, 1)) == REVERSE
    assert pair_condition((1, 2, 1), (2, 1, 2)) == SWAP
    assert pair_condition((1, 2, 1, 2), (1, 2, 1, 2)) == SWAP
    assert pair_condition((1,), (2,)) is None
    assert pair_condition((1, 2), (1, 2)) == SWAP
    assert pair_condition((1, 2, 3), (1, 2, 3)) is None


def test_decomposition_examples():
    tp = is_twisted_palindrome((1,))
    assert tp.center == 1 and tp.pairs == []
    tp = is_twisted_palindrome((2, 1, 2))
    assert tp.center == 1 and tp.pairs == [((2,), (2,), REVERSE)]
    tp = is_twisted_palindrome((1, 2, 1, 2, 3, 1, 2, 1, 2))
    assert tp.center == 3 and tp.pairs[0][2] == SWAP
    assert is_twisted_palindrome((1, 2)) is None
    assert is_twisted_palindrome((1, 2, 3)) is None


def test_middle_deletion_examples():
    assert verify_middle_deletion(is_twisted_palindrome((2, 1, 2)))
    assert verify_middle_deletion(is_twisted_palindrome((1, 2, 1, 2, 3, 1, 2, 1, 2)))
    with pytest.raises(ValueError):
        verify_middle_deletion(TwistedPalindrome(1, [((1,), (2,), REVERSE)]))


def test_known_counterexample():
    # a valid twisted palindrome where removing the centre raises the universal length
    w = (2, 1, 3, 1, 2, 1, 3, 2, 1, 2, 3, 2, 1)
    tp = is_twisted_palindrome(w)
    assert tp is not None and tp.validate()
    c = tp.center_index()
    assert brute_universal_length(w) == 3
    assert brute_universal_length(w[:c] + w[c + 1:]) == 4
    assert not verify_middle_deletion(tp)


def test_generator_shapes():
    assert all(len(w) == 1 for w in generate_twisted_palindromes(3, 0, 7, 10))
    for tp in generate_decomposed(3, 1, 11, 30):
        assert tp.validate()
        left, right, cond = tp.pairs[0]
        if cond == REVERSE:
            assert right == left[::-1]


def test_generator_deterministic():
    assert generate_twisted_palindromes(4, 3, 42, 20) == generate_twisted_palindromes(4, 3, 42, 20)
    assert generate_twisted_palindromes(4, 3, 42, 5) != generate_twisted_palindromes(4, 3, 43, 5)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 5), st.integers(0, 4), st.integers(0, 2 ** 32))
def test_generated_words_are_valid(n, depth, seed):
    (tp,) = generate_decomposed(n, depth, seed)
    w = tp.word()
    assert tp.validate() and len(tp.pairs) == depth
    assert len(w) % 2 == 1 and all(1 <= x <= n for x in w)
    assert all(w[i] != w[i + 1] for i in range(len(w) - 1))
    assert w[tp.center_index()] == tp.center

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from bsurv.errors import DomainError, ParseError, ResourceError
from bsurv.sequences import PeriodicSeq, format_word, parse_word
from bsurv.words import (
    apply_lmr,
    cyclic_shift,
    farey_level,
    farey_words,
    is_extended_farey,
    is_farey,
    is_lyndon,
    is_lyndon_e,
    is_palindrome,
    is_palindrome_minus,
    largest_cyclic,
    lmr_decompose,
    rotations,
    smallest_cyclic,
    theta,
    word_minus,
    word_plus,
)

from oracles import farey_naive

W = parse_word


def test_plus_minus():
    assert word_minus(W("01")) == W("00")
    assert word_plus(W("10")) == W("11")
    assert word_minus(W("1")) == W("0")
    assert word_plus(W("10210")) == W("10211")
    with pytest.raises(DomainError):
        word_minus(W("10"))


def test_largest_cyclic():
    assert largest_cyclic(W("10210")) == W("21010")
    assert largest_cyclic(W("3")) == W("3")
    assert largest_cyclic(W("01")) == W("10")


def test_theta():
    assert theta(W("001")) == W("112")
    assert theta(W("01"), 2) == W("23")
    assert theta(PeriodicSeq((), (0,))) == PeriodicSeq((), (1,))


@pytest.mark.parametrize("n,expected", [
    (0, "0 1"),
    (1, "0 01 1"),
    (2, "0 001 01 011 1"),
    (3, "0 0001 001 00101 01 01011 011 0111 1"),
])
def test_farey_levels(n, expected):
    assert " ".join(format_word(w) for w in farey_level(n)) == expected


def test_farey_level_cap():
    with pytest.raises(ResourceError):
        farey_level(30)


@pytest.mark.parametrize("n", range(0, 13))
def test_farey_level_matches_naive(n):
    words = farey_level(n)
    assert [format_word(w) for w in words] == farey_naive(n)
    assert len(words) == 2 ** n + 1
    assert all(a < b for a, b in zip(words, words[1:]))


def test_lyndon_examples():
    assert is_lyndon(W("01")) and not is_lyndon(W("10"))
    assert not is_lyndon(W("0101"))
    assert is_lyndon(W("00101"))
    assert not is_lyndon_e(W("0")) and is_lyndon_e(W("1"))


def test_lyndon_brute_force():
    for n in range(1, 9):
        for w in itertools.product((0, 1, 2), repeat=n):
            rots = [w[i:] + w[:i] for i in range(n)]
            expected = len(set(rots)) == n and min(rots) == w
            assert is_lyndon(w) == expected


def test_extended_farey_examples():
    assert is_extended_farey(W("112"))
    assert is_extended_farey(W("011"))
    assert not is_extended_farey(W("010"))
    assert is_extended_farey(W("3"))


def test_farey_predicate_matches_generation():
    gen = set(farey_words(14))
    for n in range(2, 15):
        for w in itertools.product((0, 1), repeat=n):
            assert is_farey(w) == (w in gen), w


@pytest.mark.parametrize("w,phi", [
    ("0010101", "LRRM"), ("001", "LM"), ("011", "RM"), ("000101001", "LMRM"), ("01", "M"),
])
def test_lmr_examples(w, phi):
    assert lmr_decompose(w) == phi


def test_lmr_round_trip():
    for n in range(1, 9):
        for s in farey_level(n):
            if len(s) < 2:
                continue
            phi = lmr_decompose(s)
            assert cyclic_shift(apply_lmr(phi, (1,))) == s
            assert cyclic_shift(apply_lmr(phi, (0,))) == largest_cyclic(s)


def test_lmr_rejects():
    with pytest.raises(ParseError):
        lmr_decompose("0110")
    with pytest.raises(ParseError):
        lmr_decompose("012")


def test_palindrome_minus():
    assert is_palindrome_minus(W("01"))
    assert is_palindrome_minus(W("00101"))
    with pytest.raises(DomainError):
        is_palindrome_minus(W("0010"))


def test_extended_farey_reversal_and_palindrome():
    words = [w for w in farey_words(16)]
    for s in words:
        for k in (0, 1, 3):
            e = theta(s, k)
            assert largest_cyclic(e) == tuple(reversed(e))
            assert is_palindrome(word_minus(e))


def test_farey_words_are_lyndon():
    assert all(is_lyndon(w) for w in farey_words(14))


digits = st.lists(st.integers(0, 3), min_size=1, max_size=10).map(tuple)


@settings(max_examples=400, deadline=None)
@given(digits, st.integers(1, 3))
def test_theta_equivariance(w, k):
    assert largest_cyclic(theta(w, k)) == theta(largest_cyclic(w), k)
    assert word_plus(theta(w, k)) == theta(word_plus(w), k)
    if w[-1] > 0:
        assert word_minus(theta(w, k)) == theta(word_minus(w), k)


@settings(max_examples=400, deadline=None)
@given(digits)
def test_rotation_extremes(w):
    rots = rotations(w)
    assert largest_cyclic(w) == max(rots)
    assert smallest_cyclic(w) == min(rots)

import pytest
from hypothesis import given, strategies as st

import oracles
from vassep.errors import DimensionError
from vassep.words import (all_words, bar, drop, format_word, in_Cn, in_Dn, in_Zn, lambda_,
                          letters, min_infix, mu, parikh, parse_word, phi, prefix_values, rev,
                          revbar, scalar_walk, word_for_vector)

words1 = st.lists(st.sampled_from([1, -1]), max_size=14).map(tuple)
words2 = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=12).map(tuple)


def test_letters_are_in_integer_order():
    assert letters(2) == [-2, -1, 1, 2]
    assert letters(0) == []


def test_parse_and_format_round_trip():
    assert parse_word("1 -1 2") == (1, -1, 2)
    assert parse_word("") == ()
    assert format_word((1, -1, 2)) == "1 -1 2"
    with pytest.raises(ValueError):
        parse_word("1 0")


def test_phi_examples():
    assert phi((), 3) == (0, 0, 0)
    assert phi((1, -1), 1) == (0,)
    assert phi((1, 1, -1), 1) == (1,)
    with pytest.raises(DimensionError):
        phi((2,), 1)


def test_drop_examples():
    assert drop(()) == 0
    assert drop((-1, 1)) == -1
    assert drop((1, -1, -1, 1)) == -1
    with pytest.raises(DimensionError):
        drop((2,))


def test_mu_examples():
    assert mu(()) == 0
    assert mu((1, 1, -1, 1)) == 2
    assert mu((-1, 1, 1, 1)) == 0
    with pytest.raises(DimensionError):
        mu((1, 2))


def test_bar_rev_revbar():
    assert bar((1, -2)) == (-1, 2)
    assert rev((1, 2)) == (2, 1)
    assert revbar((1, -1, -1)) == (1, 1, -1)


def test_lambda_examples():
    assert lambda_(1, (1, 2, -1)) == (1, -1)
    assert lambda_(2, (1, 1), 2) == ()
    assert lambda_(2, (-2, 1, 2)) == (-1, 1)
    with pytest.raises(DimensionError):
        lambda_(3, (1,), 2)


def test_target_membership_examples():
    assert in_Dn((1, -1), 1)
    assert in_Zn((-1, 1), 1) and not in_Cn((-1, 1), 1)
    assert in_Cn((1, 2, -1), 2) and not in_Zn((1, 2, -1), 2)


def test_word_for_vector_and_parikh():
    assert word_for_vector((2, -1)) == (1, 1, -2)
    assert phi(word_for_vector((3, 0, -2)), 3) == (3, 0, -2)
    assert parikh((1, 1, -2)) == {1: 2, -2: 1}


def test_min_infix_matches_brute_force():
    for w in all_words(1, 7):
        vals = prefix_values(w)
        assert min_infix(vals) == min(oracles.height(v) for v in oracles.infixes(w))


def test_scalar_walk():
    assert scalar_walk((1, -2, 2), (1, 3)) == [0, 1, -2, 1]


def test_target_predicates_exhaustive():
    for n in (1, 2):
        for w in all_words(n, 8 if n == 1 else 6):
            assert in_Dn(w, n) == (in_Zn(w, n) and in_Cn(w, n))
            assert in_Zn(w, n) == oracles.in_Z(w, n)
            assert in_Cn(w, n) == oracles.in_C(w, n)


@given(words2, words2)
def test_phi_is_a_homomorphism(u, v):
    assert phi(u + v, 2) == tuple(a + b for a, b in zip(phi(u, 2), phi(v, 2)))


@given(words2)
def test_bar_and_revbar_negate_phi(w):
    neg = tuple(-x for x in phi(w, 2))
    assert phi(bar(w), 2) == neg
    assert phi(revbar(w), 2) == neg
    assert bar(bar(w)) == w and rev(rev(w)) == w


@given(words1)
def test_drop_and_mu_match_definitions(w):
    assert -len(w) <= drop(w) <= 0
    assert drop(w) == oracles.drop(w)
    assert mu(w) == oracles.mu(w)
    assert mu(w) <= len(w)
    if drop(w) == 0:
        assert mu(w) == max(prefix_values(w))

import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from vassep import automata as au
from vassep.automata import Nfa, Transducer
from vassep.errors import BudgetExceeded, DimensionError
from vassep.limits import Limits
from vassep.separators import Mod, build_separator


def re(n, text):
    return au.from_regex(n, text)


def lang(a, max_len):
    return set(au.enumerate_words(a, max_len))


def test_from_regex_matches_simulation():
    a = re(1, "(1 -1)* 1+")
    assert lang(a, 7) == oracles.nfa_language(a, 7)
    assert a.accepts((1, -1, 1)) and not a.accepts((1, -1))
    assert re(1, "e").accepts(()) and not re(1, "e").accepts((1,))


def test_build_validates_labels():
    with pytest.raises(DimensionError):
        Nfa.build(1, [(0, 2, 1)], [0], [1])


def test_boolean_operations_examples():
    both = au.intersect(re(1, "1*"), re(1, "(1 1)*"))
    assert both.accepts((1, 1)) and not both.accepts((1,))
    assert au.is_empty(au.complement(au.universal(1)))[0]
    diff = au.difference(re(1, "1* -1*"), re(1, "1*"))
    assert diff.accepts((1, -1))
    with pytest.raises(DimensionError):
        au.intersect(re(1, "1"), re(2, "2"))


def test_is_empty_examples():
    assert au.is_empty(Nfa.build(1, [(0, 1, 0)], [0], [1], states=[1])) == (True, None)
    assert au.is_empty(re(1, "1")) == (False, (1,))
    assert au.is_empty(re(1, "1 1 | -1")) == (False, (-1,))


def test_includes_examples():
    assert au.includes(au.universal(1), re(1, "(1 -1)* 1"))[0]
    assert au.includes(re(1, "1"), re(1, "1 | -1")) == (False, (-1,))
    assert au.includes(build_separator(Mod(2, 1)), re(1, "1 1 1"))[0]


def test_includes_budget():
    with pytest.raises(BudgetExceeded):
        au.includes(au.universal(1), build_separator(Mod(50, 1)), Limits(max_states=10))


def test_morphisms():
    pre = au.morphism_preimage(au.projection_morphism(2, 2), re(1, "1"), 2)
    for w in oracles.all_words(2, 4):
        assert pre.accepts(w) == (oracles.project(2, w) == (1,))
    img = au.morphism_image({1: (1, 1)}, re(1, "1"), 1)
    assert lang(img, 4) == {(1, 1)}
    ident = au.morphism_preimage({1: (1,)}, re(1, "1* -1"), 1)
    assert au.equivalent(ident, re(1, "1* -1"))


def test_reverse_bar():
    r = au.reverse_bar(re(1, "1 -1 -1"))
    assert lang(r, 4) == {(1, 1, -1)}
    assert au.is_empty(au.reverse_bar(au.empty_nfa(1)))[0]
    a = re(2, "(1 2 | -2)* -1")
    assert lang(au.reverse_bar(au.reverse_bar(a)), 6) == lang(a, 6)


def test_transducers():
    T = Transducer.build(1, 2, [("s", (1,), (2, 2), "t")], "s", "t")
    assert lang(au.apply_transducer(T, re(1, "1")), 4) == {(2, 2)}
    a = re(1, "(1 -1)* 1")
    assert au.equivalent(au.apply_transducer(au.identity_transducer(1), a), a)
    S = Transducer.build(1, 1, [(0, (1,), (-1, -1), 0), (0, (-1,), (), 0), (0, (), (1,), 1),
                                (1, (-1,), (1,), 1)], 0, 1)
    assert au.transducer_pairs(au.invert(au.invert(S)), 4, 4) == au.transducer_pairs(S, 4, 4)


def test_compose_applies_right_factor_first():
    T = au.morphism_transducer({1: (1, 1)}, 1, 1)       # double
    S = au.morphism_transducer({1: (-1,)}, 1, 1)        # bar
    ST = au.compose(S, T)
    assert lang(au.apply_transducer(ST, re(1, "1")), 4) == {(-1, -1)}


def test_linear_decomposition_examples():
    lin = Nfa.build(1, [(0, 1, 0), (0, -1, 1), (1, -1, 1)], [0], [1])
    assert au.is_linear(lin)
    assert len(au.linear_decomposition(lin)) == 1
    diamond = Nfa.build(1, [(0, 1, 1), (1, 1, 1), (0, -1, 2), (2, -1, 2), (1, 1, 3), (2, 1, 3),
                            (3, 1, 3)], [0], [3])
    assert len(au.linear_decomposition(diamond)) == 2
    assert au.linear_decomposition(au.empty_nfa(2)) == []


def test_simple_cycle_effects_examples():
    assert au.simple_cycle_effects(Nfa.build(1, [(0, 1, 0)], [0], [0])) == {(1,)}
    assert au.simple_cycle_effects(Nfa.build(1, [(0, 1, 0), (0, -1, 0)], [0], [0])) == {(1,), (-1,)}
    assert au.simple_cycle_effects(Nfa.build(2, [(0, 1, 1), (1, 2, 0)], [0], [0])) == {(1, 1)}


def test_find_run_and_closed_walk():
    a = re(1, "1 (-1 1)*")
    run = au.find_run(a, (1, -1, 1))
    assert [e[1] for e in run if e[1] is not None] == [1, -1, 1]
    assert au.find_run(a, (-1,)) is None
    loop = Nfa.build(1, [(0, 1, 1), (1, -1, 2), (2, 1, 0)], [0], [0])
    w = au.closed_walk(loop, 0, 2)
    assert 0 in loop.run(w, [0]) and w == (1, -1, 1)


def test_minimize_and_determinize_preserve_language():
    a = re(2, "(1 | 2 -1)* -2 | 1 1")
    d = au.determinize(a)
    assert d.is_deterministic()
    m = au.minimize(a)
    assert lang(m, 5) == lang(a, 5) == lang(d, 5)


def _rand(seed, n=1):
    return oracles.random_nfa(random.Random(seed), n, 4)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_de_morgan_on_random_automata(s1, s2):
    a, b = _rand(s1), _rand(s2)
    lhs = au.complement(au.union_(a, b))
    rhs = au.intersect(au.complement(a), au.complement(b))
    for w in oracles.all_words(1, 6):
        assert lhs.accepts(w) == rhs.accepts(w) == (not (oracles.nfa_accepts(a, w)
                                                          or oracles.nfa_accepts(b, w)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_includes_against_enumeration(s1, s2):
    a, b = _rand(s1), _rand(s2)
    ok, cex = au.includes(a, b)
    missing = sorted((w for w in oracles.nfa_language(b, 8) if not oracles.nfa_accepts(a, w)),
                     key=lambda w: (len(w), w))
    if ok:
        assert not missing
    else:
        assert oracles.nfa_accepts(b, cex) and not oracles.nfa_accepts(a, cex)
        if missing:
            assert len(cex) == len(missing[0])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([1, 2]))
def test_linear_decomposition_preserves_language(seed, n):
    a = oracles.random_nfa(random.Random(seed), n, 5)
    parts = au.linear_decomposition(a)
    for p in parts:
        assert au.is_linear(p)
    for w in oracles.all_words(n, 8 if n == 1 else 5):
        assert oracles.nfa_accepts(a, w) == any(p.accepts(w) for p in parts)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_is_empty_witness_is_shortest(seed):
    a = _rand(seed)
    empty, w = au.is_empty(a)
    words = sorted(oracles.nfa_language(a, 8), key=lambda v: (len(v), v))
    if empty:
        assert not words
    else:
        assert oracles.nfa_accepts(a, w)
        if len(w) <= 8:
            assert w == words[0]

import math

import pytest

import oracles
from vassep import automata as au
from vassep import vass as V
from vassep.errors import BudgetExceeded, DimensionError, InputError
from vassep.limits import Limits
from vassep.vass import Mode, Vass


def up_down():
    """a1^k abar1^k: count up in p, count down in q."""
    return Vass.build(1, 1, [("p", 1, (1,), "p"), ("p", None, (0,), "q"), ("q", -1, (-1,), "q")],
                      "p", "q")


def of_regex(n, text):
    return V.vass_from_nfa(au.from_regex(n, text))


def test_bounded_language_examples():
    v = up_down()
    reach = V.bounded_language(v, max_steps=6)
    assert (1, -1) in reach and (1, 1, -1, -1) in reach and (-1, 1) not in reach
    loose = Vass.build(1, 1, [("p", 1, (1,), "p"), ("p", -1, (-1,), "p")], "p", "p")
    assert (-1, 1) in V.bounded_language(loose, Mode.INT, 4)
    assert (-1, 1) not in V.bounded_language(loose, Mode.REACH, 4)
    assert V.bounded_language(v, max_steps=0) == set()
    assert V.bounded_language(loose, max_steps=0) == {()}


def test_bounded_language_budget():
    with pytest.raises(BudgetExceeded):
        V.bounded_language(up_down(), Mode.COVER, 40, Limits(max_steps=20))


def test_integer_mode_contains_reachability_mode():
    v = Vass.build(1, 1, [("p", 1, (1,), "q"), ("q", -1, (-1,), "p"), ("q", -1, (-2,), "q"),
                          ("p", None, (1,), "p")], "p", "p")
    reach = V.bounded_language(v, Mode.REACH, 7)
    cover = V.bounded_language(v, Mode.COVER, 7)
    integer = V.bounded_language(v, Mode.INT, 7)
    assert reach <= cover and reach <= integer


@pytest.mark.parametrize("mode", list(Mode))
def test_language_upto_matches_direct_search(mode):
    v = Vass.build(2, 2, [("p", 1, (1, 0), "p"), ("p", 2, (0, 1), "p"), ("p", None, (0, 0), "q"),
                          ("q", -1, (-1, 0), "q"), ("q", -2, (-1, -1), "q")], "p", "q")
    assert V.language_upto(v, 5, 6, mode) == oracles.vass_words(v, 5, 6, mode)


def test_accepts_word():
    assert V.accepts_word(up_down(), (1, 1, -1, -1), 4)
    assert not V.accepts_word(up_down(), (1, -1, -1), 4)


def _generator_image(T, kind, d, in_len, out_len):
    return {w for u, w in au.transducer_pairs(T, in_len, out_len) if oracles.in_target(kind, u, d)}


@pytest.mark.parametrize("mode,kind", [(Mode.REACH, "D"), (Mode.COVER, "C"), (Mode.INT, "Z")])
def test_generator_round_trip(mode, kind):
    v = up_down().with_mode(mode)
    T = V.to_generator(v)
    image = {w for w in _generator_image(T, kind, 1, 12, 6) if len(w) <= 4}
    assert image == V.language_upto(v, 4, 8)
    back = V.from_generator(T, 1, mode)
    assert V.language_upto(back, 4, 8) == V.language_upto(v, 4, 8)


def test_generator_edge_cases():
    empty = Vass.build(1, 1, [], "s", "t")
    assert au.transducer_pairs(V.to_generator(empty), 4, 4) == set()
    ident = V.from_generator(au.identity_transducer(1), 1, Mode.REACH)
    assert V.language_upto(ident, 6, 6) == {w for w in oracles.all_words(1, 6) if oracles.in_D(w, 1)}
    with pytest.raises(DimensionError):
        V.from_generator(au.identity_transducer(1), 2)


def test_builtin_relations():
    rel = V.builtin_relations()
    assert set(rel) == {"R1", "R2", "R3", "R1'", "R3'"}
    assert ((1, 1, -1, 1), (2,)) in V.relation_pairs(rel["R1"], 8)
    assert ((1,), (1, 0)) in V.relation_pairs(rel["R2"], 4)
    assert ((1,), (5, 4)) in V.relation_pairs(rel["R2"], 14)
    r3 = V.relation_pairs(rel["R3"], 8)
    assert ((-1, 1), (0,)) in r3 and ((-1, 1), (1,)) not in r3


@pytest.mark.parametrize("name", ["R1", "R2", "R3", "R1'", "R3'"])
def test_builtin_relations_match_definitions(name):
    rel = V.builtin_relations()[name]
    got = {p for p in V.relation_pairs(rel, 9) if len(p[0]) <= 4 and max(p[1]) <= 3}
    want = set()
    for w in oracles.all_words(1, 4):
        m, f, r = oracles.mu(w), oracles.height(w), oracles.mu(oracles.revbar(w))
        for a in range(4):
            for b in range(4):
                pair = {"R1": (a,), "R2": (a, b), "R3": (a,), "R1'": (a, a + 1),
                        "R3'": (a + 1, a)}[name]
                ok = {"R1": a <= m and b == 0, "R2": a - b == f, "R3": a <= r and b == 0,
                      "R1'": a <= m and b == 0, "R3'": a <= r and b == 0}[name]
                if ok and max(pair) <= 3:
                    want.add((w, pair))
    assert got == want


def test_relation_product():
    rel = V.builtin_relations()
    prod = V.relation_product(rel["R1"], rel["R2"])
    assert prod.m == 3
    assert ((1,), (1, 1, 0)) in V.relation_pairs(prod, 6)
    empty = V.VasRelation(Vass.build(0, 1, [], "s", "t"), 0)
    assert V.relation_pairs(V.relation_product(rel["R1"], empty), 6) == set()
    swap = V.relation_product(rel["R2"], rel["R1"])
    ab = {(w, x) for w, x in V.relation_pairs(prod, 9) if len(w) <= 3 and max(x) <= 2}
    ba = {(w, x[2:] + x[:2]) for w, x in V.relation_pairs(swap, 9) if len(w) <= 3 and max(x) <= 2}
    assert ab == ba


def test_relation_result_examples():
    rel = V.builtin_relations()
    got = V.language_upto(V.relation_result(of_regex(1, "1 -1"), rel["R2"]), 8, 8)
    assert got == {(1,) * r + (2,) * r for r in range(5)}
    assert V.language_upto(V.relation_result(of_regex(1, "1"), rel["R1"]), 6, 6) == {(), (1,)}
    empty = Vass.build(0, 1, [], "s", "t")
    assert V.language_upto(V.relation_result(empty, rel["R1"]), 6, 6) == set()
    with pytest.raises(InputError):
        V.relation_result(up_down().with_mode(Mode.COVER), rel["R1"])


def test_hat_bounded_examples():
    hat = V.hat_bounded(of_regex(1, "1 -1"))
    words = V.language_upto(hat, 12, 14)
    assert (-1, 1) in words
    assert words == oracles.hat_words([(1, -1)], 12)
    for v in words:
        assert oracles.mu(v) <= 1 and oracles.height(v) == 0
    assert V.language_upto(V.hat_bounded(Vass.build(0, 1, [], "s", "t")), 10, 10) == set()
    with pytest.raises(DimensionError):
        V.hat_bounded(of_regex(2, "2"))


def test_hat_sup_examples():
    got = V.language_upto(V.hat_sup(of_regex(2, "1 2")), 6, 6)
    assert got == {(), (1,), (2,), (1, 2)}
    assert V.language_upto(V.hat_sup(Vass.build(0, 2, [], "s", "t")), 6, 6) == set()


def test_sup_tilde_examples():
    def tilde(n, text):
        return V.language_upto(V.sup_tilde(of_regex(n, text)), 10, 10)

    assert tilde(1, "1") == {(1, -1, -1)}
    assert tilde(1, "e") == {(-1,)}
    assert tilde(2, "1 2") == {(1, -1, -1, 2, -2, -2)}
    assert tilde(2, "2 1") == set()
    with pytest.raises(InputError):
        V.sup_tilde(of_regex(1, "-1"))


def test_sup_tilde_on_coverability_input():
    cov = Vass.build(1, 1, [("p", 1, (1,), "p")], "p", "p", Mode.COVER)
    got = V.language_upto(V.sup_tilde(cov), 7, 10)
    assert got == {(1,) * x + (-1,) * (x + 1) for x in range(4)}


def test_commutative_closure_and_kl_bar():
    pi = V.commutative_closure(au.from_regex(2, "1 2"))
    assert V.language_upto(pi, 4, 4) == {(1, 2), (2, 1)}
    assert V.language_upto(V.commutative_closure(au.empty_nfa(1)), 4, 4) == set()
    k = V.kl_bar_product(au.from_regex(1, "1"), au.from_regex(1, "1"))
    assert set(au.enumerate_words(k, 4)) == {(1, -1)}
    with pytest.raises(InputError):
        V.kl_bar_product(au.from_regex(1, "-1"), au.from_regex(1, "1"))


def test_commutative_closure_matches_definition():
    a = au.from_regex(2, "1 (2 -1)* | -2 2")
    base = {tuple(sorted(w)) for w in au.enumerate_words(a, 5)}
    want = {w for w in oracles.all_words(2, 5) if tuple(sorted(w)) in base}
    assert V.language_upto(V.commutative_closure(a), 5, 5) == want


def test_vass_intersect_and_apply_transducer():
    v = V.vass_intersect_nfa(up_down(), au.from_regex(1, "1 1 (1 | -1)*"))
    assert V.language_upto(v, 6, 6) == {(1, 1, -1, -1), (1, 1, 1, -1, -1, -1)}
    double = au.morphism_transducer({1: (1, 1)}, 1, 1)
    img = V.vass_apply_transducer(double, up_down())
    assert V.language_upto(img, 6, 6) == {(), (1, 1, -1, -1)}


def test_karp_miller_acceleration():
    v = Vass.build(1, 1, [("q", None, (1,), "q")], "q", "q", Mode.COVER)
    tree = V.karp_miller(v)
    assert tree.nodes[1].marking == (math.inf,)
    assert V.cover_nonempty(Vass.build(1, 1, [], "q", "q", Mode.COVER)) == (True, ())


def test_sup_coverability_examples():
    both = Vass.build(1, 2, [("q", 1, (1,), "q"), ("q", 2, (1,), "q")], "q", "q", Mode.COVER)
    assert V.sup_coverability(both)
    one = Vass.build(1, 2, [("q", 1, (1,), "q"), ("q", None, (0,), "r"), ("r", 2, (-1,), "r")],
                     "q", "r", Mode.COVER)
    assert V.sup_coverability(one)
    trade = Vass.build(0, 2, [("q", 1, (), "q"), ("q", None, (), "r"), ("r", 2, (), "s")], "q", "s",
                       Mode.COVER)
    assert not V.sup_coverability(trade)
    with pytest.raises(InputError):
        V.sup_coverability(of_regex(1, "-1"))


def test_sup_oracle():
    both = Vass.build(1, 2, [("q", 1, (1,), "q"), ("q", 2, (1,), "q")], "q", "q", Mode.COVER)
    assert V.sup_oracle(both) is True
    assert V.sup_oracle(both.with_mode(Mode.REACH)) is None
    finite = of_regex(1, "1 1")
    assert V.sup_oracle(finite) is False


def test_cover_nonempty_agrees_with_bounded_search():
    machines = [
        up_down().with_mode(Mode.COVER),
        Vass.build(1, 1, [("p", -1, (-1,), "q")], "p", "q", Mode.COVER),
        Vass.build(2, 1, [("p", 1, (1, 0), "p"), ("p", None, (-1, 1), "p"), ("p", -1, (0, -3), "q")],
                   "p", "q", Mode.COVER),
    ]
    expected = [True, False, True]
    for v, want in zip(machines, expected):
        ok, w = V.cover_nonempty(v)
        assert ok == want
        found = V.bounded_language(v, max_steps=12)
        if found:
            assert ok and w in V.bounded_language(v, max_steps=3 * len(w) + 6)

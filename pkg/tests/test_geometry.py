import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from vassep import automata as au
from vassep import geometry as geo
from vassep.automata import Nfa
from vassep.separators import Drift, SubspaceBand, in_band, sep_member


def cone(*gens, n=None):
    return geo.Cone(tuple(gens), n if n is not None else len(gens[0]))


def test_cone_of_examples():
    acyclic = Nfa.build(1, [(0, 1, 1)], [0], [1])
    assert geo.cone_of(acyclic).generators == ()
    loops = Nfa.build(1, [(0, 1, 0), (0, -1, 0)], [0], [0])
    assert set(geo.cone_of(loops).generators) == {(1,), (-1,)}
    quadrant = geo.cone_of(Nfa.build(2, [(0, 1, 0), (0, 2, 0)], [0], [0]))
    assert isinstance(geo.cone_member(quadrant, (2, 3)), geo.Coefficients)
    assert isinstance(geo.cone_member(quadrant, (-1, 0)), geo.FarkasCert)


def test_cone_member_examples():
    assert geo.cone_member(cone((1,)), (0,)) == geo.Coefficients((0,))
    assert geo.cone_member(cone((1,)), (-1,)) == geo.FarkasCert((1,))
    got = geo.cone_member(cone((1,), (-1,)), (5,))
    assert got.x == (5, 0)


def test_dichotomy_examples():
    assert isinstance(geo.dichotomy(cone((1,), (-1,)), 1), geo.FullSpace)
    assert geo.dichotomy(cone((1,)), 1) == geo.Halfspace((1,))
    assert geo.dichotomy(geo.Cone((), 1), 1) == geo.Halfspace((1,))


def test_modulus_examples():
    assert geo.modulus_for_fullspace(cone((1,), (-1,))) == 1
    assert geo.modulus_for_fullspace(cone((2,), (-2,))) == 2
    assert geo.modulus_for_fullspace(cone((1, 1), (-1, 0), (0, -1))) == 1
    with pytest.raises(geo.ContractError):
        geo.modulus_for_fullspace(cone((1,)))


def test_gram_schmidt_examples():
    cc = geo.gram_schmidt_extend(u_basis=[(1, -1)])
    assert cc.basis == ((1, -1), (1, 1))
    assert cc.alpha == 2
    assert cc.A == ((1, -1), (1, 1))
    assert geo.mat_vec(cc.A, (1, -1)) == (2, 0)
    axis = geo.gram_schmidt_extend(u_basis=[(1, 0)])
    assert axis.basis == ((1, 0), (0, 1)) and axis.A == ((1, 0), (0, 1)) and axis.alpha == 1
    hyper = geo.gram_schmidt_extend(normal=(0, 1))
    assert hyper.u_basis == ((1, 0),) and hyper.m == 1


def test_gram_schmidt_rejects_dependent_input():
    with pytest.raises(Exception):
        geo.gram_schmidt_extend(u_basis=[(1, 1), (2, 2)])


@pytest.mark.parametrize("normal", [(1,), (1, 1), (2, -1), (1, 0, -1), (1, 2, 3)])
def test_coordinate_change_invariants(normal):
    cc = geo.gram_schmidt_extend(normal=normal)
    n = len(normal)
    for i in range(n):
        for j in range(n):
            if i != j:
                assert geo.dot(cc.basis[i], cc.basis[j]) == 0
    # A * B = alpha * I, with B holding the basis vectors as columns
    AB = geo.mat_mul(cc.A, cc.B)
    assert AB == tuple(tuple(cc.alpha if i == j else 0 for j in range(n)) for i in range(n))
    for b in cc.basis[:cc.m]:
        assert all(x == 0 for x in geo.mat_vec(cc.A, b)[cc.m:])


def test_dist2_examples():
    assert geo.dist2_to_hyperplane((1, -1), (1, 1)) == 0
    assert geo.dist2_to_hyperplane((1, 0), (1, 1)) == Fraction(1, 2)
    assert geo.dist2_to_hyperplane((2,), (1,)) == 4
    with pytest.raises(Exception):
        geo.dist2_to_hyperplane((1,), (0,))


def test_halfspace_constants_examples():
    loop = Nfa.build(1, [(0, 1, 0)], [0], [0])
    assert geo.halfspace_constants(loop, (1,)) == (1, 1)
    chain = Nfa.build(1, [(0, 1, 0), (0, 1, 1), (1, 1, 1), (1, -1, 2), (2, 1, 2)], [0], [2])
    assert geo.halfspace_constants(chain, (1,)) == (3, 3)
    assert geo.halfspace_constants(au.empty_nfa(1), (1,)) == (1, 0)


def test_shift_bound_examples():
    assert geo.shift_bound(((1,),), 2, [1]) == 3
    assert geo.shift_bound(((1, -1), (1, 1)), 1, [2, 2]) == 4
    assert geo.shift_bound(((0, 0), (0, 0)), 0, [0]) == 0


def test_format_rational():
    assert geo.format_rational(Fraction(3, 4)) == "3/4"
    assert geo.format_rational(Fraction(2, 1)) == "2"


def _halfspace_instances(count, n, seed):
    rng = random.Random(seed)
    found = 0
    while found < count:
        a = au.trim(oracles.random_nfa(rng, n, 4))
        if not a.final:
            continue
        for comp in au.linear_decomposition(a):
            d = geo.dichotomy(geo.cone_of(comp), n)
            if isinstance(d, geo.Halfspace):
                found += 1
                yield comp, d.u


@pytest.mark.parametrize("n", [1, 2])
def test_halfspace_constants_cover_the_language(n):
    for comp, u in _halfspace_instances(15, n, seed=11 * n):
        k, ell = geo.halfspace_constants(comp, u)
        band = SubspaceBand(ell, normal=tuple(u))
        for w in au.enumerate_words(comp, 8 if n == 1 else 6):
            assert sep_member(Drift(tuple(u), k), w) or in_band(band, w)


@pytest.mark.parametrize("normal,ell", [((1, 1), 1), ((1, -1), 2), ((2, 1), 1), ((1,), 1)])
def test_shift_bound_maps_band_into_band(normal, ell):
    cc = geo.gram_schmidt_extend(normal=normal)
    images = cc.letter_images()
    p = geo.shift_bound(cc, ell, [len(v) for v in images.values()])
    n = len(normal)
    for w in oracles.all_words(n, 6 if n == 1 else 5):
        if not in_band(SubspaceBand(ell, normal=normal), w):
            continue
        fw = tuple(y for x in w for y in (images[x] if x > 0 else tuple(-z for z in images[-x])))
        assert in_band(SubspaceBand(p, m=cc.m), fw, n)


gens = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=0, max_size=4)


@settings(max_examples=60, deadline=None)
@given(gens)
def test_dichotomy_certificates(gs):
    c = geo.Cone(tuple(gs), 2)
    d = geo.dichotomy(c, 2)
    if isinstance(d, geo.FullSpace):
        k = geo.modulus_for_fullspace(c, 2)
        combos = geo.integer_combinations(c, k)
        for (i, s), coeffs in combos.items():
            assert all(x >= 0 for x in coeffs)
            total = tuple(sum(x * g[j] for x, g in zip(coeffs, gs)) for j in range(2))
            assert total == geo.unit(2, i, s * k)
    else:
        assert any(d.u)
        assert all(geo.dot(g, d.u) >= 0 for g in gs)


@settings(max_examples=60, deadline=None)
@given(gens, st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_cone_member_is_one_of_two(gs, t):
    c = geo.Cone(tuple(gs), 2)
    got = geo.cone_member(c, t)
    if isinstance(got, geo.Coefficients):
        assert all(x >= 0 for x in got.x)
        assert tuple(sum(x * g[j] for x, g in zip(got.x, gs)) for j in range(2)) == t
    else:
        assert all(geo.dot(g, got.u) >= 0 for g in gs) and geo.dot(t, got.u) < 0

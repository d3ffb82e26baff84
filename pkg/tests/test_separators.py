import pytest

import oracles
from vassep.errors import DimensionError, InputError
from vassep.separators import (Bounded1, BoundedPrime, CoverBounded, Drift, Drift1, Infix1, Mod,
                               NearSubspaceReturn, RevBounded1, SubspaceBand, build_separator,
                               describe, drift_projection, in_band, sep_member, spec_from_json,
                               spec_to_json)

SMALL_SPECS = [Mod(3, 1), Mod(2, 2), Bounded1(2), RevBounded1(2), BoundedPrime(1),
               CoverBounded(1, 1, 2), CoverBounded(2, 0, 2), Infix1(1), Drift1(1), Drift1(2),
               Drift((1, 1), 1), Drift((2, -1), 2), NearSubspaceReturn(1, 2, 1)]


def test_predicate_examples():
    assert sep_member(Mod(2, 1), (1,)) and not sep_member(Mod(2, 1), (1, -1))
    assert sep_member(Bounded1(1), (1, -1, -1)) and not sep_member(Bounded1(1), (1, -1))
    assert sep_member(Drift((1,), 1), (1,))
    assert not sep_member(Drift((1,), 1), (-1, -1))
    assert not sep_member(Drift((1,), 1), (1, -1))


def test_automaton_examples():
    d = build_separator(Drift1(1))
    assert d.accepts((1,)) and not d.accepts((1, -1))
    r = build_separator(NearSubspaceReturn(1, 2, 1))
    assert r.accepts((2, -2, 1)) and not r.accepts((2, 2))
    assert len(build_separator(Mod(2, 1)).states) == 2


@pytest.mark.parametrize("spec", SMALL_SPECS, ids=describe)
def test_automaton_matches_definition(spec):
    a = build_separator(spec)
    for w in oracles.all_words(spec.dim, 8 if spec.dim == 1 else 6):
        expected = oracles.member(spec, w)
        assert sep_member(spec, w) == expected, w
        assert a.accepts(w) == expected, w


@pytest.mark.parametrize("spec,kind", [(Mod(2, 1), "Z"), (Mod(3, 2), "Z"), (Drift((1,), 2), "Z"),
                                       (Drift((1, -1), 1), "Z"), (Bounded1(2), "D"),
                                       (RevBounded1(2), "D"), (CoverBounded(1, 2, 2), "C"),
                                       (CoverBounded(2, 1, 2), "C")], ids=str)
def test_disjoint_from_target(spec, kind):
    for w in oracles.all_words(spec.dim, 10 if spec.dim == 1 else 6):
        assert not (sep_member(spec, w) and oracles.in_target(kind, w, spec.dim))


def test_drift_is_a_preimage_of_the_one_dimensional_family():
    for u in [(1, 1), (2, -1), (0, 1)]:
        for w in oracles.all_words(2, 6):
            assert sep_member(Drift(u, 2), w) == sep_member(Drift1(2), drift_projection(u, w))


def test_bounded_monotone_by_definition():
    for w in oracles.all_words(1, 8):
        if sep_member(Bounded1(1), w):
            assert sep_member(Bounded1(3), w)


def test_in_band_examples():
    assert in_band(SubspaceBand(1, normal=(1, 1)), (1, -2))
    assert in_band(SubspaceBand(1, normal=(1, 1)), (1, -2, -2, 2, 2, -1))
    assert not in_band(SubspaceBand(1, normal=(1, 1)), (1, -2, -2, 2, 1, 1))
    assert in_band(SubspaceBand(0, normal=(1, 1)), ())
    assert not in_band(SubspaceBand(0, normal=(1,)), (1,))
    with pytest.raises(DimensionError):
        in_band(SubspaceBand(1, normal=(0, 0)), (1,))


def test_json_round_trip():
    for spec in SMALL_SPECS:
        assert spec_from_json(spec_to_json(spec)) == spec
    assert spec_to_json(Mod(2, 1)) == {"type": "mod", "k": 2, "n": 1}
    assert spec_from_json({"type": "drift", "u": [1, 0], "k": 3}) == Drift((1, 0), 3)


@pytest.mark.parametrize("bad", [{"type": "mod", "k": 0, "n": 1}, {"type": "drift", "u": [0], "k": 1},
                                 {"type": "nope"}, {"type": "cover_bounded", "i": 3, "k": 1, "n": 2},
                                 {"type": "mod", "k": 2}])
def test_invalid_specs_rejected(bad):
    with pytest.raises(InputError):
        spec_from_json(bad)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        sep_member(Mod(2, 1), (2,))

import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fixture
from encube.algebra import PresentationError
from encube.bar import thh
from encube.cubes import CubesElement, gamma_rs, gamma_vec
from encube.moore import (MooreCell, MooreError, check_composite, check_naturality, compose_records, d_phi,
                          f_phi, moore_homological, moore_map, random_delta, replay,
                          verify_moore_functoriality)
from encube.power import DeltaMorphism, all_delta_morphisms
from encube.randgen import random_lengths, random_word

COLLAPSE = DeltaMorphism(2, 1, (1, 1))
UNIT = DeltaMorphism(0, 1, ())
RANK = {"b": 0, "c": 1, "a": 2}


def words(j):
    return ("".join(w) for w in itertools.product("abc", repeat=j))


def test_f_phi_examples():
    assert f_phi(DeltaMorphism.identity(3), "abc") == "abc"
    assert f_phi(COLLAPSE, "ab") == "a"
    assert f_phi(COLLAPSE, "cb") == "c"
    assert f_phi(UNIT, "") == "b"


def test_f_phi_against_fibrewise_maximum():
    # independent description: the strongest letter of each fibre, b < c < a
    for j in range(0, 6):
        for m in range(1, 6):
            for phi in all_delta_morphisms(j, m):
                for w in words(j):
                    expected = "".join(max((w[k - 1] for k in phi.fibre(i)), key=RANK.get, default="b")
                                       for i in range(1, m + 1))
                    assert f_phi(phi, w) == expected


def test_f_phi_functorial_exhaustive():
    for j in range(0, 5):
        for m in range(1, 5):
            for q in range(1, 5):
                for phi in all_delta_morphisms(j, m):
                    for psi in all_delta_morphisms(m, q):
                        comp = phi.then(psi)
                        for w in words(j):
                            assert f_phi(psi, f_phi(phi, w)) == f_phi(comp, w)


def test_d_phi_examples():
    gamma = CubesElement.from_intervals((0, Fraction(1, 2)), (Fraction(1, 2), 1))
    assert d_phi(COLLAPSE, "aa", (1, 1)) == ("a", (Fraction(2),), [gamma])
    assert d_phi(UNIT, "", ()) == ("b", (Fraction(0),), [])
    y, s, el = d_phi(DeltaMorphism.from_blocks((2, 1)), "aca", (1, 2, 1))
    assert y == "aa" and s == (3, 1)
    assert el == [CubesElement.from_intervals((0, Fraction(1, 3))), CubesElement.from_intervals((0, 1))]


def test_d_phi_rejects_incompatible_lengths():
    with pytest.raises(MooreError):
        d_phi(COLLAPSE, "ab", (0, 1))
    with pytest.raises(MooreError):
        d_phi(COLLAPSE, "ab", (1,))
    with pytest.raises(MooreError):
        MooreCell("ax", (1, 1))


def test_moore_map_examples():
    cell = MooreCell("ab", (1, 0))
    assert moore_map(DeltaMorphism.identity(2), cell) == (cell, [])
    new, record = moore_map(COLLAPSE, MooreCell("aa", (1, 3)))
    assert record == [gamma_rs(1, 3)] and new.lengths == (4,)
    new, record = moore_map(UNIT, MooreCell("", ()))
    assert new.word == "b" and new.lengths == (0,) and record == []


def test_double_collapse_is_proportional_subdivision():
    r = (Fraction(1), Fraction(2), Fraction(3), Fraction(4))
    phi = DeltaMorphism.from_blocks((2, 2))
    psi = DeltaMorphism.from_blocks((2,))
    y, s, g = d_phi(phi, "aaaa", r)
    _, _, h = d_phi(psi, y, s)
    composed = compose_records(psi, y, g, h)
    _, _, direct = d_phi(phi.then(psi), "aaaa", r)
    assert composed == direct
    cuts = [Fraction(0), Fraction(1, 10), Fraction(3, 10), Fraction(6, 10), Fraction(1)]
    assert direct == [CubesElement.from_intervals(*zip(cuts, cuts[1:]))]


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 6), st.integers(1, 6), st.integers(1, 6))
def test_length_conservation_and_composites(seed, j, m, q):
    rng = random.Random(seed)
    phi, psi = random_delta(rng, j, m), random_delta(rng, m, q)
    w = random_word(rng, j)
    r = random_lengths(rng, w)
    _, s, _ = d_phi(phi, w, r)
    assert sum(s) == sum(r)
    assert check_composite(phi, psi, w, r) is None
    for k, x in enumerate(w, start=1):
        if x == "c":
            assert check_naturality(phi, w, r, k) is None


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 3), st.integers(1, 4), st.integers(1, 3))
def test_concatenation_square(seed, j1, m1, j2, m2):
    rng = random.Random(seed)
    theta, phi = random_delta(rng, j1, m1), random_delta(rng, j2, m2)
    w1, w2 = random_word(rng, j1), random_word(rng, j2)
    r1, r2 = random_lengths(rng, w1), random_lengths(rng, w2)
    y, s, el = d_phi(theta.concat(phi), w1 + w2, r1 + r2)
    ya, sa, ela = d_phi(theta, w1, r1)
    yb, sb, elb = d_phi(phi, w2, r2)
    assert (y, s, el) == (ya + yb, sa + sb, ela + elb)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_zero_length_b_is_neutral(seed, j):
    rng = random.Random(seed)
    w = random_word(rng, j)
    r = random_lengths(rng, w)
    i = rng.randint(0, j)
    # insert a b of length 0 at position i, then collapse it into a neighbour
    wide = w[:i] + "b" + w[i:]
    lengths = r[:i] + (Fraction(0),) + r[i:]
    images = tuple(range(1, i + 1)) + ((i if i > 0 else 1),) + tuple(range(i + 1, j + 1))
    collapse = DeltaMorphism(j + 1, j, tuple(sorted(images)))
    y, s, el = d_phi(collapse, wide, lengths)
    y0, s0, el0 = d_phi(DeltaMorphism.identity(j), w, r)
    assert (y, s, el) == (y0, s0, el0)


def test_gamma_vec_matches_gamma_rs():
    for r in range(1, 5):
        for s in range(1, 5):
            assert gamma_vec("aa", (r, s))[0] == gamma_rs(r, s)


def test_suite_and_replay():
    report = verify_moore_functoriality(200, 6, seed=11)
    doc = report.to_json()
    assert doc["ok"] and doc["composite_checks"] == 200
    assert doc["zero_length_b"] > 0 and doc["c_letters"] > 0
    record = {"check": "composite", "phi": {"j": 2, "m": 1, "images": [1, 1]},
              "psi": {"j": 1, "m": 1, "images": [1]}, "word": "ab", "lengths": ["1", "0"], "spot": None}
    assert replay(json.dumps(record)) is None
    nat = {"check": "naturality", "phi": {"j": 3, "m": 2, "images": [1, 1, 2]}, "psi": None,
           "word": "acb", "lengths": ["1", "1/2", "0"], "spot": 2}
    assert replay(nat) is None


def test_moore_homological():
    alg = fixture("f2_dual_numbers")
    m = moore_homological(alg)
    assert m.mult == alg.mult and "moore" in m.annotations
    table = thh(m, 1)
    assert table.bettis() == thh(alg, 1).bettis() and "moore" in table.meta
    with pytest.raises(PresentationError):
        moore_homological(alg.with_flags(drop=["associative"]))

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from encube.cubes import (CubesElement, CubesError, Interval, LittleCube, Permutation, act_permutation,
                          block_transpose, compose_at, concat, cube, full_compose, gamma_rs, gamma_vec,
                          identity_element, interchange, rho_first, rho_last, unit_element)
from encube.randgen import random_element, random_permutation
from encube.verify import direct_sum, verify_interchange, verify_operad

GAMMA = CubesElement.from_intervals((0, Fraction(1, 2)), (Fraction(1, 2), 1))


def intervals(*pairs):
    return CubesElement.from_intervals(*[(Fraction(a), Fraction(b)) for a, b in pairs])


def test_identity_element():
    assert str(identity_element(1)) == "([0,1])"
    assert identity_element(2).cubes[0].factors == (Interval(Fraction(0), Fraction(1)),) * 2
    with pytest.raises(CubesError):
        identity_element(0)


def test_partial_compositions_of_gamma():
    assert compose_at(GAMMA, 1, GAMMA) == intervals((0, "1/4"), ("1/4", "1/2"), ("1/2", 1))
    assert compose_at(GAMMA, 2, GAMMA) == intervals((0, "1/2"), ("1/2", "3/4"), ("3/4", 1))


def test_compose_errors():
    with pytest.raises(CubesError):
        compose_at(GAMMA, 3, GAMMA)
    with pytest.raises(CubesError):
        compose_at(GAMMA, 1, identity_element(2))


def test_full_compose_examples():
    assert full_compose(GAMMA, [GAMMA, identity_element(1)]) == compose_at(GAMMA, 1, GAMMA)
    assert full_compose(GAMMA, [unit_element(1), unit_element(1)]) == unit_element(1)


def test_swap_action():
    assert act_permutation(GAMMA, Permutation((2, 1))) == intervals(("1/2", 1), (0, "1/2"))
    assert act_permutation(GAMMA, Permutation.identity(2)) == GAMMA


def test_gamma_rs_values():
    assert gamma_rs(1, 1) == GAMMA
    assert gamma_rs(2, 6) == intervals((0, "1/4"), ("1/4", 1))
    assert gamma_rs(3, 1) == intervals((0, "3/4"), ("3/4", 1))
    assert concat(2, 6) == (Fraction(8), gamma_rs(2, 6))
    with pytest.raises(CubesError):
        gamma_rs(0, 1)


def test_gamma_vec_values():
    assert gamma_vec("aa", (1, 1)) == (GAMMA, Fraction(2))
    assert gamma_vec("aca", (1, 2, 1))[0] == intervals((0, "1/4"), ("3/4", 1))
    assert gamma_vec("bb", (0, 0))[0] == unit_element(1)
    with pytest.raises(CubesError):
        gamma_vec("ab", (0, 1))
    with pytest.raises(CubesError):
        gamma_vec("ca", (0, 1))


def test_interchange_examples():
    assert interchange(GAMMA, identity_element(1)) == rho_first(GAMMA, 2)
    assert interchange(identity_element(1), GAMMA) == rho_last(GAMMA)
    squares = interchange(GAMMA, GAMMA)
    h = Fraction(1, 2)
    expected = [((0, h), (0, h)), ((0, h), (h, 1)), ((h, 1), (0, h)), ((h, 1), (h, 1))]
    assert squares == CubesElement(2, tuple(cube(*b) for b in expected))
    assert rho_first(identity_element(1), 3) == identity_element(3)
    assert rho_first(GAMMA, 2) == CubesElement(2, (cube((0, h), (0, 1)), cube((h, 1), (0, 1))))
    assert rho_last(GAMMA) == CubesElement(2, (cube((0, 1), (0, h)), cube((0, 1), (h, 1))))


def test_block_transpose():
    assert block_transpose(1, 4) == Permutation.identity(4)
    assert block_transpose(2, 2) == Permutation((1, 3, 2, 4))
    for m in range(1, 7):
        for l in range(1, 7):
            assert block_transpose(m, l).then(block_transpose(l, m)) == Permutation.identity(m * l)


def test_overlap_rejected():
    with pytest.raises(CubesError):
        intervals((0, "1/2"), ("1/4", 1))
    with pytest.raises(CubesError):
        Interval(Fraction(1, 2), Fraction(1, 2))


def test_debug_rendering_is_exact():
    assert str(rho_first(GAMMA, 2)) == "([0,1/2]x[0,1], [1/2,1]x[0,1])"


def test_operad_suite_small():
    assert verify_operad(100, seed=3).ok
    assert verify_interchange(100, seed=3).ok


# property-based invariants ----------------------------------------------------

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(0, 5))
def test_random_elements_are_valid_and_unital(seed, dim, arity):
    rng = random.Random(seed)
    c = random_element(rng, dim, arity)
    assert c.arity == arity and c.overlapping_pair() is None
    assert full_compose(identity_element(dim), [c]) == c
    assert full_compose(c, [identity_element(dim)] * arity) == c


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 4))
def test_permutation_action_is_a_right_action(seed, dim, arity):
    rng = random.Random(seed)
    c = random_element(rng, dim, arity)
    s, t = random_permutation(rng, arity), random_permutation(rng, arity)
    assert act_permutation(act_permutation(c, s), t) == act_permutation(c, s.then(t))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 3))
def test_inner_equivariance(seed, dim):
    rng = random.Random(seed)
    c = random_element(rng, dim, 2)
    args = [random_element(rng, dim, rng.randint(1, 3)) for _ in range(2)]
    taus = [random_permutation(rng, a.arity) for a in args]
    lhs = full_compose(c, [act_permutation(a, t) for a, t in zip(args, taus)])
    assert lhs == act_permutation(full_compose(c, args), direct_sum(taus))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 3), st.integers(1, 4), st.integers(1, 4))
def test_interchange_property(seed, n, l, m):
    rng = random.Random(seed)
    a, c = random_element(rng, 1, l), random_element(rng, n - 1, m)
    assert full_compose(rho_first(a, n), [rho_last(c)] * l) == interchange(a, c)
    assert full_compose(rho_last(c), [rho_first(a, n)] * m) == act_permutation(
        interchange(a, c), block_transpose(m, l))


def test_little_cube_dimension_mismatch():
    with pytest.raises(CubesError):
        CubesElement(2, (LittleCube((Interval(Fraction(0), Fraction(1)),)),))

import pytest

from conftest import F2, F3, Q, Z, fixture
from encube.algebra import PresentationError, exterior, reduced_tensor_algebra, truncated_polynomial
from encube.bar import (BarError, bar, bar_unitalization_check, closed_iterated_bar, iterated_bar,
                        q_projection, reduced_bar, require_nonunital, thh, verify_maintq)
from encube.chain import is_quasi_iso
from oracles import exterior_bar_brute, hochschild_truncated_polynomial, reduced_bar_free_monoid

REDUCED = ["reduced_exterior_deg1", "reduced_truncated_x3", "zero_mult_deg0"]


@pytest.mark.parametrize("ring,p,n", [(F2, 2, 2), (Q, None, 2), (F3, 3, 3), (Q, None, 3), (F2, 2, 3)])
def test_thh_matches_hochschild_oracle(ring, p, n):
    got = thh(truncated_polynomial(ring, n), 3).bettis()
    assert got == hochschild_truncated_polynomial(n, p, range(0, 4))


def test_thh_golden_values():
    assert thh(fixture("f2_dual_numbers"), 3).bettis() == (2, 2, 2, 2)
    assert thh(fixture("q_dual_numbers"), 3).bettis() == (2, 1, 1, 1)


def test_thh_integral_torsion():
    h = thh(truncated_polynomial(Z, 2), 3)
    assert h.bettis() == (2, 1, 1, 1)
    assert [h.torsion(k) for k in range(4)] == [(), (2,), (), (2,)]


@pytest.mark.parametrize("p", [2, 3])
def test_bar_of_exterior_matches_brute_force(p):
    from encube.linalg import Coefficients

    got = bar(exterior(Coefficients.prime(p), 1), 6).bettis()
    assert got == exterior_bar_brute(p, 6) == (1, 0, 1, 0, 1, 0, 1)


def test_reduced_bar_of_tensor_algebra():
    got = reduced_bar(reduced_tensor_algebra(F2, 6), 4).bettis()
    assert got == reduced_bar_free_monoid(6, 4) == (0, 1, 0, 0, 0)
    assert reduced_bar(fixture("reduced_tensor_w6"), 4).bettis() == (0, 1, 0, 0, 0)


@pytest.mark.parametrize("name", REDUCED)
def test_unitalization_adds_exactly_the_unit(name):
    full, red, ok = bar_unitalization_check(fixture(name), 4)
    assert ok
    assert full.betti(0) == red.betti(0) + 1


@pytest.mark.parametrize("name", ["zero_mult_deg0", "reduced_exterior_deg1"])
@pytest.mark.parametrize("n", [2, 3])
def test_iterated_matches_closed(name, n):
    alg = fixture(name)
    assert iterated_bar(alg, n, 4).same_values(closed_iterated_bar(alg, n, 4))


def test_iterated_bar_values():
    assert closed_iterated_bar(fixture("zero_mult_deg0"), 2, 4).bettis() == (0, 0, 1, 1, 1)
    assert iterated_bar(fixture("reduced_exterior_deg1"), 1, 4).bettis() == reduced_bar(
        fixture("reduced_exterior_deg1"), 4).bettis()


@pytest.mark.parametrize("name", REDUCED + ["reduced_tensor_w6"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_maintq_split(name, n):
    alg = fixture(name)
    if n >= 2 and not alg.has("commutative"):
        pytest.skip("iteration needs a commutative input")
    report = verify_maintq(alg, n, 4)
    assert report["ok"], report
    assert verify_maintq(alg, n, 4, closed=True)["ok"]


def test_maintq_free_mode_on_tensor_algebra():
    alg = reduced_tensor_algebra(F2, 6)
    assert verify_maintq(alg, 1, 4, mode="free")["ok"]
    assert is_quasi_iso(q_projection(alg, 1, 4), (0, 5))


def test_maintq_negative_control():
    zm = fixture("zero_mult_deg0")
    assert not is_quasi_iso(q_projection(zm, 2, 4), (0, 5))
    assert not verify_maintq(zm, 1, 4, mode="free")["ok"]
    with pytest.raises(BarError):
        verify_maintq(zm, 2, 4, mode="free")


def test_input_discipline():
    with pytest.raises(BarError):
        reduced_bar(fixture("f2_dual_numbers"), 3)
    with pytest.raises(BarError):
        bar(fixture("zero_mult_deg0"), 3)
    with pytest.raises(PresentationError):
        require_nonunital(fixture("f2_dual_numbers"))
    with pytest.raises(BarError):
        thh(fixture("f2_dual_numbers"), -1)

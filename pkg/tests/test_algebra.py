import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F2, F3, Q, fixture
from encube.algebra import (AlgebraPresentation, PresentationError, augmentation_ideal,
                            decomposables_quotient, exterior, reduced_tensor_algebra, truncated_polynomial,
                            unitalize, zero_mult)
from encube.chain import ChainComplex
from encube.linalg import SparseMatrix

FIXTURES = ["f2_dual_numbers", "q_dual_numbers", "exterior_deg1", "zero_mult_deg0",
            "reduced_exterior_deg1", "reduced_truncated_x3", "reduced_tensor_w6"]


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_parse_and_roundtrip(name):
    alg = fixture(name)
    again = AlgebraPresentation.from_json(json.loads(alg.dumps()))
    assert again.to_json() == alg.to_json()
    assert alg.has("associative")


def test_builders_validate():
    for alg in (truncated_polynomial(F2, 2), truncated_polynomial(Q, 4), exterior(F3, 1),
                reduced_tensor_algebra(F2, 6), truncated_polynomial(F3, 3, reduced=True)):
        alg.validate()


def test_broken_associativity_has_witness():
    alg = fixture("reduced_truncated_x3")
    broken = dict(alg.mult)
    broken[(1, 0)] = {1: F2(1)}  # x^2 * x = x^2, while x * x^2 = 0
    bad = AlgebraPresentation(alg.ring, alg.labels, alg.degrees, broken, flags=alg.flags)
    with pytest.raises(PresentationError) as err:
        bad.validate()
    assert err.value.witness


def test_d_squared_nonzero_rejected():
    doc = {"coefficients": "Q", "basis": [{"label": "a", "degree": 2}, {"label": "b", "degree": 1},
                                          {"label": "c", "degree": 0}],
           "differential": [[0, [[1, "1"]]], [1, [[2, "1"]]]], "flags": ["nonunital"]}
    with pytest.raises(PresentationError) as err:
        AlgebraPresentation.from_json(doc)
    assert err.value.witness == ("a",)


def test_malformed_documents():
    with pytest.raises(PresentationError):
        AlgebraPresentation.from_json({"coefficients": "F2"})
    with pytest.raises(PresentationError):
        AlgebraPresentation.from_json({"coefficients": "F2", "basis": [{"label": "x", "degree": 0}],
                                       "multiplication": [[0, 3, [[0, "1"]]]]})
    with pytest.raises(PresentationError):
        AlgebraPresentation.from_json({"coefficients": "F2", "basis": [], "flags": ["bogus"]})


def test_unit_and_augmentation_checks():
    doc = fixture("f2_dual_numbers").to_json()
    doc["unit"] = [[1, "1"]]
    with pytest.raises(PresentationError):
        AlgebraPresentation.from_json(doc)
    doc = fixture("f2_dual_numbers").to_json()
    doc["augmentation"] = [[0, "1"], [1, "1"]]
    with pytest.raises(PresentationError):
        AlgebraPresentation.from_json(doc)


def test_unitalize_then_ideal_is_identity():
    n = fixture("reduced_truncated_x3")
    k = unitalize(n)
    k.validate()
    assert k.rank == n.rank + 1 and k.has("augmented")
    back = augmentation_ideal(k)
    assert back.mult == n.mult and back.labels == n.labels


def test_indecomposables_of_zero_mult_is_identity():
    module = ChainComplex(Q, {0: ["a"], 1: ["b", "c"]}, {1: SparseMatrix.from_dense(Q, [[1, 0]])})
    n = zero_mult(module)
    n.validate()
    qn, proj, kept = decomposables_quotient(n)
    assert qn.ranks == module.ranks
    assert sorted(kept) == list(range(n.rank))


@pytest.mark.parametrize("cap", [3, 4, 6])
def test_indecomposables_of_truncated_algebras(cap):
    qn, _, kept = decomposables_quotient(reduced_tensor_algebra(F2, cap))
    assert qn.ranks == {0: 1}
    qn, _, _ = decomposables_quotient(truncated_polynomial(F2, cap, reduced=True))
    assert qn.ranks == {0: 1}


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.sampled_from([F2, F3, Q]), st.integers(0, 2))
def test_truncated_polynomials_are_valid(n, ring, degree):
    alg = truncated_polynomial(ring, n, degree)
    alg.validate()
    assert AlgebraPresentation.from_json(json.loads(alg.dumps())).to_json() == alg.to_json()
    ideal = augmentation_ideal(alg)
    ideal.validate()
    assert ideal.rank == n - 1

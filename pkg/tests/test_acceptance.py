"""Acceptance suite: one timed pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in
the terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import json
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import F2, Q, fixture  # noqa: E402
from encube.algebra import AlgebraPresentation, PresentationError, augmentation_ideal, exterior  # noqa: E402
from encube.bar import (bar, bar_simplicial, bar_unitalization_check, closed_iterated_bar,  # noqa: E402
                        iterated_bar, q_projection, reduced_bar, thh, verify_maintq)
from encube.chain import ChainComplex, ChainComplexError, is_quasi_iso  # noqa: E402
from encube.cli import main  # noqa: E402
from encube.diagonal import BarHomology, bar_diagonal, edgewise_subdivide, verify_hopf  # noqa: E402
from encube.linalg import SparseMatrix  # noqa: E402
from encube.moore import verify_moore_functoriality  # noqa: E402
from encube.power import partial_from_presentation, rectify, unitalize_system  # noqa: E402
from encube.simplicial import SimplicialIdentityError, simplicial_circle  # noqa: E402
from encube.verify import verify_interchange, verify_operad  # noqa: E402
from oracles import (exterior_bar_brute, hochschild_truncated_polynomial,  # noqa: E402
                     reduced_bar_free_monoid)

RESULTS: list[str] = []
N_FIXTURES = ["reduced_exterior_deg1", "reduced_truncated_x3", "zero_mult_deg0"]
UNITAL = ["f2_dual_numbers", "q_dual_numbers", "exterior_deg1"]
NONUNITAL = N_FIXTURES + ["reduced_tensor_w6"]


def criterion(number: int, title: str, bound: float):
    """Run the body, time it, record one line, and fail on error or overrun."""
    def wrap(body):
        def test():
            start = time.perf_counter()
            detail, ok = "", False
            try:
                detail = body() or ""
                ok = True
            except AssertionError as exc:
                detail = f"assertion failed: {exc}"
            elapsed = time.perf_counter() - start
            in_time = elapsed < bound
            status = "PASS" if ok and in_time else "FAIL"
            line = f"{status} [{number:2d}] {title}: {elapsed:.2f}s (bound {bound:g}s)"
            if detail:
                line += f" - {detail}"
            if ok and not in_time:
                line += " - time bound exceeded"
            RESULTS.append(line)
            print(line)
            assert ok, detail
            assert in_time, f"took {elapsed:.2f}s, bound {bound}s"
        test.__name__ = body.__name__
        test.__doc__ = title
        return test
    return wrap


@criterion(1, "operad laws, 1000 trials", 10)
def test_c01_operad_laws():
    report = verify_operad(trials=1000, seed=0, max_arity=5, max_dim=3)
    assert report.ok, report.counterexample
    assert report.checks["associativity"] == 1000
    return f"{sum(report.checks.values())} identities"


@criterion(2, "interchange identity, 500 pairs", 10)
def test_c02_interchange():
    report = verify_interchange(trials=500, seed=0)
    assert report.ok, report.counterexample
    assert report.checks == {"first then last": 500, "last then first": 500}
    return "1000 identities"


@criterion(3, "Moore functoriality, 500 trials, arity <= 6", 20)
def test_c03_moore():
    report = verify_moore_functoriality(trials=500, max_arity=6, seed=0)
    assert report.ok, report.counterexample
    assert report.c_letters > 0 and report.zero_length_b > 0
    return (f"{report.composite_checks} composites, {report.naturality_checks} naturality checks, "
            f"{report.zero_length_b} zero-length b cells")


@criterion(4, "THH against the periodic-resolution oracle", 30)
def test_c04_thh_oracle():
    f2 = thh(fixture("f2_dual_numbers"), 3).bettis()
    q = thh(fixture("q_dual_numbers"), 3).bettis()
    assert f2 == hochschild_truncated_polynomial(2, 2, range(4)) == (2, 2, 2, 2)
    assert q == hochschild_truncated_polynomial(2, None, range(4)) == (2, 1, 1, 1)
    return f"F2 {f2}, Q {q}"


@criterion(5, "reduced bar of the truncated tensor algebra (n = 1)", 30)
def test_c05_reduced_tensor():
    alg = fixture("reduced_tensor_w6")
    got = reduced_bar(alg, 4).bettis()
    assert got == reduced_bar_free_monoid(6, 4) == (0, 1, 0, 0, 0)
    assert is_quasi_iso(q_projection(alg, 1, 4), (0, 5))
    assert verify_maintq(alg, 1, 4, mode="free")["ok"]
    return f"betti {got}, q_projection quasi-iso"


@criterion(6, "bar of the unitalization = reduced bar plus the unit", 30)
def test_c06_unitalization():
    for name in NONUNITAL:
        full, red, ok = bar_unitalization_check(fixture(name), 4)
        assert ok, name
    return f"{len(NONUNITAL)} fixtures"


@criterion(7, "iterated bar equals the closed formula, n = 2, 3", 60)
def test_c07_iterated_vs_closed():
    algs = {"zero_mult_deg0": fixture("zero_mult_deg0"),
            "f2_dual_numbers (ideal)": augmentation_ideal(fixture("f2_dual_numbers")),
            "reduced_exterior_deg1": fixture("reduced_exterior_deg1")}
    for name, alg in algs.items():
        for n in (2, 3):
            a = iterated_bar(alg, n, 4)
            b = closed_iterated_bar(alg, n, 4)
            assert a.same_values(b), (name, n, a.bettis(), b.bettis())
    return f"{len(algs)} inputs x n in (2, 3)"


@criterion(8, "suspension/indecomposables splitting and negative control", 30)
def test_c08_maintq():
    inputs = [fixture(name) for name in NONUNITAL] + [augmentation_ideal(fixture(n)) for n in UNITAL]
    count = 0
    for alg in inputs:
        for n in (1, 2, 3):
            for closed in (False, True):
                report = verify_maintq(alg, n, 4, closed=closed)
                assert report["checks"]["composite_is_sigma_q"], (alg.labels, n, closed)
                count += 1
    zm = fixture("zero_mult_deg0")
    assert not is_quasi_iso(q_projection(zm, 2, 4), (0, 5))
    return f"{count} splittings; zero-mult n = 2 is not a quasi-iso"


@criterion(9, "bar of the exterior algebra on a degree-1 class over F2", 20)
def test_c09_exterior_bar():
    got = bar(exterior(F2, 1), 6).bettis()
    assert got == exterior_bar_brute(2, 6) == (1, 0, 1, 0, 1, 0, 1)
    return f"betti {got}"


@criterion(10, "rectification augmentation is a homology iso", 60)
def test_c10_rectification():
    cases = [("f2_dual_numbers", partial_from_presentation(fixture("f2_dual_numbers"), 2)),
             ("reduced_truncated_x3", unitalize_system(fixture("reduced_truncated_x3"), 2)),
             ("zero_mult_deg0", unitalize_system(fixture("zero_mult_deg0"), 2))]
    for name, pa in cases:
        total, aug = rectify(pa, 3, 2, top=3)
        assert is_quasi_iso(aug, (0, 3)), name
    return f"{len(cases)} fixtures, window 0..2"


@criterion(11, "subdivision, bar diagonal, divided powers and Hopf", 60)
def test_c11_diagonal():
    circle = simplicial_circle(F2, 7)
    assert edgewise_subdivide(circle, cap=3).realize().homology(range(0, 3)).bettis() == (1, 1, 0)
    for name in UNITAL:
        alg = fixture(name)
        big, small = bar_simplicial(alg, 7, 7), bar_simplicial(alg, 3, 3)
        sd = edgewise_subdivide(big, cap=3, top=3)
        assert sd.realize().homology(range(0, 3)).same_values(small.realize().homology(range(0, 3))), name
        data = bar_diagonal(alg, 3)
        data.diagonal.check_chain_map(range(0, data.top + 1))
    h = BarHomology(exterior(F2, 1), 6)
    for k in range(4):
        delta = {pair: F2.reduce(c) for pair, c in h.coproduct[2 * k][0].items()}
        assert delta == {((2 * i, 0), (2 * (k - i), 0)): 1 for i in range(k + 1)}, k
    for name, top in (("f2_dual_numbers", 4), ("q_dual_numbers", 4), ("exterior_deg1", 6)):
        report = verify_hopf(fixture(name), top)
        assert report["ok"], (name, report["failures"])
    return "sd invariant on 4 objects, coproduct binomial for k <= 3, Hopf on 3 fixtures"


@criterion(12, "corrupted inputs rejected with witnesses; exit codes", 30)
def test_c12_negative_validation():
    tmp = Path(tempfile.mkdtemp())
    # broken associativity
    doc = fixture("reduced_truncated_x3").to_json()
    for b in doc["basis"]:
        b.pop("weight", None)
    doc["flags"] = ["associative", "nonunital"]
    doc["multiplication"].append([1, 0, [[1, "1"]]])  # x^2 * x = x^2 while x * x^2 = 0
    try:
        AlgebraPresentation.from_json(doc)
        raise AssertionError("broken associativity accepted")
    except PresentationError as exc:
        assert exc.witness and "associativity" in str(exc)
    # d^2 != 0
    sq = {"coefficients": "Q", "basis": [{"label": "a", "degree": 2}, {"label": "b", "degree": 1},
                                         {"label": "c", "degree": 0}],
          "differential": [[0, [[1, "1"]]], [1, [[2, "1"]]]], "flags": ["nonunital"]}
    try:
        AlgebraPresentation.from_json(sq)
        raise AssertionError("d^2 != 0 accepted")
    except PresentationError as exc:
        assert exc.witness == ("a",)
    try:
        ChainComplex(Q, {0: ["a"], 1: ["b"], 2: ["c"]},
                     {1: SparseMatrix.from_dense(Q, [[1]]), 2: SparseMatrix.from_dense(Q, [[1]])})
        raise AssertionError("chain complex with d^2 != 0 accepted")
    except ChainComplexError:
        pass
    # broken simplicial identity
    circle = simplicial_circle(F2, 3)
    circle.faces[2][0], circle.faces[2][1] = circle.faces[2][1], circle.faces[2][0]
    try:
        circle.validate()
        raise AssertionError("broken simplicial identity accepted")
    except SimplicialIdentityError as exc:
        assert "d_" in str(exc)
    try:
        edgewise_subdivide(simplicial_circle(F2, 7), cap=3, rule="naive")
        raise AssertionError("wrong subdivision degeneracies accepted")
    except SimplicialIdentityError:
        pass
    # exit-code discipline
    bad = tmp / "bad.json"
    bad.write_text(json.dumps(doc))
    codes = {
        "corrupt file": main(["compute", "thh", str(bad)]),
        "missing file": main(["compute", "thh", str(tmp / "missing.json")]),
        "failed check": main(["verify", "maintq", "zero_mult_deg0", "--mode", "free"]),
        "passing run": main(["compute", "thh", "f2_dual_numbers", "--max-degree", "1"]),
    }
    assert codes == {"corrupt file": 2, "missing file": 2, "failed check": 1, "passing run": 0}, codes
    return "3 corruptions rejected, exit codes 2/2/1/0"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

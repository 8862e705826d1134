import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F2, F3, Q, Z
from encube import _kernels_py, kernels
from encube.algebra import exterior, truncated_polynomial
from encube.bar import bar_simplicial, cyclic_bar
from encube.chain import (ChainComplex, ChainComplexError, ChainMap, HomologyTable, is_quasi_iso,
                          mapping_cone, tensor, unit_complex, zero_complex)
from encube.linalg import Coefficients, SparseMatrix
from encube.simplicial import (MultiComplex, SimplicialIdentityError, constant_simplicial,
                               simplicial_circle)
from oracles import dense_rank


def two_step(ring, k):
    """0 -> R --k--> R -> 0 in degrees 1, 0."""
    return ChainComplex(ring, {0: ["a"], 1: ["b"]}, {1: SparseMatrix.from_dense(ring, [[k]])})


def test_tensor_ranks_and_unit():
    lam = ChainComplex(F2, {0: ["1"], 1: ["x"]})
    assert tensor(lam, lam).ranks == {0: 1, 1: 2, 2: 1}
    u = unit_complex(F2)
    t = tensor(u, lam)
    assert t.bases == {0: [("1", "1")], 1: [("1", "x")]}


def test_tensor_koszul_sign():
    a = ChainComplex(Q, {1: ["x"], 0: ["y"]}, {1: SparseMatrix.from_dense(Q, [[1]])})
    b = ChainComplex(Q, {1: ["z"]})
    ab = tensor(a, b)
    ba = tensor(b, a)
    # d(x (x) z) = y (x) z;  d(z (x) x) = (-1)^{|z|} z (x) y
    assert ab.d(2).cols[0] == {ab.bases[1].index(("y", "z")): 1}
    assert ba.d(2).cols[0] == {ba.bases[1].index(("z", "y")): -1}


def test_homology_examples():
    assert two_step(Q, 1).homology().is_zero()
    h = two_step(Z, 2).homology()
    assert h.betti(0) == 0 and h.torsion(0) == (2,)
    free = ChainComplex(F3, {0: ["a", "b"], 2: ["c"]})
    assert free.homology(range(0, 3)).bettis() == (2, 0, 1)


def test_d_squared_rejected():
    ring = Q
    with pytest.raises(ChainComplexError):
        ChainComplex(ring, {0: ["a"], 1: ["b"], 2: ["c"]},
                     {1: SparseMatrix.from_dense(ring, [[1]]), 2: SparseMatrix.from_dense(ring, [[1]])})


def test_quasi_iso_examples():
    c = two_step(Q, 1)
    assert is_quasi_iso(ChainMap.identity(c), (-1, 3))
    zero = ChainMap(c, c, {})
    assert is_quasi_iso(zero, (-1, 3))
    z = ChainComplex(Z, {0: ["a"]})
    times2 = ChainMap(z, z, {0: SparseMatrix.from_dense(Z, [[2]])})
    assert not is_quasi_iso(times2, (0, 1))
    assert mapping_cone(times2).homology(range(0, 2)).torsion(0) == (2,)


def test_not_a_chain_map():
    c = two_step(Q, 1)
    with pytest.raises(ChainComplexError):
        ChainMap(c, c, {0: SparseMatrix.identity(Q, 1)})


def test_homology_table_serialization():
    h = two_step(Z, 6).homology(range(0, 2))
    assert h.to_tsv() == "0\t0\t6\n1\t0\t\n"
    doc = h.to_json()
    assert doc["window"] == [0, 1] and doc["coefficients"] == "Z"
    assert isinstance(h, HomologyTable)


def test_constant_simplicial_normalizes_to_level_zero():
    x = two_step(F2, 0)
    const = constant_simplicial(x, 4)
    const.validate()
    assert const.realize().ranks == x.ranks


@pytest.mark.parametrize("ring", [F2, Z, Q])
def test_simplicial_circle_golden(ring):
    circle = simplicial_circle(ring, 5)
    circle.validate()
    assert circle.realize().homology(range(0, 3)).bettis() == (1, 1, 0)
    assert circle.realize_unnormalized().homology(range(0, 3)).bettis() == (1, 1, 0)


def test_broken_simplicial_identity_is_reported():
    circle = simplicial_circle(F2, 3)
    circle.faces[2][0], circle.faces[2][1] = circle.faces[2][1], circle.faces[2][0]
    with pytest.raises(SimplicialIdentityError) as err:
        circle.validate()
    assert "d_" in str(err.value) and "level" in str(err.value)


def test_bicomplex_with_zero_differentials():
    cells = {(0, 0): ["a"], (1, 0): ["b"], (0, 1): ["c"], (2, 1): ["d"]}
    tot = MultiComplex(F2, cells, [{}, {}]).totalize()
    assert tot.ranks == {0: 1, 1: 2, 3: 1}


@pytest.mark.parametrize("alg,top", [
    (truncated_polynomial(F2, 2), 4),
    (exterior(F3, 1), 4),
    (truncated_polynomial(Q, 3), 3),
])
def test_normalized_matches_unnormalized(alg, top):
    for x in (bar_simplicial(alg, top, top), cyclic_bar(alg, top, top)):
        x.validate()
        a = x.realize().homology(range(0, top))
        b = x.realize_unnormalized().homology(range(0, top))
        assert a.same_values(b)


# universal coefficients cross-oracle ----------------------------------------

def random_integer_complex(rng):
    """Elementary pieces R --k--> R scrambled by unimodular basis changes."""
    bases, cols = {}, {}
    pieces = []
    for _ in range(rng.randint(1, 5)):
        deg = rng.randint(0, 3)
        k = rng.choice([0, 1, 2, 3, 4, 6, 9])
        pieces.append((deg, k))
    for deg, _ in pieces:
        bases.setdefault(deg, [])
        bases.setdefault(deg + 1, [])
    for t, (deg, k) in enumerate(pieces):
        bases[deg].append(("lo", t))
        bases[deg + 1].append(("hi", t))
    dense = {}
    for deg in bases:
        if deg - 1 not in bases:
            continue
        rows = [[0] * len(bases[deg]) for _ in bases[deg - 1]]
        for j, key in enumerate(bases[deg]):
            if key[0] == "hi":
                t = key[1]
                if pieces[t][0] + 1 == deg:
                    rows[bases[deg - 1].index(("lo", t))][j] = pieces[t][1]
        dense[deg] = rows
    # change basis by elementary matrices g_k in each degree: d' = g_{k-1} d g_k^{-1}
    ops = {}
    for deg, keys in bases.items():
        n = len(keys)
        g = [[int(i == j) for j in range(n)] for i in range(n)]
        ginv = [row[:] for row in g]
        for _ in range(rng.randint(0, 3)):
            if n < 2:
                break
            i, j = rng.sample(range(n), 2)
            c = rng.choice([-2, -1, 1, 2])
            for r in range(n):  # g <- E g, E adds c * row j to row i
                g[i][r] += c * g[j][r]
            for r in range(n):  # ginv <- ginv E^{-1}
                ginv[r][j] -= c * ginv[r][i]
        ops[deg] = (g, ginv)

    def mul(a, b):
        return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]

    diffs = {}
    for deg, rows in dense.items():
        if not rows or not rows[0]:
            continue
        m = mul(mul(ops[deg - 1][0], rows), ops[deg][1])
        diffs[deg] = m
    return bases, diffs, pieces


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_universal_coefficients(seed, p):
    rng = random.Random(seed)
    bases, diffs, _ = random_integer_complex(rng)

    def build(ring):
        mats = {k: SparseMatrix.from_dense(ring, [[ring(x) for x in row] for row in m]) for k, m in diffs.items()}
        return ChainComplex(ring, bases, mats)

    hz = build(Z).homology(range(-1, 6))
    hp = build(Coefficients.prime(p)).homology(range(-1, 6))
    for k in range(0, 5):
        extra = sum(1 for t in hz.torsion(k) if t % p == 0) + sum(1 for t in hz.torsion(k - 1) if t % p == 0)
        assert hp.betti(k) == hz.betti(k) + extra
        # independent dense-rank oracle for the F_p betti numbers
        n = len(bases.get(k, []))
        rk = dense_rank(diffs[k], p) if k in diffs else 0
        rk1 = dense_rank(diffs[k + 1], p) if k + 1 in diffs else 0
        assert hp.betti(k) == n - rk - rk1


# kernels ------------------------------------------------------------------------

vectors = st.lists(st.dictionaries(st.integers(0, 30), st.integers(-50, 50), max_size=8), max_size=25)


@settings(max_examples=80, deadline=None)
@given(vectors, st.sampled_from([2, 3, 5, 7, 101]))
def test_kernel_backends_agree(vecs, p):
    ref = _kernels_py.rank_mod_p(vecs, p)
    assert kernels.rank_field_p(vecs, p) == ref
    if p == 2:
        assert _kernels_py.rank_gf2(vecs) == ref
    dense = [[v.get(i, 0) for i in range(31)] for v in vecs]
    assert ref == (dense_rank(dense, p) if dense else 0)


def test_zero_complex():
    assert zero_complex(Q).homology(range(0, 2)).is_zero()

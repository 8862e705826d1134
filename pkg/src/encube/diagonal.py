"""Edgewise subdivision and the diagonal of the bar construction.

The subdivision has level p equal to X_{2p+1}; a p-simplex is read as two
copies of [p] placed side by side, so faces and degeneracies act on both
copies at once.  The diagonal of B(A) applies the augmentation to the
middle letter of a word of length 2p+1 and then splits the result with the
Alexander-Whitney map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import AlgebraPresentation
from .bar import BarError, bar_simplicial, shuffle_words
from .chain import ChainComplex, ChainMap, HomologyBasis, tensor
from .linalg import SparseMatrix, solve
from .power import image
from .simplicial import NormalizedComplex, SimplicialChainComplex
from .words import add_term, word_degree


class DiagonalError(ValueError):
    pass


def _restrict(f: ChainMap, source: ChainComplex, target: ChainComplex) -> ChainMap:
    """Same map between truncations of its source and target."""
    def g(key):
        return image(f, key)
    return ChainMap.from_function(source, target, g, strict=False, validate=False)


def _compose(maps: Sequence[ChainMap]) -> ChainMap:
    """maps[0] applied first."""
    out = maps[0]
    for f in maps[1:]:
        out = f @ out
    return out


def edgewise_subdivide(x: SimplicialChainComplex, cap: int | None = None, top: int | None = None,
                       rule: str = "standard", validate: bool = True) -> SimplicialChainComplex:
    """sd X with (sd X)_p = X_{2p+1}, faces d_i d_{p+1+i}.

    Degeneracies are s_i s_{p+1+i} (``rule="standard"``); ``rule="naive"``
    uses s_{p+1+i} s_i and is kept only to show that it is rejected.
    Level p keeps internal degrees <= top - p.
    """
    cap = (x.cap - 1) // 2 if cap is None else cap
    if 2 * cap + 1 > x.cap:
        raise DiagonalError(f"subdividing to level {cap} needs {2 * cap + 1} source levels")
    if top is None and x.top is not None:
        top = x.top - cap - 1
    if top is not None and x.top is not None and x.top - (2 * cap + 1) < top - cap:
        raise DiagonalError("source truncation is too coarse for the requested top")
    levels = [x.levels[2 * p + 1] if top is None else x.levels[2 * p + 1].truncate(top - p)
              for p in range(cap + 1)]

    def face(p, i):
        f = x.faces[2 * p][i] @ x.faces[2 * p + 1][p + 1 + i]
        return _restrict(f, levels[p], levels[p - 1])

    def degen(p, i):
        if rule == "standard":
            f = x.degens[2 * p + 2][i] @ x.degens[2 * p + 1][p + 1 + i]
        elif rule == "naive":
            f = x.degens[2 * p + 2][p + 1 + i] @ x.degens[2 * p + 1][i]
        else:
            raise DiagonalError(f"unknown degeneracy rule {rule!r}")
        return _restrict(f, levels[p], levels[p + 1])

    faces = [[]] + [[face(p, i) for i in range(p + 1)] for p in range(1, cap + 1)]
    degens = [[degen(p, i) for i in range(p + 1)] for p in range(cap)]
    sd = SimplicialChainComplex(levels, faces, degens, top=top)
    if validate:
        sd.validate()
    return sd


def front_comparison(x: SimplicialChainComplex, sd: SimplicialChainComplex,
                     target: SimplicialChainComplex) -> list[ChainMap]:
    """Level maps X_{2p+1} -> X_p dropping the second copy of [p]."""
    maps = []
    for p in range(sd.cap + 1):
        if p == 0:
            chain = [x.faces[1][1]]
        else:
            chain = [x.faces[q][q] for q in range(2 * p + 1, p, -1)]
        maps.append(_restrict(_compose(chain), sd.levels[p], target.levels[p]))
    return maps


# ---------------------------------------------------------------------------
# the bar diagonal

@dataclass
class BarDiagonal:
    alg: AlgebraPresentation
    top: int
    bar: SimplicialChainComplex
    sd: SimplicialChainComplex
    realized_bar: ChainComplex
    realized_sd: ChainComplex
    target: ChainComplex
    diagonal: ChainMap
    comparison: ChainMap
    meta: dict = field(default_factory=dict)


def _front(alg, w, j):
    c = 1
    for a in w[j:]:
        c *= alg.eps(a)
    return w[:j], c


def _back(alg, w, j):
    c = 1
    for a in w[:j]:
        c *= alg.eps(a)
    return w[j:], c


def bar_diagonal(alg: AlgebraPresentation, max_degree: int, validate: bool = True) -> BarDiagonal:
    """Diagonal realize(sd B A) -> realize(B A) (x) realize(B A).

    Complete in total degrees <= max_degree + 1 on the source side, so
    homology statements hold through ``max_degree``.
    """
    if alg.augmentation is None:
        raise BarError("the bar diagonal needs an augmentation")
    ring = alg.ring
    top = max_degree + 1
    big = bar_simplicial(alg, 2 * top + 1, 2 * top + 1)
    small = bar_simplicial(alg, top, top)
    if validate:
        small.validate()
    sd = edgewise_subdivide(big, cap=top, top=top, validate=validate)
    nsd, nb = sd.normalize(), small.normalize()
    rsd, rb = nsd.total, nb.total
    target = tensor(rb, rb)
    comparison = nsd.induced_map(nb, front_comparison(big, sd, small))

    def project(p, word):
        """Normalized key of a bar word, or None when degenerate."""
        e = word_degree(alg, word)
        cells = nb.multi.cells.get((p, e))
        if cells is None:
            return None
        keys = small.levels[p].bases[e]
        col = nb.proj[p][e].apply({keys.index(word): 1})
        return {((p, e), cells[i]): c for i, c in col.items()}

    def delta(key):
        (p, e), base = key
        lvl = sd.levels[p]
        keys = lvl.bases[e]
        j0 = keys.index(base)
        col = nsd.sect[p][e].cols[nsd.multi.cells[(p, e)].index(base)] if (p, e) in nsd.multi.cells else {j0: 1}
        out: dict = {}
        for r, c in col.items():
            w = keys[r]
            mid = ring.reduce(alg.eps(w[p]))
            if not mid:
                continue
            x, y = w[:p], w[p + 1:]
            for j in range(p + 1):
                fx, cf = _front(alg, x, j)
                by, cb = _back(alg, y, j)
                coeff = ring.reduce(c * mid * cf * cb)
                if not coeff:
                    continue
                u, v = project(j, fx), project(p - j, by)
                if not u or not v:
                    continue
                s = ring.sign((p - j) * word_degree(alg, fx))
                for ku, cu in u.items():
                    for kv, cv in v.items():
                        add_term(ring, out, (ku, kv), s * coeff * cu * cv)
        return out

    diag = ChainMap.from_function(rsd, target, delta, strict=True, validate=False)
    if validate:
        diag.check_chain_map(range(0, top + 1))
    out = BarDiagonal(alg, top, small, sd, rb, rsd, target, diag, comparison)
    out.meta = {"window": [0, max_degree], "construction": "bar diagonal"}
    return out


# ---------------------------------------------------------------------------
# homology coproduct and product

def _invert(ring, rows: list[list]) -> list[list]:
    n = len(rows)
    m = SparseMatrix(ring, n, n, [{i: rows[i][j] for i in range(n) if ring.reduce(rows[i][j])} for j in range(n)])
    inv_cols = []
    for k in range(n):
        x = solve(m, {k: 1})
        if x is None:
            raise DiagonalError("comparison map is not invertible on homology")
        inv_cols.append(x)
    return [[inv_cols[j].get(i, 0) for j in range(n)] for i in range(n)]


class BarHomology:
    """Homology of B(A) in a window with its coproduct (and product when A is
    commutative), in coordinates on fixed cycle representatives."""

    def __init__(self, alg: AlgebraPresentation, max_degree: int, validate: bool = True):
        if not alg.ring.is_field:
            raise DiagonalError("homology coproducts are computed over fields")
        self.alg = alg
        self.max_degree = max_degree
        self.data = bar_diagonal(alg, max_degree, validate)
        ring = alg.ring
        rb, rsd = self.data.realized_bar, self.data.realized_sd
        unit_key = ((0, 0), ())
        self.basis: dict[int, HomologyBasis] = {}
        for n in range(max_degree + 1):
            cand = [{rb.index[unit_key][1]: 1}] if n == 0 and unit_key in rb.index else []
            self.basis[n] = HomologyBasis(rb, n, cand)
        # sd representatives mapped through the comparison
        self.sd_reps: dict[int, list[dict]] = {}
        for n in range(max_degree + 1):
            hs = HomologyBasis(rsd, n)
            if len(hs) != len(self.basis[n]):
                raise DiagonalError(f"subdivision changes homology in degree {n}")
            rows = [[0] * len(hs) for _ in range(len(hs))]
            for i, z in enumerate(hs.reps):
                coords = self.basis[n].coordinates(self.data.comparison.apply(n, z))
                for k, c in enumerate(coords):
                    rows[k][i] = c
            inv = _invert(ring, rows) if hs.reps else []
            reps = []
            for k in range(len(hs)):
                z: dict = {}
                for i, zi in enumerate(hs.reps):
                    c = ring.reduce(inv[i][k])
                    if c:
                        for r, v in zi.items():
                            add_term(ring, z, r, c * v)
                reps.append(z)
            self.sd_reps[n] = reps
        self._tensor_basis: dict[int, tuple[HomologyBasis, list]] = {}
        self.coproduct = {n: [self._coproduct_of(n, k) for k in range(len(self.basis[n]))]
                          for n in range(max_degree + 1)}

    def dims(self) -> tuple[int, ...]:
        return tuple(len(self.basis[n]) for n in range(self.max_degree + 1))

    def rep_key_vector(self, n: int, k: int) -> dict:
        rb = self.data.realized_bar
        return {rb.bases[n][i]: c for i, c in self.basis[n].reps[k].items()}

    def _tensor_hb(self, n: int):
        if n not in self._tensor_basis:
            ring = self.alg.ring
            t = self.data.target
            labels, cands = [], []
            for a in range(n + 1):
                for i in range(len(self.basis[a])):
                    for j in range(len(self.basis[n - a])):
                        u = self.rep_key_vector(a, i)
                        v = self.rep_key_vector(n - a, j)
                        vec: dict = {}
                        for ku, cu in u.items():
                            for kv, cv in v.items():
                                add_term(ring, vec, t.index[(ku, kv)][1], cu * cv)
                        labels.append(((a, i), (n - a, j)))
                        cands.append(vec)
            hb = HomologyBasis(t, n, cands)
            if len(hb) != len(cands):
                raise DiagonalError(f"product classes do not form a basis in degree {n}")
            self._tensor_basis[n] = (hb, labels)
        return self._tensor_basis[n]

    def _coproduct_of(self, n: int, k: int) -> dict:
        hb, labels = self._tensor_hb(n)
        img = self.data.diagonal.apply(n, self.sd_reps[n][k])
        coords = hb.coordinates(img)
        return {labels[t]: c for t, c in enumerate(coords) if self.alg.ring.reduce(c)}

    # products -----------------------------------------------------------
    def product(self, a: tuple[int, int], b: tuple[int, int]) -> dict:
        """Shuffle product of two classes, in coordinates."""
        alg = self.alg
        if not alg.has("commutative"):
            raise DiagonalError("the shuffle product needs a commutative algebra")
        ring = alg.ring
        n = a[0] + b[0]
        if n > self.max_degree:
            raise DiagonalError("product leaves the window")
        rb = self.data.realized_bar
        u, v = self.rep_key_vector(*a), self.rep_key_vector(*b)
        vec: dict = {}
        for (mu, wu), cu in u.items():
            for (mv, wv), cv in v.items():
                for w, c in shuffle_words(alg, wu, wv).items():
                    key = ((mu[0] + mv[0], mu[1] + mv[1]), w)
                    idx = rb.index.get(key)
                    if idx is None:
                        raise DiagonalError(f"shuffle left the normalized basis: {key!r}")
                    add_term(ring, vec, idx[1], c * cu * cv)
        coords = self.basis[n].coordinates(vec)
        return {(n, t): c for t, c in enumerate(coords) if ring.reduce(c)}

    def coproduct_matrix(self) -> dict:
        return {f"{n}:{k}": {f"{a[0]}:{a[1]}|{b[0]}:{b[1]}": self.alg.ring.format(c)
                             for (a, b), c in sorted(self.coproduct[n][k].items())}
                for n in self.coproduct for k in range(len(self.coproduct[n]))}

    # checks ---------------------------------------------------------------
    def counit_ok(self) -> bool:
        ring = self.alg.ring
        for n, classes in self.coproduct.items():
            for k, d in enumerate(classes):
                left = {b: c for (a, b), c in d.items() if a == (0, 0)}
                right = {a: c for (a, b), c in d.items() if b == (0, 0)}
                if n == 0:
                    if left != {(0, k): 1} and ring.reduce(left.get((0, k), 0) - 1):
                        return False
                    continue
                if left != {(n, k): 1} or right != {(n, k): 1}:
                    return False
        return True

    def coassociative(self) -> bool:
        ring = self.alg.ring
        for n, classes in self.coproduct.items():
            for k, d in enumerate(classes):
                lhs: dict = {}
                rhs: dict = {}
                for (a, b), c in d.items():
                    for (a1, a2), c1 in self.coproduct[a[0]][a[1]].items():
                        add_term(ring, lhs, (a1, a2, b), c * c1)
                    for (b1, b2), c2 in self.coproduct[b[0]][b[1]].items():
                        add_term(ring, rhs, (a, b1, b2), c * c2)
                if lhs != rhs:
                    return False
        return True

    def hopf_failures(self) -> list[tuple]:
        """Pairs of classes where the coproduct is not multiplicative."""
        ring = self.alg.ring
        fails = []
        classes = [(n, k) for n in self.coproduct for k in range(len(self.coproduct[n]))]
        for a in classes:
            for b in classes:
                if a[0] + b[0] > self.max_degree:
                    continue
                lhs: dict = {}
                for cls, c in self.product(a, b).items():
                    for pair, c2 in self.coproduct[cls[0]][cls[1]].items():
                        add_term(ring, lhs, pair, c * c2)
                rhs: dict = {}
                for (a1, a2), ca in self.coproduct[a[0]][a[1]].items():
                    for (b1, b2), cb in self.coproduct[b[0]][b[1]].items():
                        s = ring.sign(a2[0] * b1[0])
                        for x, cx in self.product(a1, b1).items():
                            for y, cy in self.product(a2, b2).items():
                                add_term(ring, rhs, (x, y), s * ca * cb * cx * cy)
                if lhs != rhs:
                    fails.append((a, b))
        return fails


def verify_hopf(alg: AlgebraPresentation, max_degree: int) -> dict:
    h = BarHomology(alg, max_degree)
    fails = h.hopf_failures()
    return {"ok": not fails and h.counit_ok() and h.coassociative(),
            "dims": list(h.dims()), "counit": h.counit_ok(), "coassociative": h.coassociative(),
            "multiplicative": not fails, "failures": [list(map(list, f)) for f in fails],
            "window": [0, max_degree]}


def divided_power_scalars(h: BarHomology, step: int, kmax: int) -> list | None:
    """Scalars c_k making gamma_k = c_k g_k a divided power sequence.

    Each H_{step k} must be one-dimensional with basis g_k; the result
    satisfies Delta gamma_k = sum gamma_i (x) gamma_{k-i}, or is None when no
    rescaling does.  c_1 = 1 fixes the remaining freedom.
    """
    ring = h.alg.ring
    for k in range(kmax + 1):
        n = step * k
        if n > h.max_degree or len(h.basis[n]) != 1:
            return None

    def coeff(k, i):
        return ring.reduce(h.coproduct[step * k][0].get(((step * i, 0), (step * (k - i), 0)), 0))

    scal = [ring(1), ring(1)][:kmax + 1]
    for k in range(2, kmax + 1):
        a = coeff(k, 1)
        if not a:
            return None
        scal.append(ring.reduce(scal[1] * scal[k - 1] * ring.inverse(a)))
    for k in range(kmax + 1):
        n = step * k
        support = {pair for pair, c in h.coproduct[n][0].items() if ring.reduce(c)}
        if support != {((step * i, 0), (step * (k - i), 0)) for i in range(k + 1)}:
            return None
        for i in range(k + 1):
            if ring.reduce(scal[k] * coeff(k, i) - scal[i] * scal[k - i]):
                return None
    return scal


def divided_power_check(h: BarHomology, step: int, kmax: int) -> bool:
    """H_{step k} is spanned by divided powers gamma_k for k <= kmax."""
    return divided_power_scalars(h, step, kmax) is not None

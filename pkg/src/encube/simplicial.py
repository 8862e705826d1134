"""Simplicial and multi-graded chain complexes, normalization and totalization.

Conventions, fixed once:

* the simplicial differential of a level is the alternating face sum
  sum_i (-1)^i d_i;
* totalization orders directions as given (simplicial directions first,
  the internal differential last) and the differential in direction k
  carries the sign (-1)^(p_1 + ... + p_{k-1}).

Levels may be truncated by total degree: with ``top`` set, level p is
only complete in internal degrees <= top - p, and the realization is exact
in total degrees <= top.
"""

from __future__ import annotations

from typing import Callable, Hashable, Mapping, Sequence

from .chain import ChainComplex, ChainComplexError, ChainMap, Combination
from .linalg import Coefficients, SparseMatrix, quotient_maps


class SimplicialIdentityError(ChainComplexError):
    """A simplicial identity failed; message names identity and indices."""


def _internal_bound(top: int | None, level: int) -> int | None:
    return None if top is None else top - level


def _compare(lhs: ChainMap, rhs: ChainMap, bound: int | None) -> int | None:
    """First internal degree (<= bound) where the maps differ, else None."""
    degs = set(lhs.source.bases) | set(rhs.source.bases)
    for e in sorted(degs):
        if bound is not None and e > bound:
            continue
        if lhs.at(e) != rhs.at(e):
            return e
    return None


def _identity_map(c: ChainComplex) -> ChainMap:
    return ChainMap.identity(c)


class DeltaChainComplex:
    """Semi-simplicial object in chain complexes (faces only).

    ``faces[p][i] : X_p -> X_{p-1}`` for p >= 1, i = 0..p.
    """

    def __init__(self, levels: Sequence[ChainComplex], faces: Sequence[Sequence[ChainMap]], top: int | None = None):
        self.levels = list(levels)
        self.faces = [list(f) for f in faces]
        self.top = top
        self.ring = self.levels[0].ring
        if len(self.faces) != len(self.levels):
            raise ChainComplexError("need one face list per level (empty for level 0)")

    @property
    def cap(self) -> int:
        return len(self.levels) - 1

    def validate(self) -> None:
        for p in range(2, len(self.levels)):
            bound = _internal_bound(self.top, p)
            for j in range(p + 1):
                for i in range(j):
                    lhs = self.faces[p - 1][i] @ self.faces[p][j]
                    rhs = self.faces[p - 1][j - 1] @ self.faces[p][i]
                    e = _compare(lhs, rhs, bound)
                    if e is not None:
                        raise SimplicialIdentityError(
                            f"d_{i} d_{j} != d_{j - 1} d_{i} on level {p}, internal degree {e}"
                        )

    def face_sum(self, p: int) -> dict[int, SparseMatrix]:
        ring = self.ring
        out: dict[int, SparseMatrix] = {}
        for i, f in enumerate(self.faces[p]):
            s = ring.sign(i)
            for e, m in f.maps.items():
                out[e] = out[e] + m.scale(s) if e in out else m.scale(s)
        return out

    def multicomplex(self) -> "MultiComplex":
        cells = {}
        for p, lvl in enumerate(self.levels):
            for e, keys in lvl.bases.items():
                cells[(p, e)] = list(keys)
        simp = {}
        for p in range(1, len(self.levels)):
            for e, m in self.face_sum(p).items():
                if (p, e) in cells and (p - 1, e) in cells:
                    simp[(p, e)] = m
        internal = {}
        for p, lvl in enumerate(self.levels):
            for e, m in lvl.diffs.items():
                internal[(p, e)] = m
        return MultiComplex(self.ring, cells, [simp, internal])

    def realize(self) -> ChainComplex:
        return self.multicomplex().totalize()


class SimplicialChainComplex(DeltaChainComplex):
    """Simplicial object in chain complexes, truncated at level ``cap``.

    ``degens[p][i] : X_p -> X_{p+1}`` for p < cap, i = 0..p.
    """

    def __init__(self, levels, faces, degens, top: int | None = None):
        super().__init__(levels, faces, top)
        self.degens = [list(s) for s in degens]
        self._normal: "NormalizedComplex | None" = None

    def validate(self) -> None:
        super().validate()
        P = self.cap
        for p in range(P):
            # s_i s_j = s_{j+1} s_i, i <= j, from level p to p + 2
            if p + 2 <= P:
                bound = _internal_bound(self.top, p + 2)
                for j in range(p + 1):
                    for i in range(j + 1):
                        lhs = self.degens[p + 1][i] @ self.degens[p][j]
                        rhs = self.degens[p + 1][j + 1] @ self.degens[p][i]
                        e = _compare(lhs, rhs, bound)
                        if e is not None:
                            raise SimplicialIdentityError(
                                f"s_{i} s_{j} != s_{j + 1} s_{i} on level {p}, internal degree {e}"
                            )
            # mixed identities from level p through p + 1 back to p
            bound = _internal_bound(self.top, p + 1)
            for j in range(p + 1):
                for i in range(p + 2):
                    lhs = self.faces[p + 1][i] @ self.degens[p][j]
                    if i < j:
                        rhs = self.degens[p - 1][j - 1] @ self.faces[p][i]
                        name = f"d_{i} s_{j} = s_{j - 1} d_{i}"
                    elif i in (j, j + 1):
                        rhs = _identity_map(self.levels[p])
                        name = f"d_{i} s_{j} = id"
                    else:
                        rhs = self.degens[p - 1][j] @ self.faces[p][i - 1]
                        name = f"d_{i} s_{j} = s_{j} d_{i - 1}"
                    e = _compare(lhs, rhs, bound)
                    if e is not None:
                        raise SimplicialIdentityError(f"{name} fails on level {p}, internal degree {e}")

    def normalize(self) -> "NormalizedComplex":
        if self._normal is None:
            self._normal = NormalizedComplex(self)
        return self._normal

    def realize(self) -> ChainComplex:
        """Total complex of the normalized chains."""
        return self.normalize().total

    def realize_unnormalized(self) -> ChainComplex:
        return DeltaChainComplex.multicomplex(self).totalize()


class NormalizedComplex:
    """Quotient of each level by the images of its degeneracies."""

    def __init__(self, x: SimplicialChainComplex):
        self.source = x
        ring = x.ring
        self.proj: list[dict[int, SparseMatrix]] = []
        self.sect: list[dict[int, SparseMatrix]] = []
        cells: dict[tuple, list] = {}
        for p, lvl in enumerate(x.levels):
            pr, se = {}, {}
            for e, keys in lvl.bases.items():
                images = []
                if p > 0:
                    for s in x.degens[p - 1]:
                        images.extend(s.at(e).cols)
                P, S, kept = quotient_maps(ring, len(keys), images)
                pr[e], se[e] = P, S
                if kept:
                    cells[(p, e)] = [keys[i] for i in kept]
            self.proj.append(pr)
            self.sect.append(se)
        simp, internal = {}, {}
        for p in range(1, len(x.levels)):
            for e, m in x.face_sum(p).items():
                if (p, e) in cells and (p - 1, e) in cells:
                    simp[(p, e)] = self.proj[p - 1][e] @ m @ self.sect[p][e]
        for p, lvl in enumerate(x.levels):
            for e, m in lvl.diffs.items():
                if (p, e) in cells and (p, e - 1) in cells:
                    internal[(p, e)] = self.proj[p][e - 1] @ m @ self.sect[p][e]
        self.multi = MultiComplex(ring, cells, [simp, internal])
        self.total = self.multi.totalize()

    def induced_map(self, other: "NormalizedComplex", level_maps: Sequence[ChainMap]) -> ChainMap:
        """Total chain map induced by a levelwise simplicial map."""
        src, tgt = self.total, other.total
        maps = {}
        for k in src.bases:
            cols = []
            for key in src.bases[k]:
                (p, e), base = key
                m = level_maps[p].at(e)
                sx = self.source.levels[p].bases[e]
                col = {}
                j = sx.index(base)
                img = m.cols[j]
                pr = other.proj[p].get(e)
                if pr is not None and img:
                    img = pr.apply(img)
                    tkeys = other.multi.cells.get((p, e), [])
                    for i, c in img.items():
                        col[tgt.index[((p, e), tkeys[i])][1]] = c
                cols.append(col)
            maps[k] = SparseMatrix(src.ring, tgt.rank(k), len(cols), cols)
        return ChainMap(src, tgt, maps, validate=False)


class MultiComplex:
    """Multi-graded complex with commuting differentials, one per direction.

    ``cells`` maps a multidegree (p_1, ..., p_n, e) to its basis keys;
    ``diffs[k]`` maps a multidegree to the matrix of the direction-k
    differential out of that cell.
    """

    def __init__(self, ring: Coefficients, cells: Mapping[tuple, Sequence], diffs: Sequence[Mapping[tuple, SparseMatrix]]):
        self.ring = ring
        self.cells = {md: list(keys) for md, keys in cells.items() if len(keys)}
        self.diffs = [dict(d) for d in diffs]
        self.ndirs = len(self.diffs)

    def _target(self, md: tuple, k: int) -> tuple:
        return md[:k] + (md[k] - 1,) + md[k + 1:]

    def diff(self, k: int, md: tuple) -> SparseMatrix:
        m = self.diffs[k].get(md)
        tgt = self._target(md, k)
        if m is None:
            return SparseMatrix.zeros(self.ring, len(self.cells.get(tgt, ())), len(self.cells.get(md, ())))
        return m

    def validate(self) -> None:
        for k in range(self.ndirs):
            for md in self.diffs[k]:
                t = self._target(md, k)
                if t in self.diffs[k]:
                    if not (self.diffs[k][t] @ self.diffs[k][md]).is_zero():
                        raise ChainComplexError(f"direction {k} does not square to zero at {md}")
        for a in range(self.ndirs):
            for b in range(a + 1, self.ndirs):
                for md in self.cells:
                    lhs = self.diff(a, self._target(md, b)) @ self.diff(b, md)
                    rhs = self.diff(b, self._target(md, a)) @ self.diff(a, md)
                    if lhs != rhs:
                        raise ChainComplexError(f"directions {a} and {b} do not commute at {md}")

    def totalize(self, top: int | None = None) -> ChainComplex:
        ring = self.ring
        bases: dict[int, list] = {}
        for md in sorted(self.cells):
            deg = sum(md)
            if top is not None and deg > top:
                continue
            bases.setdefault(deg, []).extend((md, key) for key in self.cells[md])
        offsets: dict[tuple, int] = {}
        for deg, keys in bases.items():
            seen = set()
            for pos, (md, _) in enumerate(keys):
                if md not in seen:
                    offsets[md] = pos
                    seen.add(md)
        diffs = {}
        for deg, keys in bases.items():
            if deg - 1 not in bases:
                continue
            cols: list[dict] = [dict() for _ in keys]
            for md, off in offsets.items():
                if sum(md) != deg:
                    continue
                n = len(self.cells[md])
                for k in range(self.ndirs):
                    m = self.diffs[k].get(md)
                    if m is None:
                        continue
                    t = self._target(md, k)
                    if t not in offsets:
                        continue
                    toff = offsets[t]
                    s = ring.sign(sum(md[:k]))
                    for j in range(n):
                        col = cols[off + j]
                        for i, c in m.cols[j].items():
                            r = toff + i
                            v = ring.reduce(col.get(r, 0) + s * c)
                            if v:
                                col[r] = v
                            else:
                                col.pop(r, None)
            diffs[deg] = SparseMatrix(ring, len(bases[deg - 1]), len(keys), cols)
        return ChainComplex(ring, bases, diffs)


# ---------------------------------------------------------------------------
# builders

def levelwise_map(source: ChainComplex, target: ChainComplex, f: Callable[[Hashable], Combination]) -> ChainMap:
    """Degree-preserving map built from basis images; out-of-range terms drop."""
    return ChainMap.from_function(source, target, f, strict=False, validate=False)


def constant_simplicial(x: ChainComplex, cap: int) -> SimplicialChainComplex:
    levels = [x] * (cap + 1)
    ident = ChainMap.identity(x)
    faces = [[]] + [[ident] * (p + 1) for p in range(1, cap + 1)]
    degens = [[ident] * (p + 1) for p in range(cap)]
    return SimplicialChainComplex(levels, faces, degens)


def simplicial_circle(ring: Coefficients, cap: int) -> SimplicialChainComplex:
    """Chains on the simplicial circle Delta[1]/boundary.

    Level p has basis the surjections [p] -> [1] (0 then 1 pattern) plus the
    basepoint; a p-simplex is encoded by the number of zeros k (1 <= k <= p)
    or ``"*"`` for the collapsed simplex.
    """
    def simplices(p):
        return ["*"] + list(range(1, p + 1))

    levels = [ChainComplex(ring, {0: simplices(p)}) for p in range(cap + 1)]

    def face(p, i):
        def f(x):
            if x == "*":
                return {"*": 1}
            k = x  # vertices 0..k-1 map to 0, k..p map to 1
            nk = k - 1 if i < k else k
            if nk == 0 or nk == p:
                return {"*": 1}
            return {nk: 1}
        return levelwise_map(levels[p], levels[p - 1], f)

    def degen(p, i):
        def f(x):
            if x == "*":
                return {"*": 1}
            k = x
            return {k + 1 if i < k else k: 1}
        return levelwise_map(levels[p], levels[p + 1], f)

    faces = [[]] + [[face(p, i) for i in range(p + 1)] for p in range(1, cap + 1)]
    degens = [[degen(p, i) for i in range(p + 1)] for p in range(cap)]
    return SimplicialChainComplex(levels, faces, degens)

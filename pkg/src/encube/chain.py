"""Finite chain complexes, chain maps, tensor products and homology.

A complex carries, per degree, an ordered list of hashable basis keys and
the differential ``d_k : C_k -> C_{k-1}`` as a column-sparse matrix.
Construction checks ``d o d = 0`` and fails loudly otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .linalg import (
    Coefficients,
    Echelon,
    LinAlgError,
    SparseMatrix,
    elementary_divisors,
    nullspace,
    rank,
    vec_iadd,
)

Key = Hashable
Combination = Mapping  # {key: coefficient}


class ChainComplexError(ValueError):
    """Invalid complex or map, with the offending degree in the message."""


class ChainComplex:
    def __init__(
        self,
        ring: Coefficients,
        bases: Mapping[int, Sequence[Key]],
        diffs: Mapping[int, SparseMatrix] | None = None,
        validate: bool = True,
    ):
        self.ring = ring
        self.bases: dict[int, list[Key]] = {k: list(v) for k, v in sorted(bases.items()) if len(v)}
        self._index: dict[Key, tuple[int, int]] | None = None
        self.diffs: dict[int, SparseMatrix] = {}
        for k, m in (diffs or {}).items():
            if m.is_zero():
                continue
            if m.shape != (self.rank(k - 1), self.rank(k)):
                raise ChainComplexError(
                    f"d_{k} has shape {m.shape}, expected {(self.rank(k - 1), self.rank(k))}"
                )
            self.diffs[k] = m
        if validate:
            self.check_square_zero()

    # basic access -------------------------------------------------------
    @classmethod
    def from_function(
        cls,
        ring: Coefficients,
        bases: Mapping[int, Sequence[Key]],
        dfun: Callable[[Key], Combination],
        strict: bool = True,
        validate: bool = True,
    ) -> "ChainComplex":
        """Build from a differential given on basis keys.

        With ``strict=False`` terms outside the basis are dropped, which is
        how truncated complexes are assembled.
        """
        index = {k: (d, i) for d, keys in bases.items() for i, k in enumerate(keys)}
        diffs = {}
        for deg, keys in bases.items():
            if deg - 1 not in bases:
                continue
            cols = [_to_column(index, deg - 1, dfun(k), strict, k) for k in keys]
            diffs[deg] = SparseMatrix(ring, len(bases[deg - 1]), len(keys), cols)
        return cls(ring, bases, diffs, validate=validate)

    def rank(self, k: int) -> int:
        return len(self.bases.get(k, ()))

    @property
    def degrees(self) -> list[int]:
        return sorted(self.bases)

    @property
    def ranks(self) -> dict[int, int]:
        return {k: len(v) for k, v in self.bases.items()}

    def d(self, k: int) -> SparseMatrix:
        m = self.diffs.get(k)
        if m is None:
            return SparseMatrix.zeros(self.ring, self.rank(k - 1), self.rank(k))
        return m

    @property
    def index(self) -> dict[Key, tuple[int, int]]:
        if self._index is None:
            self._index = {key: (d, i) for d, keys in self.bases.items() for i, key in enumerate(keys)}
        return self._index

    def vector(self, combo: Combination, degree: int | None = None) -> dict[int, object]:
        """Coordinates of a key combination (all keys in one degree)."""
        out: dict[int, object] = {}
        for key, c in combo.items():
            d, i = self.index[key]
            if degree is None:
                degree = d
            elif d != degree:
                raise ChainComplexError(f"mixed degrees {d} and {degree} in combination")
            vec_iadd(self.ring, out, {i: c})
        return out

    def combination(self, degree: int, vec: Mapping[int, object]) -> dict[Key, object]:
        keys = self.bases.get(degree, [])
        return {keys[i]: c for i, c in vec.items()}

    def check_square_zero(self) -> None:
        for k in self.diffs:
            if k - 1 in self.diffs:
                prod = self.diffs[k - 1] @ self.diffs[k]
                if not prod.is_zero():
                    i, j = prod.first_difference(SparseMatrix.zeros(self.ring, *prod.shape))
                    raise ChainComplexError(
                        f"d_{k - 1} o d_{k} != 0: basis element {self.bases[k][j]!r} "
                        f"hits {self.bases[k - 2][i]!r}"
                    )

    def __repr__(self) -> str:
        return f"ChainComplex({self.ring}, ranks={self.ranks})"

    # homology ----------------------------------------------------------
    def homology(self, degrees: Iterable[int] | None = None) -> "HomologyTable":
        if degrees is None:
            degrees = self.degrees
        degrees = list(degrees)
        entries = {}
        ranks_cache: dict[int, int] = {}

        def rk(k):
            if k not in ranks_cache:
                ranks_cache[k] = rank(self.d(k)) if k in self.diffs else 0
            return ranks_cache[k]

        for k in degrees:
            betti = self.rank(k) - rk(k) - rk(k + 1)
            torsion: tuple[int, ...] = ()
            if self.ring.kind == "Z" and k + 1 in self.diffs:
                torsion = tuple(e for e in elementary_divisors(self.diffs[k + 1]) if e > 1)
            entries[k] = (betti, torsion)
        window = (min(degrees), max(degrees)) if degrees else (0, -1)
        return HomologyTable(self.ring, entries, window)

    def shift(self, n: int) -> "ChainComplex":
        """Sigma^n with the differential multiplied by (-1)^n."""
        s = self.ring.sign(n)
        return ChainComplex(
            self.ring,
            {k + n: keys for k, keys in self.bases.items()},
            {k + n: m.scale(s) for k, m in self.diffs.items()},
            validate=False,
        )

    def truncate(self, top: int) -> "ChainComplex":
        """Drop degrees above ``top`` (a quotient-free brutal truncation)."""
        return ChainComplex(
            self.ring,
            {k: v for k, v in self.bases.items() if k <= top},
            {k: m for k, m in self.diffs.items() if k <= top},
            validate=False,
        )


def _to_column(index, target_deg, combo, strict, source_key):
    col: dict[int, object] = {}
    for key, c in combo.items():
        hit = index.get(key)
        if hit is None or hit[0] != target_deg:
            if strict:
                raise ChainComplexError(
                    f"image of {source_key!r} contains {key!r}, not a basis element in degree {target_deg}"
                )
            continue
        col[hit[1]] = col.get(hit[1], 0) + c
    return col


def zero_complex(ring: Coefficients) -> ChainComplex:
    return ChainComplex(ring, {})


def unit_complex(ring: Coefficients, key: Key = "1") -> ChainComplex:
    """The rank-one complex concentrated in degree 0."""
    return ChainComplex(ring, {0: [key]})


def direct_sum(complexes: Sequence[tuple[Key, ChainComplex]]) -> ChainComplex:
    """Direct sum; keys become ``(tag, key)``."""
    ring = complexes[0][1].ring
    bases: dict[int, list] = {}
    for tag, c in complexes:
        for k, keys in c.bases.items():
            bases.setdefault(k, []).extend((tag, key) for key in keys)
    from .linalg import block_diagonal

    diffs = {}
    for k in bases:
        blocks = [c.d(k) for _, c in complexes]
        if any(not b.is_zero() for b in blocks):
            diffs[k] = block_diagonal(ring, blocks)
    return ChainComplex(ring, bases, diffs, validate=False)


class ChainMap:
    """Degree-preserving map; ``maps[k] : source_k -> target_k``."""

    def __init__(self, source: ChainComplex, target: ChainComplex, maps: Mapping[int, SparseMatrix], validate: bool = True):
        if source.ring != target.ring:
            raise ChainComplexError("coefficient mismatch")
        self.source = source
        self.target = target
        self.maps: dict[int, SparseMatrix] = {}
        for k, m in maps.items():
            if m.shape != (target.rank(k), source.rank(k)):
                raise ChainComplexError(f"component {k} has shape {m.shape}")
            if not m.is_zero():
                self.maps[k] = m
        if validate:
            self.check_chain_map()

    @classmethod
    def from_function(cls, source: ChainComplex, target: ChainComplex, f: Callable[[Key], Combination],
                      strict: bool = True, validate: bool = True) -> "ChainMap":
        maps = {}
        for k, keys in source.bases.items():
            if target.rank(k) == 0:
                continue
            cols = [_to_column(target.index, k, f(key), strict, key) for key in keys]
            maps[k] = SparseMatrix(source.ring, target.rank(k), len(keys), cols)
        return cls(source, target, maps, validate=validate)

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(c, c, {k: SparseMatrix.identity(c.ring, c.rank(k)) for k in c.bases}, validate=False)

    def at(self, k: int) -> SparseMatrix:
        m = self.maps.get(k)
        if m is None:
            return SparseMatrix.zeros(self.source.ring, self.target.rank(k), self.source.rank(k))
        return m

    def check_chain_map(self, degrees: Iterable[int] | None = None) -> None:
        degs = degrees if degrees is not None else set(self.source.bases) | set(self.target.bases)
        for k in sorted(degs):
            lhs = self.target.d(k) @ self.at(k)
            rhs = self.at(k - 1) @ self.source.d(k)
            if lhs != rhs:
                i, j = lhs.first_difference(rhs)
                raise ChainComplexError(
                    f"not a chain map in degree {k}: source element {self.source.bases[k][j]!r}"
                )

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composite ``self o other``."""
        maps = {k: self.at(k) @ other.at(k) for k in other.source.bases}
        return ChainMap(other.source, self.target, maps, validate=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        degs = set(self.source.bases) | set(other.source.bases)
        return all(self.at(k) == other.at(k) for k in degs)

    __hash__ = None  # type: ignore[assignment]

    def apply(self, degree: int, vec: Mapping[int, object]) -> dict[int, object]:
        return self.at(degree).apply(vec)


def tensor(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """A (x) B with the Koszul sign d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy."""
    if a.ring != b.ring:
        raise ChainComplexError("coefficient mismatch")
    ring = a.ring
    bases: dict[int, list] = {}
    for i in a.degrees:
        for j in b.degrees:
            bases.setdefault(i + j, []).extend((x, y) for x in a.bases[i] for y in b.bases[j])
    ai, bi = a.index, b.index
    amat = {k: a.d(k) for k in a.diffs}
    bmat = {k: b.d(k) for k in b.diffs}

    def dfun(key):
        x, y = key
        dx, px = ai[x]
        dy, py = bi[y]
        out: dict = {}
        if dx in amat:
            for i, c in amat[dx].cols[px].items():
                out[(a.bases[dx - 1][i], y)] = c
        if dy in bmat:
            s = -1 if dx & 1 else 1
            for i, c in bmat[dy].cols[py].items():
                k2 = (x, b.bases[dy - 1][i])
                out[k2] = out.get(k2, 0) + s * c
        return out

    out = ChainComplex.from_function(ring, bases, dfun, validate=False)
    return out


def tensor_maps(f: ChainMap, g: ChainMap, source: ChainComplex | None = None,
                target: ChainComplex | None = None) -> ChainMap:
    """f (x) g for degree-zero maps (no Koszul sign arises)."""
    source = source or tensor(f.source, g.source)
    target = target or tensor(f.target, g.target)
    fs, gs = f.source.index, g.source.index

    def fun(key):
        x, y = key
        dx, px = fs[x]
        dy, py = gs[y]
        out = {}
        for i, c in f.at(dx).cols[px].items():
            for j, e in g.at(dy).cols[py].items():
                out[(f.target.bases[dx][i], g.target.bases[dy][j])] = c * e
        return out

    return ChainMap.from_function(source, target, fun, validate=False)


def mapping_cone(f: ChainMap) -> ChainComplex:
    """Cone_k = X_{k-1} + Y_k with d(x, y) = (-dx, f x + dy)."""
    x, y = f.source, f.target
    bases: dict[int, list] = {}
    for k in x.degrees:
        bases.setdefault(k + 1, []).extend(("s", key) for key in x.bases[k])
    for k in y.degrees:
        bases.setdefault(k, []).extend(("t", key) for key in y.bases[k])
    xi, yi = x.index, y.index

    def dfun(key):
        tag, k0 = key
        out: dict = {}
        if tag == "s":
            deg, pos = xi[k0]
            for i, c in x.d(deg).cols[pos].items():
                out[("s", x.bases[deg - 1][i])] = -c
            for i, c in f.at(deg).cols[pos].items():
                out[("t", y.bases[deg][i])] = out.get(("t", y.bases[deg][i]), 0) + c
        else:
            deg, pos = yi[k0]
            for i, c in y.d(deg).cols[pos].items():
                out[("t", y.bases[deg - 1][i])] = c
        return out

    return ChainComplex.from_function(f.source.ring, bases, dfun)


def is_quasi_iso(f: ChainMap, window: tuple[int, int]) -> bool:
    """True iff the cone is acyclic in degrees ``window[0]..window[1]``.

    The cone in degree k sees H_{k-1} of the source, so the window should
    sit one above the range where the map is to be compared.
    """
    cone = mapping_cone(f)
    table = cone.homology(range(window[0], window[1] + 1))
    return table.is_zero()


@dataclass
class HomologyTable:
    ring: Coefficients
    entries: dict[int, tuple[int, tuple[int, ...]]]
    window: tuple[int, int]
    meta: dict = field(default_factory=dict)

    def betti(self, k: int) -> int:
        return self.entries.get(k, (0, ()))[0]

    def torsion(self, k: int) -> tuple[int, ...]:
        return self.entries.get(k, (0, ()))[1]

    def bettis(self, degrees: Iterable[int] | None = None) -> tuple[int, ...]:
        if degrees is None:
            degrees = range(self.window[0], self.window[1] + 1)
        return tuple(self.betti(k) for k in degrees)

    def is_zero(self) -> bool:
        return all(b == 0 and not t for b, t in self.entries.values())

    def restrict(self, lo: int, hi: int) -> "HomologyTable":
        entries = {k: self.entries.get(k, (0, ())) for k in range(lo, hi + 1)}
        return HomologyTable(self.ring, entries, (lo, hi), dict(self.meta))

    def same_values(self, other: "HomologyTable") -> bool:
        lo = max(self.window[0], other.window[0])
        hi = min(self.window[1], other.window[1])
        return all(
            (self.betti(k), self.torsion(k)) == (other.betti(k), other.torsion(k))
            for k in range(lo, hi + 1)
        )

    def to_tsv(self) -> str:
        lines = []
        for k in range(self.window[0], self.window[1] + 1):
            b, t = self.entries.get(k, (0, ()))
            lines.append(f"{k}\t{b}\t{','.join(str(x) for x in t)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "coefficients": str(self.ring),
            "window": list(self.window),
            "homology": [
                {"degree": k, "betti": self.entries.get(k, (0, ()))[0],
                 "torsion": [str(x) for x in self.entries.get(k, (0, ()))[1]]}
                for k in range(self.window[0], self.window[1] + 1)
            ],
            "meta": self.meta,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# homology representatives (fields only)

class HomologyBasis:
    """Cycle representatives of H_k over a field and a coordinate solver."""

    def __init__(self, complex_: ChainComplex, k: int, candidates: Sequence[Mapping] = ()):
        ring = complex_.ring
        if not ring.is_field:
            raise LinAlgError("homology representatives need field coefficients")
        self.complex = complex_
        self.degree = k
        self._ech = Echelon(ring, track=True)
        boundaries = complex_.d(k + 1).cols if k + 1 in complex_.diffs else []
        self._nb = 0
        for col in boundaries:
            self._ech.insert(col)
            self._nb += 1
        cycles = nullspace(complex_.d(k)) if complex_.rank(k) else []
        if k not in complex_.diffs:
            cycles = [{i: 1} for i in range(complex_.rank(k))]
        self.reps: list[dict] = []
        self._rep_index: dict[int, int] = {}
        for z in list(candidates) + list(cycles):
            idx = self._ech.count
            if self._ech.insert(z):
                self._rep_index[idx] = len(self.reps)
                self.reps.append(dict(z))

    def __len__(self) -> int:
        return len(self.reps)

    def coordinates(self, cycle: Mapping[int, object]) -> list:
        """Coefficients of ``cycle`` on the representatives, modulo boundaries."""
        combo = self._ech.express(cycle)
        if combo is None:
            raise ChainComplexError(f"vector is not a cycle in degree {self.degree}")
        out = [0] * len(self.reps)
        for idx, c in combo.items():
            r = self._rep_index.get(idx)
            if r is not None:
                out[r] = c
        return out

"""Exact sparse linear algebra over Q, F_p and Z.

Matrices are stored column-wise: column j is a ``{row: coefficient}`` dict
holding the image of the j-th source basis vector.  Entries are Python
ints (Z, F_p, kept reduced) or ``Fraction`` (Q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from . import kernels

Vector = dict  # {index: coefficient}


class LinAlgError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Coefficients:
    """Coefficient ring: ``"Q"``, ``"Z"`` or ``"Fp"`` with prime ``p``."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Q", "Z", "Fp"):
            raise LinAlgError(f"unknown coefficient ring {self.kind!r}")
        if self.kind == "Fp" and not _is_prime(self.p):
            raise LinAlgError(f"{self.p} is not prime")
        if self.kind != "Fp" and self.p:
            raise LinAlgError("only prime fields carry a modulus")

    @classmethod
    def rationals(cls) -> "Coefficients":
        return cls("Q")

    @classmethod
    def integers(cls) -> "Coefficients":
        return cls("Z")

    @classmethod
    def prime(cls, p: int) -> "Coefficients":
        return cls("Fp", p)

    @classmethod
    def parse(cls, text: str) -> "Coefficients":
        t = text.strip()
        if t in ("Q", "QQ", "rational", "rationals"):
            return cls.rationals()
        if t in ("Z", "ZZ", "integers"):
            return cls.integers()
        for prefix in ("F", "GF", "Fp", "F_"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls.prime(int(t[len(prefix):]))
        raise LinAlgError(f"cannot parse coefficient ring {text!r}")

    def __str__(self) -> str:
        return f"F{self.p}" if self.kind == "Fp" else self.kind

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "Fp" else 0

    def __call__(self, x):
        """Coerce an int, Fraction or ``"num/den"`` string into the ring."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if self.kind == "Z":
                if x.denominator != 1:
                    raise LinAlgError(f"{x} is not an integer")
                return x.numerator
            if x.denominator % self.p == 0:
                raise LinAlgError(f"{x} has denominator divisible by {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        x = int(x)
        return x % self.p if self.kind == "Fp" else x

    def reduce(self, x):
        return x % self.p if self.kind == "Fp" else x

    def inverse(self, x):
        if self.kind == "Q":
            return 1 / Fraction(x)
        if self.kind == "Fp":
            return pow(x, -1, self.p)
        if x in (1, -1):
            return x
        raise LinAlgError(f"{x} is not a unit in Z")

    def format(self, x) -> str:
        x = self.reduce(x)
        if isinstance(x, Fraction) and x.denominator != 1:
            return f"{x.numerator}/{x.denominator}"
        return str(int(x))

    def sign(self, e: int):
        """(-1)^e as a ring element."""
        return self.reduce(-1 if e & 1 else 1)


def vec_add(ring: Coefficients, v: Vector, w: Mapping, scale=1) -> Vector:
    """Return ``v + scale * w`` (new dict)."""
    out = dict(v)
    for i, c in w.items():
        n = ring.reduce(out.get(i, 0) + scale * c)
        if n:
            out[i] = n
        else:
            out.pop(i, None)
    return out


def vec_iadd(ring: Coefficients, v: Vector, w: Mapping, scale=1) -> None:
    for i, c in w.items():
        n = ring.reduce(v.get(i, 0) + scale * c)
        if n:
            v[i] = n
        else:
            v.pop(i, None)


def vec_scale(ring: Coefficients, v: Mapping, s) -> Vector:
    out = {}
    for i, c in v.items():
        n = ring.reduce(c * s)
        if n:
            out[i] = n
    return out


class SparseMatrix:
    """Column-sparse exact matrix of shape ``(nrows, ncols)``."""

    __slots__ = ("ring", "nrows", "ncols", "cols")

    def __init__(self, ring: Coefficients, nrows: int, ncols: int, cols: Sequence[Mapping] | None = None):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            self.cols = [dict() for _ in range(ncols)]
        else:
            if len(cols) != ncols:
                raise LinAlgError(f"expected {ncols} columns, got {len(cols)}")
            self.cols = []
            for col in cols:
                clean = {}
                for i, c in col.items():
                    if not 0 <= i < nrows:
                        raise LinAlgError(f"row index {i} out of range {nrows}")
                    c = ring.reduce(c)
                    if c:
                        clean[i] = c
                self.cols.append(clean)

    # construction -----------------------------------------------------
    @classmethod
    def zeros(cls, ring, nrows, ncols) -> "SparseMatrix":
        return cls(ring, nrows, ncols)

    @classmethod
    def identity(cls, ring, n) -> "SparseMatrix":
        return cls(ring, n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, ring, rows: Sequence[Sequence]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{i: ring(rows[i][j]) for i in range(nrows) if rows[i][j]} for j in range(ncols)]
        return cls(ring, nrows, ncols, cols)

    @classmethod
    def permutation(cls, ring, images: Sequence[int], signs: Sequence[int] | None = None) -> "SparseMatrix":
        """Matrix sending e_j to signs[j] * e_{images[j]}."""
        n = len(images)
        signs = signs or [1] * n
        return cls(ring, n, n, [{images[j]: signs[j]} for j in range(n)])

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, c in col.items():
                out[i][j] = c
        return out

    # algebra ----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def apply(self, v: Mapping) -> Vector:
        out: Vector = {}
        for j, c in v.items():
            if c:
                vec_iadd(self.ring, out, self.cols[j], c)
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise LinAlgError(f"shape mismatch {self.shape} @ {other.shape}")
        return SparseMatrix(self.ring, self.nrows, other.ncols, [self.apply(col) for col in other.cols])

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} + {other.shape}")
        return SparseMatrix(self.ring, self.nrows, self.ncols,
                            [vec_add(self.ring, a, b) for a, b in zip(self.cols, other.cols)])

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scale(-1)

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def scale(self, s) -> "SparseMatrix":
        return SparseMatrix(self.ring, self.nrows, self.ncols, [vec_scale(self.ring, c, s) for c in self.cols])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.cols, other.cols))

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not any(self.cols)

    def transpose(self) -> "SparseMatrix":
        cols = [dict() for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, c in col.items():
                cols[i][j] = c
        return SparseMatrix(self.ring, self.ncols, self.nrows, cols)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def first_difference(self, other: "SparseMatrix") -> tuple[int, int] | None:
        """(row, col) of the first differing entry, or None."""
        for j, (a, b) in enumerate(zip(self.cols, other.cols)):
            if a != b:
                rows = sorted(set(a) | set(b))
                for i in rows:
                    if a.get(i, 0) != b.get(i, 0):
                        return i, j
        return None

    def __repr__(self) -> str:
        return f"SparseMatrix({self.ring}, {self.nrows}x{self.ncols}, nnz={self.nnz()})"


def block_diagonal(ring, blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    nr = sum(b.nrows for b in blocks)
    cols = []
    r0 = 0
    for b in blocks:
        for col in b.cols:
            cols.append({r0 + i: c for i, c in col.items()})
        r0 += b.nrows
    return SparseMatrix(ring, nr, len(cols), cols)


def kron(ring, a: SparseMatrix, b: SparseMatrix, sign=None) -> SparseMatrix:
    """a (x) b on lexicographic (a-major) bases; ``sign(ja, jb, ia, ib)`` optional."""
    cols = []
    for ja, ca in enumerate(a.cols):
        for jb, cb in enumerate(b.cols):
            col = {}
            for ia, x in ca.items():
                for ib, y in cb.items():
                    v = x * y
                    if sign is not None:
                        v *= sign(ja, jb, ia, ib)
                    col[ia * b.nrows + ib] = v
            cols.append(col)
    return SparseMatrix(ring, a.nrows * b.nrows, a.ncols * b.ncols, cols)


# ---------------------------------------------------------------------------
# rank, echelon forms, solving

def rank(m: SparseMatrix) -> int:
    return rank_of_vectors(m.ring, m.cols)


def rank_of_vectors(ring: Coefficients, vectors: Iterable[Mapping]) -> int:
    if ring.kind == "Fp":
        return kernels.rank_field_p(vectors, ring.p)
    if ring.kind == "Z":
        ring = Coefficients.rationals()
        vectors = ({i: Fraction(c) for i, c in v.items()} for v in vectors)
    return Echelon(ring).extend(vectors)


class Echelon:
    """Incremental reduced echelon basis over a field.

    Each stored pivot vector has coefficient 1 at its pivot index.  With
    ``track=True`` every pivot also records its expression in terms of the
    inserted vectors, which makes solving possible.
    """

    def __init__(self, ring: Coefficients, track: bool = False):
        if not ring.is_field:
            raise LinAlgError("echelon forms need a field")
        self.ring = ring
        self.track = track
        self.pivots: dict[int, Vector] = {}
        self.combos: dict[int, Vector] = {}
        self.count = 0

    def reduce(self, v: Mapping, combo: Vector | None = None) -> tuple[Vector, Vector | None]:
        """Reduce ``v`` by the stored pivots; returns (remainder, combo)."""
        ring = self.ring
        v = {i: ring.reduce(c) for i, c in v.items() if ring.reduce(c)}
        done: Vector = {}
        while v:
            lead = min(v)
            piv = self.pivots.get(lead)
            if piv is None:
                done[lead] = v.pop(lead)
                continue
            f = v[lead]
            vec_iadd(ring, v, piv, -f)
            if combo is not None:
                vec_iadd(ring, combo, self.combos[lead], -f)
        return done, combo

    def insert(self, v: Mapping) -> bool:
        """Insert a vector; True when it was independent."""
        idx = self.count
        self.count += 1
        combo = {idx: 1} if self.track else None
        rem, combo = self.reduce(v, combo)
        if not rem:
            return False
        lead = min(rem)
        inv = self.ring.inverse(rem[lead])
        rem = vec_scale(self.ring, rem, inv)
        self.pivots[lead] = rem
        if self.track:
            self.combos[lead] = vec_scale(self.ring, combo, inv)
        return True

    def extend(self, vectors: Iterable[Mapping]) -> int:
        for v in vectors:
            self.insert(v)
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def express(self, v: Mapping) -> Vector | None:
        """Coefficients on the inserted vectors summing to ``v``, or None."""
        if not self.track:
            raise LinAlgError("echelon was built without tracking")
        rem, combo = self.reduce(v, {})
        if rem:
            return None
        return vec_scale(self.ring, combo, -1)


def nullspace(m: SparseMatrix) -> list[Vector]:
    """Basis of the kernel of ``m`` over a field."""
    ring = m.ring
    ech = Echelon(ring, track=True)
    kernel = []
    for j, col in enumerate(m.cols):
        idx = ech.count
        ech.count += 1
        combo = {idx: 1}
        rem, combo = ech.reduce(col, combo)
        if not rem:
            kernel.append(combo)
            continue
        lead = min(rem)
        inv = ring.inverse(rem[lead])
        ech.pivots[lead] = vec_scale(ring, rem, inv)
        ech.combos[lead] = vec_scale(ring, combo, inv)
    return kernel


def solve(m: SparseMatrix, b: Mapping) -> Vector | None:
    """Some x with m x = b over a field, or None."""
    ech = Echelon(m.ring, track=True)
    ech.extend(m.cols)
    return ech.express(b)


def quotient_maps(ring: Coefficients, n: int, spanning: Sequence[Mapping]) -> tuple[SparseMatrix, SparseMatrix, list[int]]:
    """Projection k^n -> k^n / span and a section of it.

    Returns ``(proj, section, kept)`` where ``kept`` lists the ambient
    coordinates that index the quotient basis.  Over Z the span must be a
    direct summand admitting unit pivots.
    """
    field = ring if ring.is_field else None
    pivots: dict[int, Vector] = {}
    for v in spanning:
        v = {i: ring.reduce(c) for i, c in v.items() if ring.reduce(c)}
        for lead, piv in pivots.items():
            f = v.get(lead)
            if f:
                vec_iadd(ring, v, piv, -f)
        if not v:
            continue
        lead = None
        for i in sorted(v):
            if field is not None or v[i] in (1, -1):
                lead = i
                break
        if lead is None:
            raise LinAlgError("subspace is not split by unit pivots over Z")
        v = vec_scale(ring, v, ring.inverse(v[lead]))
        for other in pivots.values():
            f = other.get(lead)
            if f:
                vec_iadd(ring, other, v, -f)
        pivots[lead] = v
    kept = [i for i in range(n) if i not in pivots]
    pos = {i: k for k, i in enumerate(kept)}
    cols = []
    for i in range(n):
        if i in pos:
            cols.append({pos[i]: 1})
        else:
            piv = pivots[i]
            cols.append({pos[t]: ring.reduce(-c) for t, c in piv.items() if t != i})
    proj = SparseMatrix(ring, len(kept), n, cols)
    section = SparseMatrix(ring, n, len(kept), [{i: 1} for i in kept])
    return proj, section, kept


# ---------------------------------------------------------------------------
# integer Smith form

def elementary_divisors(m: SparseMatrix) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    cols: dict[int, dict[int, int]] = {}
    rows: dict[int, set[int]] = {}
    for j, col in enumerate(m.cols):
        c = {i: int(v) for i, v in col.items() if v}
        if c:
            cols[j] = c
            for i in c:
                rows.setdefault(i, set()).add(j)

    def set_entry(i, j, v):
        col = cols.setdefault(j, {})
        if v:
            col[i] = v
            rows.setdefault(i, set()).add(j)
        else:
            col.pop(i, None)
            if i in rows:
                rows[i].discard(j)
            if not col:
                cols.pop(j, None)

    diag: list[int] = []
    while cols:
        best = None
        for j, col in cols.items():
            for i, v in col.items():
                if best is None or abs(v) < abs(best[2]):
                    best = (i, j, v)
                    if abs(v) == 1:
                        break
            if best is not None and abs(best[2]) == 1:
                break
        pi, pj, pv = best
        while True:
            changed = False
            # clear column pj with row operations
            for i, v in list(cols.get(pj, {}).items()):
                if i == pi:
                    continue
                q = v // pv
                if q:
                    for j in list(rows.get(pi, ())):
                        set_entry(i, j, cols[j].get(i, 0) - q * cols[j][pi])
                if cols.get(pj, {}).get(i):
                    changed = True
            # clear row pi with column operations
            for j in list(rows.get(pi, ())):
                if j == pj:
                    continue
                v = cols[j][pi]
                q = v // pv
                if q:
                    for i, w in list(cols[pj].items()):
                        set_entry(i, j, cols.get(j, {}).get(i, 0) - q * w)
                if cols.get(j, {}).get(pi):
                    changed = True
            if not changed:
                break
            cand = [(i, pj, v) for i, v in cols[pj].items()] + [
                (pi, j, cols[j][pi]) for j in rows.get(pi, ())
            ]
            pi, pj, pv = min(cand, key=lambda t: abs(t[2]))
        diag.append(abs(pv))
        for j in list(rows.get(pi, ())):
            set_entry(pi, j, 0)
        for i in list(cols.get(pj, {})):
            set_entry(i, pj, 0)
        rows.pop(pi, None)
    nontrivial = sorted(d for d in diag if d != 1)
    ones = len(diag) - len(nontrivial)
    # normalize to a divisibility chain
    k = len(nontrivial)
    for a in range(k):
        for b in range(a + 1, k):
            x, y = nontrivial[a], nontrivial[b]
            g = gcd(x, y)
            nontrivial[a], nontrivial[b] = g, x // g * y
    return sorted([1] * ones + nontrivial)

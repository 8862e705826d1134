"""Exact little n-cubes operad.

Elements of C_n(m) are ordered tuples of m axis-aligned subrectangles of
[0,1]^n with rational corners and pairwise disjoint interiors.  Every
operation here is exact; equality of elements is equality of cube lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "CubesError",
    "Interval",
    "LittleCube",
    "CubesElement",
    "Permutation",
    "identity_element",
    "unit_element",
    "compose_at",
    "full_compose",
    "act_permutation",
    "block_permutation",
    "gamma_rs",
    "concat",
    "gamma_vec",
    "interchange",
    "rho_first",
    "rho_last",
    "block_transpose",
]


class CubesError(ValueError):
    """Raised for invalid operad elements or ill-typed compositions."""


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise CubesError("floating point coordinates are not allowed")
    return Fraction(x)


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = _q(self.lo), _q(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (0 <= lo < hi <= 1):
            raise CubesError(f"interval [{_fmt(lo)},{_fmt(hi)}] must satisfy 0 <= lo < hi <= 1")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def overlaps(self, other: "Interval") -> bool:
        """True when the open intervals meet."""
        return self.lo < other.hi and other.lo < self.hi

    def rescale_into(self, outer: "Interval") -> "Interval":
        """Image of this interval under the affine map [0,1] -> outer."""
        w = outer.hi - outer.lo
        return Interval(outer.lo + w * self.lo, outer.lo + w * self.hi)

    def __str__(self) -> str:
        return f"[{_fmt(self.lo)},{_fmt(self.hi)}]"


UNIT_INTERVAL = Interval(Fraction(0), Fraction(1))


@dataclass(frozen=True)
class LittleCube:
    factors: tuple[Interval, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise CubesError("a little cube needs at least one factor")

    @property
    def dim(self) -> int:
        return len(self.factors)

    def disjoint_from(self, other: "LittleCube") -> bool:
        return any(not a.overlaps(b) for a, b in zip(self.factors, other.factors))

    def rescale_into(self, outer: "LittleCube") -> "LittleCube":
        return LittleCube(tuple(f.rescale_into(o) for f, o in zip(self.factors, outer.factors)))

    def __str__(self) -> str:
        return "x".join(str(f) for f in self.factors)


def cube(*bounds: tuple) -> LittleCube:
    """Shorthand: ``cube((0, "1/2"), (0, 1))``."""
    return LittleCube(tuple(Interval(Fraction(lo), Fraction(hi)) for lo, hi in bounds))


@dataclass(frozen=True)
class CubesElement:
    dim: int
    cubes: tuple[LittleCube, ...]

    def __post_init__(self):
        object.__setattr__(self, "cubes", tuple(self.cubes))
        if self.dim < 1:
            raise CubesError("dimension must be positive")
        for c in self.cubes:
            if c.dim != self.dim:
                raise CubesError(f"cube {c} has dimension {c.dim}, expected {self.dim}")
        bad = self.overlapping_pair()
        if bad is not None:
            i, j = bad
            raise CubesError(f"cubes {i + 1} and {j + 1} overlap: {self.cubes[i]} / {self.cubes[j]}")

    @property
    def arity(self) -> int:
        return len(self.cubes)

    def overlapping_pair(self) -> tuple[int, int] | None:
        cs = self.cubes
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                if not cs[i].disjoint_from(cs[j]):
                    return i, j
        return None

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.cubes) + ")"

    @classmethod
    def from_intervals(cls, *bounds: tuple) -> "CubesElement":
        """One-dimensional element from ``(lo, hi)`` pairs."""
        return cls(1, tuple(cube(b) for b in bounds))


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..m}; ``images[k-1]`` is the image of k."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise CubesError(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def then(self, other: "Permutation") -> "Permutation":
        """Apply ``self`` first, then ``other``."""
        if len(other) != len(self):
            raise CubesError("permutation sizes differ")
        return Permutation(tuple(other(self(k)) for k in range(1, len(self) + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for k, v in enumerate(self.images, start=1):
            inv[v - 1] = k
        return Permutation(tuple(inv))


def identity_element(n: int) -> CubesElement:
    if n < 1:
        raise CubesError("dimension must be at least 1")
    return CubesElement(n, (LittleCube((UNIT_INTERVAL,) * n),))


def unit_element(n: int) -> CubesElement:
    """The unique element of C_n(0)."""
    if n < 1:
        raise CubesError("dimension must be at least 1")
    return CubesElement(n, ())


def compose_at(a: CubesElement, i: int, b: CubesElement) -> CubesElement:
    """a o_i b: rescale b into the i-th cube of a and splice it in."""
    if a.dim != b.dim:
        raise CubesError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if not 1 <= i <= a.arity:
        raise CubesError(f"slot {i} out of range 1..{a.arity}")
    outer = a.cubes[i - 1]
    inner = tuple(c.rescale_into(outer) for c in b.cubes)
    return CubesElement(a.dim, a.cubes[: i - 1] + inner + a.cubes[i:])


def full_compose(c: CubesElement, args: Sequence[CubesElement]) -> CubesElement:
    if len(args) != c.arity:
        raise CubesError(f"expected {c.arity} arguments, got {len(args)}")
    out = c
    # right to left keeps the slot numbering of the untouched prefix valid
    for i in range(c.arity, 0, -1):
        out = compose_at(out, i, args[i - 1])
    return out


def act_permutation(c: CubesElement, sigma: Permutation) -> CubesElement:
    """Move the cube in position k to position sigma(k)."""
    if len(sigma) != c.arity:
        raise CubesError(f"permutation of size {len(sigma)} on arity {c.arity}")
    out: list[LittleCube | None] = [None] * c.arity
    for k in range(1, c.arity + 1):
        out[sigma(k) - 1] = c.cubes[k - 1]
    return CubesElement(c.dim, tuple(out))


def block_permutation(sigma: Permutation, sizes: Sequence[int]) -> Permutation:
    """Permutation moving block k (of length ``sizes[k-1]``) to slot sigma(k)."""
    if len(sigma) != len(sizes):
        raise CubesError("block sizes do not match permutation size")
    new_sizes = [0] * len(sizes)
    for k, s in enumerate(sizes, start=1):
        new_sizes[sigma(k) - 1] = s
    new_start = [0]
    for s in new_sizes:
        new_start.append(new_start[-1] + s)
    images = []
    for k, s in enumerate(sizes, start=1):
        base = new_start[sigma(k) - 1]
        images.extend(base + t + 1 for t in range(s))
    return Permutation(tuple(images))


def gamma_rs(r, s) -> CubesElement:
    r, s = _q(r), _q(s)
    if r <= 0 or s <= 0:
        raise CubesError("lengths must be positive")
    mid = r / (r + s)
    return CubesElement.from_intervals((0, mid), (mid, 1))


def concat(r, s) -> tuple[Fraction, CubesElement]:
    """The Moore concatenation (r, s) -> (r + s, gamma_{r,s})."""
    return _q(r) + _q(s), gamma_rs(r, s)


def gamma_vec(word: str | Sequence[str], lengths: Sequence) -> tuple[CubesElement, Fraction]:
    """The element of C_1(#a) subdividing [0,1] proportionally to ``lengths``.

    Letters ``a`` get a subinterval, ``b``/``c`` leave a gap of their length.
    Returns the element and the total length.
    """
    word = tuple(word)
    rs = [_q(r) for r in lengths]
    if len(word) != len(rs):
        raise CubesError("word and lengths differ in length")
    for x, r in zip(word, rs):
        if x not in "abc":
            raise CubesError(f"letter {x!r} not in {{a,b,c}}")
        if r < 0 or (r == 0 and x != "b"):
            raise CubesError(f"length {r} not allowed for letter {x}")
    total = sum(rs, Fraction(0))
    if "a" not in word:
        return unit_element(1), total
    if total == 0:
        raise CubesError("all lengths are zero")
    bounds = []
    acc = Fraction(0)
    for x, r in zip(word, rs):
        if x == "a":
            bounds.append((acc / total, (acc + r) / total))
        acc += r
    return CubesElement.from_intervals(*bounds), total


def interchange(a: CubesElement, c: CubesElement) -> CubesElement:
    """rho(a, c): products [a^i] x c_j in lexicographic order of (i, j)."""
    if a.dim != 1:
        raise CubesError("first argument must be one-dimensional")
    cubes = tuple(
        LittleCube(ai.factors + cj.factors) for ai in a.cubes for cj in c.cubes
    )
    return CubesElement(1 + c.dim, cubes)


def rho_first(a: CubesElement, n: int) -> CubesElement:
    if n < 2:
        raise CubesError("target dimension must be at least 2")
    return interchange(a, identity_element(n - 1))


def rho_last(c: CubesElement) -> CubesElement:
    return interchange(identity_element(1), c)


def block_transpose(m: int, l: int) -> Permutation:
    """sigma_{m,l}: position (i-1)m + j goes to (j-1)l + i."""
    if m < 1 or l < 1:
        raise CubesError("block sizes must be positive")
    images = [0] * (m * l)
    for i in range(1, l + 1):
        for j in range(1, m + 1):
            images[(i - 1) * m + j - 1] = (j - 1) * l + i
    return Permutation(tuple(images))


def iter_cubes(elements: Iterable[CubesElement]) -> Iterable[LittleCube]:
    for e in elements:
        yield from e.cubes

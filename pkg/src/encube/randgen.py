"""Seeded random generators for operad elements, words and Delta maps.

All randomness goes through ``random.Random`` (Mersenne Twister), whose
output for a given integer seed is fixed across platforms and Python
versions, so counterexamples replay exactly.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .cubes import CubesElement, Interval, LittleCube, Permutation

GRID = 64


def _grid_point(rng: random.Random, lo: Fraction, hi: Fraction) -> Fraction | None:
    """A grid point strictly between lo and hi, if one exists."""
    a = math.floor(lo * GRID) + 1
    b = math.ceil(hi * GRID) - 1
    if a > b:
        return None
    return Fraction(rng.randint(a, b), GRID)


def random_element(rng: random.Random, dim: int, arity: int, shrink: float = 0.5) -> CubesElement:
    """Random element of C_dim(arity) with coordinates on the 1/64 grid."""
    if arity == 0:
        return CubesElement(dim, ())
    boxes = [[(Fraction(0), Fraction(1))] * dim]
    tries = 0
    while len(boxes) < arity:
        tries += 1
        if tries > 1000:
            raise RuntimeError("could not subdivide; arity too large for the grid")
        k = rng.randrange(len(boxes))
        box = boxes[k]
        axis = rng.randrange(dim)
        lo, hi = box[axis]
        cut = _grid_point(rng, lo, hi)
        if cut is None:
            continue
        left = list(box)
        right = list(box)
        left[axis] = (lo, cut)
        right[axis] = (cut, hi)
        boxes[k:k + 1] = [left, right]
    rng.shuffle(boxes)
    cubes = []
    for box in boxes:
        factors = []
        for lo, hi in box:
            if rng.random() < shrink:
                p = _grid_point(rng, lo, hi)
                q = _grid_point(rng, lo, hi)
                if p is not None and q is not None and p != q:
                    lo, hi = min(p, q), max(p, q)
                elif p is not None:
                    lo, hi = (lo, p) if rng.random() < 0.5 else (p, hi)
            factors.append(Interval(lo, hi))
        cubes.append(LittleCube(tuple(factors)))
    return CubesElement(dim, tuple(cubes))


def random_permutation(rng: random.Random, m: int) -> Permutation:
    images = list(range(1, m + 1))
    rng.shuffle(images)
    return Permutation(tuple(images))


def random_word(rng: random.Random, length: int) -> str:
    """Word in {a,b,c} weighted a:b:c = 2:1:1."""
    return "".join(rng.choice("aabc") for _ in range(length))


def random_lengths(rng: random.Random, word: str) -> tuple[Fraction, ...]:
    """Lengths compatible with ``word``; b letters are zero half the time."""
    out = []
    for x in word:
        if x == "b" and rng.random() < 0.5:
            out.append(Fraction(0))
        else:
            out.append(Fraction(rng.randint(1, 12), rng.randint(1, 4)))
    return tuple(out)


def random_composition(rng: random.Random, total: int, parts: int) -> tuple[int, ...]:
    """Weak composition of ``total`` into ``parts`` non-negative pieces."""
    if parts == 0:
        return ()
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0] + cuts + [total]
    return tuple(bounds[i + 1] - bounds[i] for i in range(parts))

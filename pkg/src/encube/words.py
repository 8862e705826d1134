"""Tensor words over a presentation: enumeration and letterwise operations.

A word is a tuple of basis indices; it stands for the tensor product of
those basis elements.  Combinations of words are ``{word: coeff}`` dicts.
Signs follow the Koszul rule on internal degrees.
"""

from __future__ import annotations

from typing import Iterator, Mapping, Sequence

from .algebra import AlgebraPresentation
from .chain import ChainComplex, ChainMap
from .linalg import Coefficients

Word = tuple


def word_degree(alg: AlgebraPresentation, w: Word) -> int:
    return sum(alg.degrees[i] for i in w)


def word_weight(alg: AlgebraPresentation, w: Word) -> int:
    return sum(alg.weight(i) for i in w)


def enumerate_words(alg: AlgebraPresentation, length: int, max_degree: int | None,
                    letters: Sequence[int] | None = None) -> Iterator[Word]:
    """Words of a given length with internal degree <= ``max_degree`` and
    weight within the presentation's weight cap, in lexicographic order."""
    letters = list(range(alg.rank)) if letters is None else list(letters)
    if not letters:
        if length == 0 and (max_degree is None or max_degree >= 0):
            yield ()
        return
    min_deg = min(alg.degrees[i] for i in letters)
    min_wt = min(alg.weight(i) for i in letters)
    wcap = alg.weight_cap

    def rec(prefix, deg, wt, left):
        if left == 0:
            yield tuple(prefix)
            return
        for i in letters:
            d = deg + alg.degrees[i]
            w = wt + alg.weight(i)
            if max_degree is not None and d + (left - 1) * min_deg > max_degree:
                continue
            if wcap is not None and w + (left - 1) * min_wt > wcap:
                continue
            prefix.append(i)
            yield from rec(prefix, d, w, left - 1)
            prefix.pop()

    yield from rec([], 0, 0, length)


def word_complex(alg: AlgebraPresentation, length: int, max_degree: int | None,
                 letters: Sequence[int] | None = None) -> ChainComplex:
    """Truncated tensor power with the Leibniz differential."""
    bases: dict[int, list] = {}
    for w in enumerate_words(alg, length, max_degree, letters):
        bases.setdefault(word_degree(alg, w), []).append(w)
    return ChainComplex.from_function(alg.ring, bases, lambda w: leibniz(alg, w),
                                      strict=False, validate=False)


def add_term(ring: Coefficients, out: dict, key, c) -> None:
    v = ring.reduce(out.get(key, 0) + c)
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def leibniz(alg: AlgebraPresentation, w: Word) -> dict:
    ring = alg.ring
    out: dict = {}
    before = 0
    for k, i in enumerate(w):
        s = ring.sign(before)
        for j, c in alg.diff.get(i, {}).items():
            add_term(ring, out, w[:k] + (j,) + w[k + 1:], s * c)
        before += alg.degrees[i]
    return out


def multiply_at(alg: AlgebraPresentation, w: Word, k: int) -> dict:
    """Multiply letters k and k+1 (0-indexed)."""
    out: dict = {}
    for j, c in alg.mul(w[k], w[k + 1]).items():
        add_term(alg.ring, out, w[:k] + (j,) + w[k + 2:], c)
    return out


def insert_unit(alg: AlgebraPresentation, w: Word, k: int) -> dict:
    """Insert the unit so that it becomes letter k."""
    out: dict = {}
    for j, c in (alg.unit or {}).items():
        add_term(alg.ring, out, w[:k] + (j,) + w[k:], c)
    return out


def augment_at(alg: AlgebraPresentation, w: Word, k: int) -> dict:
    c = alg.ring.reduce(alg.eps(w[k]))
    return {w[:k] + w[k + 1:]: c} if c else {}


def koszul_sign(degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Sign of reordering graded symbols: new position t holds old perm[t]."""
    odd = [degrees[p] % 2 for p in perm]
    s = 0
    for a in range(len(perm)):
        if not odd[a]:
            continue
        for b in range(a + 1, len(perm)):
            if odd[b] and perm[a] > perm[b]:
                s += 1
    return -1 if s % 2 else 1


def cyclic_shift(alg: AlgebraPresentation, w: Word) -> dict:
    """t: move the last letter to the front with its Koszul sign."""
    if len(w) <= 1:
        return {w: 1}
    s = (alg.degrees[w[-1]] * word_degree(alg, w[:-1])) % 2
    return {(w[-1],) + w[:-1]: -1 if s else 1}


def linear_extend(ring: Coefficients, combo: Mapping, f) -> dict:
    out: dict = {}
    for key, c in combo.items():
        for k2, c2 in f(key).items():
            add_term(ring, out, k2, c * c2)
    return out


def word_map(source: ChainComplex, target: ChainComplex, f) -> ChainMap:
    return ChainMap.from_function(source, target, f, strict=False, validate=False)


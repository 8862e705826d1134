"""Pure-Python reference versions of the elimination kernels."""

from __future__ import annotations


def rank_mod_p(vectors, p):
    """Rank over F_p of sparse vectors given as ``{index: int}`` dicts."""
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for vec in vectors:
        v = {i: c % p for i, c in vec.items() if c % p}
        while v:
            lead = min(v)
            piv = pivots.get(lead)
            if piv is None:
                inv = pow(v[lead], p - 2, p) if p > 2 else 1
                if inv != 1:
                    v = {i: (c * inv) % p for i, c in v.items()}
                pivots[lead] = v
                rank += 1
                break
            f = v[lead]
            for i, c in piv.items():
                n = (v.get(i, 0) - f * c) % p
                if n:
                    v[i] = n
                else:
                    v.pop(i, None)
    return rank


def rank_gf2(vectors):
    """Rank over F_2 with rows packed into Python ints."""
    pivots: dict[int, int] = {}
    rank = 0
    for vec in vectors:
        x = 0
        for i, c in vec.items():
            if c & 1:
                x ^= 1 << i
        while x:
            lead = x.bit_length() - 1
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = x
                rank += 1
                break
            x ^= piv
    return rank

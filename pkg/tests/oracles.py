"""Reference computations that share no code with the package.

Ranks are computed by plain Gaussian elimination over Q (Fractions) or
F_p on dense lists; complexes are described by dense differential
matrices built from first principles.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def dense_rank(rows: list[list], p: int | None) -> int:
    """Rank over Q (p=None) or F_p."""
    m = [[(Fraction(x) if p is None else int(x) % p) for x in row] for row in rows]
    if not m or not m[0]:
        return 0
    rank, ncols = 0, len(m[0])
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = (1 / m[rank][c]) if p is None else pow(m[rank][c], -1, p)
        m[rank] = [(x * inv) if p is None else (x * inv) % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c]
                m[r] = [(a - f * b) if p is None else (a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def hochschild_truncated_polynomial(n: int, p: int | None, degrees: range) -> tuple[int, ...]:
    """HH_k of k[x]/x^n from the 2-periodic resolution.

    After tensoring with A over A^e the complex is A in every degree with
    d_k = 0 for k odd and multiplication by n x^{n-1} for k even >= 2.
    """
    mult = [[0] * n for _ in range(n)]
    for j in range(n):  # column j is the image of x^j
        if j == 0:
            mult[n - 1][0] = n
    zero = [[0] * n for _ in range(n)]

    def d(k):
        if k <= 0:
            return None
        return zero if k % 2 else mult

    out = []
    for k in degrees:
        dk, dk1 = d(k), d(k + 1)
        rk = dense_rank(dk, p) if dk is not None else 0
        rk1 = dense_rank(dk1, p) if dk1 is not None else 0
        out.append(n - rk - rk1)
    return tuple(out)


def exterior_bar_brute(p: int, max_degree: int) -> tuple[int, ...]:
    """Homology of the normalized bar complex of Lambda(x), |x| = 1, over F_p.

    Normalized chains in bar degree m are spanned by [x|...|x] (m letters)
    of total degree 2m; every face multiplies x.x = 0 or augments x to 0,
    so the complex has zero differential.
    """
    ranks = [0] * (max_degree + 1)
    for m in range(0, max_degree + 1):
        if 2 * m <= max_degree:
            ranks[2 * m] += 1
    return tuple(ranks)


def reduced_bar_free_monoid(weight_cap: int, max_degree: int) -> tuple[int, ...]:
    """Betti numbers of the reduced bar complex of x k[x] (|x| = 0) over F_2,
    by dense elimination over all words with total weight <= weight_cap."""
    def words(m):
        return [w for w in itertools.product(range(1, weight_cap + 1), repeat=m) if sum(w) <= weight_cap]

    def diff(m):
        src, tgt = words(m), words(m - 1)
        index = {w: i for i, w in enumerate(tgt)}
        rows = [[0] * len(src) for _ in tgt]
        for j, w in enumerate(src):
            for i in range(m - 1):
                merged = w[:i] + (w[i] + w[i + 1],) + w[i + 2:]
                rows[index[merged]][j] += 1
        return rows

    out = []
    for deg in range(max_degree + 1):
        n = len(words(deg)) if deg >= 1 else 0
        rk = dense_rank(diff(deg), 2) if deg >= 2 else 0
        rk1 = dense_rank(diff(deg + 1), 2) if deg + 1 >= 2 else 0
        out.append(n - rk - rk1)
    return tuple(out)

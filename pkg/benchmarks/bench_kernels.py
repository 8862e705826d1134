"""Compare the compiled rank kernels with the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Matrices are random sparse column lists and the differentials of realized
bar complexes, which is where homology spends its time.  The Python column
uses the bit-packed kernel for F_2 and sparse elimination otherwise, which
is what the library dispatches to without the extension.
"""

from __future__ import annotations

import argparse
import random
import timeit

from encube import _kernels_py
from encube.algebra import truncated_polynomial
from encube.bar import bar_simplicial
from encube.linalg import Coefficients

try:
    from encube import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def random_columns(rng: random.Random, nrows: int, ncols: int, density: float, p: int) -> list[dict]:
    cols = []
    for _ in range(ncols):
        col = {i: rng.randrange(1, p) for i in range(nrows) if rng.random() < density}
        cols.append(col)
    return cols


def bar_columns(p: int, top: int) -> list[list[dict]]:
    alg = truncated_polynomial(Coefficients.prime(p), 3)
    total = bar_simplicial(alg, top, top).realize()
    return [[{i: int(c) % p for i, c in col.items()} for col in total.d(k).cols]
            for k in sorted(total.diffs) if total.d(k).cols]


def cases():
    rng = random.Random(0)
    yield "random 300x300 5% F2", 2, [random_columns(rng, 300, 300, 0.05, 2)]
    yield "random 2000x2000 0.3% F2", 2, [random_columns(rng, 2000, 2000, 0.003, 2)]
    yield "random 300x300 5% F101", 101, [random_columns(rng, 300, 300, 0.05, 101)]
    yield "random 800x600 1% F3", 3, [random_columns(rng, 800, 600, 0.01, 3)]
    yield "bar of F3[x]/x^3, top 9", 3, bar_columns(3, 9)
    yield "bar of F2[x]/x^3, top 9", 2, bar_columns(2, 9)


def bench(repeat: int) -> list[tuple]:
    rows = []
    for name, p, mats in cases():
        def run_py():
            return [_kernels_py.rank_gf2(m) if p == 2 else _kernels_py.rank_mod_p(m, p) for m in mats]

        py_ranks = run_py()
        t_py = min(timeit.repeat(run_py, number=1, repeat=repeat))
        if compiled is None:
            rows.append((name, t_py, None, None))
            continue

        def run_c():
            # compiled sparse elimination for every prime, including 2
            return [compiled.rank_mod_p(m, p) for m in mats]

        assert run_c() == py_ranks, name
        t_c = min(timeit.repeat(run_c, number=1, repeat=repeat))
        rows.append((name, t_py, t_c, t_py / t_c if t_c else float("inf")))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"{'case':<28} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, t_py, t_c, ratio in bench(args.repeat):
        if t_c is None:
            print(f"{name:<28} {t_py:>10.4f} {'n/a':>10} {'n/a':>8}")
        else:
            print(f"{name:<28} {t_py:>10.4f} {t_c:>10.4f} {ratio:>7.1f}x")


if __name__ == "__main__":
    main()

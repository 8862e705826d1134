"""Kernel selection: compiled extension when built, pure Python otherwise.

Set ``ENCUBE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("ENCUBE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _compiled = None
else:
    _compiled = None

if _compiled is not None:
    rank_mod_p = _compiled.rank_mod_p
    BACKEND = "cython"
else:
    rank_mod_p = _kernels_py.rank_mod_p


def rank_field_p(vectors, p: int) -> int:
    """Rank over F_p, routed to the fastest available kernel.

    F_2 always uses the bit-packed kernel: XOR on Python integers beats the
    compiled sparse elimination there (see benchmarks/bench_kernels.py).
    """
    if p == 2:
        return _kernels_py.rank_gf2(vectors)
    if _compiled is not None and p >= (1 << 31):
        return _kernels_py.rank_mod_p(vectors, p)
    return rank_mod_p(vectors, p)

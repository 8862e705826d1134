# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels; same contract as ``_kernels_py``."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


cdef inline int64_t _inv_mod(int64_t a, int64_t p):
    cdef int64_t t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef void _sort_pairs(int64_t* idx, int64_t* val, Py_ssize_t n):
    # insertion sort; input vectors are short and usually already sorted
    cdef Py_ssize_t i, j
    cdef int64_t ki, kv
    for i in range(1, n):
        ki = idx[i]
        kv = val[i]
        j = i - 1
        while j >= 0 and idx[j] > ki:
            idx[j + 1] = idx[j]
            val[j + 1] = val[j]
            j -= 1
        idx[j + 1] = ki
        val[j + 1] = kv


def rank_mod_p(vectors, long long p):
    """Rank over F_p of sparse vectors given as ``{index: int}`` dicts."""
    if p >= (1 << 31):
        raise ValueError("modulus too large for the compiled kernel")
    vectors = list(vectors)
    cdef Py_ssize_t dim = 0
    for vec in vectors:
        for i in vec:
            if i + 1 > dim:
                dim = i + 1
    if dim == 0:
        return 0
    cdef int64_t** piv_idx = <int64_t**> malloc(dim * sizeof(int64_t*))
    cdef int64_t** piv_val = <int64_t**> malloc(dim * sizeof(int64_t*))
    cdef Py_ssize_t* piv_len = <Py_ssize_t*> malloc(dim * sizeof(Py_ssize_t))
    cdef int64_t* cur_idx = <int64_t*> malloc(dim * sizeof(int64_t))
    cdef int64_t* cur_val = <int64_t*> malloc(dim * sizeof(int64_t))
    cdef int64_t* tmp_idx = <int64_t*> malloc(dim * sizeof(int64_t))
    cdef int64_t* tmp_val = <int64_t*> malloc(dim * sizeof(int64_t))
    cdef int64_t* swap_p
    cdef Py_ssize_t k, n, m, a, b, plen
    cdef int64_t lead, f, c, inv
    cdef int64_t* pi
    cdef int64_t* pv
    cdef Py_ssize_t rank = 0
    for k in range(dim):
        piv_idx[k] = NULL
        piv_val[k] = NULL
        piv_len[k] = 0
    try:
        for vec in vectors:
            n = 0
            for i, cv in vec.items():
                c = (<int64_t> (cv % p))
                if c:
                    cur_idx[n] = i
                    cur_val[n] = c
                    n += 1
            _sort_pairs(cur_idx, cur_val, n)
            while n > 0:
                lead = cur_idx[0]
                if piv_idx[lead] == NULL:
                    inv = _inv_mod(cur_val[0], p)
                    pi = <int64_t*> malloc(n * sizeof(int64_t))
                    pv = <int64_t*> malloc(n * sizeof(int64_t))
                    for k in range(n):
                        pi[k] = cur_idx[k]
                        pv[k] = (cur_val[k] * inv) % p
                    piv_idx[lead] = pi
                    piv_val[lead] = pv
                    piv_len[lead] = n
                    rank += 1
                    break
                f = cur_val[0]
                pi = piv_idx[lead]
                pv = piv_val[lead]
                plen = piv_len[lead]
                a = 0
                b = 0
                m = 0
                while a < n or b < plen:
                    if b >= plen or (a < n and cur_idx[a] < pi[b]):
                        tmp_idx[m] = cur_idx[a]
                        tmp_val[m] = cur_val[a]
                        m += 1
                        a += 1
                    elif a >= n or pi[b] < cur_idx[a]:
                        c = (p - (f * pv[b]) % p) % p
                        if c:
                            tmp_idx[m] = pi[b]
                            tmp_val[m] = c
                            m += 1
                        b += 1
                    else:
                        c = (cur_val[a] - (f * pv[b]) % p) % p
                        if c < 0:
                            c += p
                        if c:
                            tmp_idx[m] = cur_idx[a]
                            tmp_val[m] = c
                            m += 1
                        a += 1
                        b += 1
                swap_p = cur_idx
                cur_idx = tmp_idx
                tmp_idx = swap_p
                swap_p = cur_val
                cur_val = tmp_val
                tmp_val = swap_p
                n = m
    finally:
        for k in range(dim):
            if piv_idx[k] != NULL:
                free(piv_idx[k])
                free(piv_val[k])
        free(piv_idx)
        free(piv_val)
        free(piv_len)
        free(cur_idx)
        free(cur_val)
        free(tmp_idx)
        free(tmp_val)
    return rank


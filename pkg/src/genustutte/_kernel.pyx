# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: subset rank tables and the genus-g tuple walk.

Mirrors _kernel_py exactly; anything observable must stay bit-identical
between the two so the selector can swap them freely.
"""

from libc.stdlib cimport free, malloc
from cpython.bytes cimport PyBytes_FromStringAndSize

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int _hibit(unsigned int v) { return 31 - __builtin_clz(v); }
    static inline int _popcnt(unsigned int v) { return __builtin_popcount(v); }
    #else
    static inline int _hibit(unsigned int v) { int r = -1; while (v) { v >>= 1; r++; } return r; }
    static inline int _popcnt(unsigned int v) { int c = 0; while (v) { c += v & 1; v >>= 1; } return c; }
    #endif
    """
    int _hibit(unsigned int v) nogil
    int _popcnt(unsigned int v) nogil


def build_rank_table(int n, list bases):
    """ranks[mask] = max over bases of |mask & basis|, for every mask."""
    cdef unsigned long long size = 1ULL << n
    cdef Py_ssize_t nb = len(bases)
    if nb == 0:
        raise ValueError("no bases")
    cdef unsigned int* bs = <unsigned int*> malloc(nb * sizeof(unsigned int))
    if bs == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(nb):
        bs[i] = <unsigned int> bases[i]
    cdef int r = _popcnt(bs[0])
    table = bytearray(size)
    cdef unsigned char[::1] tv = table
    cdef unsigned long long mask
    cdef int best, c
    for mask in range(size):
        best = 0
        for i in range(nb):
            c = _popcnt(<unsigned int> mask & bs[i])
            if c > best:
                best = c
                if best == r:
                    break
        tv[mask] = <unsigned char> best
    free(bs)
    return table


def whitney_counts(int g, int n, const unsigned char[::1] ranks not None,
                   unsigned long long a1_start=0, a1_end=None):
    """Aggregate exponent vectors of the genus-g corank-nullity enumeration.

    Keys are bytes in the canonical variable order
    [x_i | y_i | per pair (i<j): x-cap, y-cap, x-cup, y-cup].
    """
    cdef unsigned long long size = 1ULL << n
    cdef unsigned long long end = size if a1_end is None else <unsigned long long> a1_end
    if a1_start > end or end > size:
        raise ValueError("bad A_1 slice")
    if g < 1 or g > 26:
        raise ValueError("genus out of range")
    cdef int npairs = g * (g - 1) // 2
    cdef int nvars = 2 * g + 4 * npairs
    cdef int rho = ranks[size - 1]

    cdef unsigned char* pc = <unsigned char*> malloc(size)
    cdef unsigned int* tup = <unsigned int*> malloc(g * sizeof(unsigned int))
    cdef char* exps = <char*> malloc(nvars)
    if pc == NULL or tup == NULL or exps == NULL:
        free(pc); free(tup); free(exps)
        raise MemoryError()
    cdef unsigned long long m
    pc[0] = 0
    for m in range(1, size):
        pc[m] = pc[m >> 1] + <unsigned char> (m & 1)

    cdef dict counts = {}
    cdef unsigned long long a1
    cdef unsigned int a, b, cap, cup
    cdef int i, j, pos, base, rr, rc, ru
    cdef object key, cur

    try:
        for a1 in range(a1_start, end):
            tup[0] = <unsigned int> a1
            for i in range(1, g):
                tup[i] = 0
            pos = 0
            while True:
                # refresh exponent slots touched by positions >= pos
                for i in range(pos, g):
                    a = tup[i]
                    rr = ranks[a]
                    exps[i] = <char> (rho - rr)
                    exps[g + i] = <char> (pc[a] - rr)
                base = 2 * g
                for i in range(g):
                    for j in range(i + 1, g):
                        if j >= pos:
                            a = tup[i]
                            b = tup[j]
                            cap = a & b
                            cup = a | b
                            rc = ranks[cap]
                            ru = ranks[cup]
                            exps[base] = <char> (rho - rc)
                            exps[base + 1] = <char> (pc[cap] - rc)
                            exps[base + 2] = <char> (rho - ru)
                            exps[base + 3] = <char> (pc[cup] - ru)
                        base += 4
                key = PyBytes_FromStringAndSize(exps, nvars)
                cur = counts.get(key)
                if cur is None:
                    counts[key] = 1
                else:
                    counts[key] = cur + 1
                pos = g - 1
                while pos >= 1:
                    tup[pos] += 1
                    if tup[pos] < size:
                        break
                    tup[pos] = 0
                    pos -= 1
                if pos < 1:
                    break
    finally:
        free(pc)
        free(tup)
        free(exps)
    return counts


def gf2_rank_table(int n, list rows):
    """ranks[mask] = GF(2) rank of the rows restricted to columns in mask."""
    cdef unsigned long long size = 1ULL << n
    cdef Py_ssize_t k = len(rows)
    cdef unsigned int* rw = <unsigned int*> malloc(k * sizeof(unsigned int))
    cdef unsigned int* piv = <unsigned int*> malloc(n * sizeof(unsigned int))
    if rw == NULL or piv == NULL:
        free(rw); free(piv)
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(k):
        rw[i] = <unsigned int> rows[i]
    table = bytearray(size)
    cdef unsigned char[::1] tv = table
    cdef unsigned long long mask
    cdef unsigned int v
    cdef int r, h, j
    for mask in range(size):
        for j in range(n):
            piv[j] = 0
        r = 0
        for i in range(k):
            v = rw[i] & <unsigned int> mask
            while v:
                h = _hibit(v)
                if piv[h]:
                    v ^= piv[h]
                else:
                    piv[h] = v
                    r += 1
                    break
        tv[mask] = <unsigned char> r
    free(rw)
    free(piv)
    return table

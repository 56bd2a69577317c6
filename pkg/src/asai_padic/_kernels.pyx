# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the exhaustive Schwartz-model kernels (see _kernels_py)."""

from libc.stdlib cimport calloc, free


cdef inline long long _mod(long long a, long long m) nogil:
    cdef long long r = a % m
    return r + m if r < 0 else r


cdef bint _is_zero(long long *h, long long P, long long p) nogil:
    cdef long long step = P // p
    cdef long long a, j, t
    for a in range(step):
        t = h[a]
        for j in range(1, p):
            if h[a + j * step] != t:
                return False
    return True


def unit_average_mismatches(long long p, long long r, long long M):
    cdef long long P = 1, N = 1, Pp, i, m, n, u, bad = 0
    for i in range(r):
        P *= p
    for i in range(M):
        N *= p
    Pp = P // p
    cdef long long *h = <long long *> calloc(P, sizeof(long long))
    if h == NULL:
        raise MemoryError()
    try:
        with nogil:
            for m in range(N):
                for n in range(N):
                    for i in range(P):
                        h[i] = 0
                    for u in range(1, P):
                        if u % p:
                            h[_mod(-(u * m), P)] += 1
                    if m % P == 0:
                        h[0] -= P
                    if m % Pp == 0:
                        h[0] += Pp
                    if not _is_zero(h, P, p):
                        bad += 1
    finally:
        free(h)
    return bad


def distribution_mismatches(long long p, long long r, long long M, long long rhs_coeff=-1):
    cdef long long P = 1, N = 1, pr = 1, i, m, n, x, y, a, bad = 0
    for i in range(r):
        pr *= p
    P = pr * p
    if rhs_coeff < 0:
        rhs_coeff = p * p
    for i in range(M):
        N *= p
    cdef long long *h = <long long *> calloc(P, sizeof(long long))
    if h == NULL:
        raise MemoryError()
    try:
        with nogil:
            for m in range(N):
                for n in range(N):
                    for i in range(P):
                        h[i] = 0
                    for x in range(p):
                        for y in range(p):
                            a = _mod(m + m * x * pr + n * y * pr, P)
                            h[_mod(-a, P)] += 1
                    if m % p == 0 and n % p == 0:
                        h[_mod(-m, P)] -= rhs_coeff
                    if not _is_zero(h, P, p):
                        bad += 1
    finally:
        free(h)
    return bad

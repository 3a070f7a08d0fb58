# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled oracle kernels; same contracts as ``_kernels_py``."""

from libc.stdint cimport uint32_t, uint64_t
from libc.stdlib cimport calloc, free

PRNG_NAME = "splitmix64"


cdef inline uint64_t _splitmix(uint64_t* state) nogil:
    state[0] += <uint64_t>0x9E3779B97F4A7C15
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _uniform_below(uint64_t* state, uint64_t bound) nogil:
    cdef uint64_t threshold = (<uint64_t>0 - bound) % bound
    cdef uint64_t x
    while True:
        x = _splitmix(state)
        if x >= threshold:
            return x % bound


def splitmix64(state):
    cdef uint64_t s = state
    cdef uint64_t out = _splitmix(&s)
    return s, out


def uniform_below(state, bound):
    cdef uint64_t s = state
    cdef uint64_t out = _uniform_below(&s, bound)
    return s, out


def sample_tally(long d_y, long d_z, long n1, long n2, long trials, seed,
                 bint disjoint_only=False, long max_attempts=0):
    cdef uint64_t domain = <uint64_t>d_y * <uint64_t>d_z
    cdef uint64_t state = seed & 0xFFFFFFFFFFFFFFFF
    cdef long d1 = n1 + 1, d2 = n2 + 1, du = min(n1, n2) + 1
    cdef uint32_t* seen = <uint32_t*>calloc(domain, sizeof(uint32_t))
    cdef uint32_t* ys1 = <uint32_t*>calloc(d_y, sizeof(uint32_t))
    cdef uint32_t* ys2 = <uint32_t*>calloc(d_y, sizeof(uint32_t))
    cdef uint64_t* counts = <uint64_t*>calloc(d1 * d2 * du, sizeof(uint64_t))
    cdef long accepted = 0, attempts = 0, i, k1, k2, u
    cdef uint64_t x, y
    cdef uint32_t stamp
    if seen == NULL or ys1 == NULL or ys2 == NULL or counts == NULL:
        free(seen); free(ys1); free(ys2); free(counts)
        raise MemoryError()
    try:
        with nogil:
            while accepted < trials and (max_attempts == 0 or attempts < max_attempts):
                attempts += 1
                stamp = <uint32_t>attempts
                k1 = k2 = u = 0
                for i in range(n1 + n2):
                    while True:
                        x = _uniform_below(&state, domain)
                        if seen[x] != stamp:
                            break
                    seen[x] = stamp
                    y = x // <uint64_t>d_z
                    if i < n1:
                        if ys1[y] != stamp:
                            ys1[y] = stamp
                            k1 += 1
                    else:
                        if ys2[y] != stamp:
                            ys2[y] = stamp
                            k2 += 1
                            if ys1[y] == stamp:
                                u += 1
                if disjoint_only and u:
                    continue
                counts[(k1 * d2 + k2) * du + u] += 1
                accepted += 1
        tally = {}
        for k1 in range(d1):
            for k2 in range(d2):
                for u in range(du):
                    if counts[(k1 * d2 + k2) * du + u]:
                        tally[(k1, k2, u)] = counts[(k1 * d2 + k2) * du + u]
        return tally, attempts
    finally:
        free(seen); free(ys1); free(ys2); free(counts)


cdef inline int _popcount(uint64_t v) nogil:
    return __builtin_popcountll(v)


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef uint32_t* _ymask_table(long d_y, long d_z) except NULL:
    cdef long size = 1 << (d_y * d_z)
    cdef uint32_t* table = <uint32_t*>calloc(size, sizeof(uint32_t))
    cdef uint64_t block = (1 << d_z) - 1
    cdef long mask, y
    cdef uint32_t ym
    if table == NULL:
        raise MemoryError()
    for mask in range(size):
        ym = 0
        for y in range(d_y):
            if (mask >> (y * d_z)) & block:
                ym |= 1 << y
        table[mask] = ym
    return table


cdef inline uint64_t _next_combination(uint64_t c) nogil:
    # Gosper's hack: next integer with the same popcount.
    cdef uint64_t t = c | (c - 1)
    return (t + 1) | (((~t & (t + 1)) - 1) >> (__builtin_ctzll(c) + 1))


def exhaustive_m2(long d_y, long d_z, long n):
    cdef long bits = d_y * d_z
    cdef uint64_t limit = (<uint64_t>1) << bits
    cdef uint32_t* ymask = _ymask_table(d_y, d_z)
    cdef long dk = d_y + 1
    cdef uint64_t* counts = <uint64_t*>calloc((n + 1) * dk * dk * dk, sizeof(uint64_t))
    cdef uint64_t full, g1
    cdef uint32_t y1, y2
    cdef long a, b, c, e
    if counts == NULL:
        free(ymask)
        raise MemoryError()
    try:
        with nogil:
            full = ((<uint64_t>1) << n) - 1
            while full < limit:
                g1 = full
                while True:
                    y1 = ymask[g1]
                    y2 = ymask[full ^ g1]
                    counts[((_popcount(g1) * dk + _popcount(y1)) * dk + _popcount(y2)) * dk
                           + _popcount(y1 & y2)] += 1
                    if g1 == 0:
                        break
                    g1 = (g1 - 1) & full
                if full == 0:
                    break
                full = _next_combination(full)
        tally = {}
        for a in range(n + 1):
            for b in range(dk):
                for c in range(dk):
                    for e in range(dk):
                        if counts[((a * dk + b) * dk + c) * dk + e]:
                            tally[(a, b, c, e)] = counts[((a * dk + b) * dk + c) * dk + e]
        return tally
    finally:
        free(ymask); free(counts)


def exhaustive_m1(long d_y, long d_z, long n):
    cdef long bits = d_y * d_z
    cdef uint64_t limit = (<uint64_t>1) << bits
    cdef uint32_t* ymask = _ymask_table(d_y, d_z)
    cdef long dk = d_y + 1
    cdef uint64_t block = (1 << d_z) - 1
    cdef uint64_t* expand = <uint64_t*>calloc(1 << d_y, sizeof(uint64_t))
    cdef uint64_t* counts = <uint64_t*>calloc((n + 1) * dk * dk, sizeof(uint64_t))
    cdef uint64_t full, m
    cdef uint32_t occ, s
    cdef long k, k1, a, b, c, y, t
    if counts == NULL or expand == NULL:
        free(ymask); free(expand); free(counts)
        raise MemoryError()
    try:
        for t in range(1 << d_y):
            m = 0
            for y in range(d_y):
                if (t >> y) & 1:
                    m |= block << (y * d_z)
            expand[t] = m
        with nogil:
            full = ((<uint64_t>1) << n) - 1
            while full < limit:
                occ = ymask[full]
                k = _popcount(occ)
                s = occ
                while True:
                    k1 = _popcount(s)
                    counts[(_popcount(full & expand[s]) * dk + k1) * dk + (k - k1)] += 1
                    if s == 0:
                        break
                    s = (s - 1) & occ
                if full == 0:
                    break
                full = _next_combination(full)
        tally = {}
        for a in range(n + 1):
            for b in range(dk):
                for c in range(dk):
                    if counts[(a * dk + b) * dk + c]:
                        tally[(a, b, c)] = counts[(a * dk + b) * dk + c]
        return tally
    finally:
        free(ymask); free(expand); free(counts)

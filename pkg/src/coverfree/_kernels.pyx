# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: lattice transforms, layer Monte Carlo, cover checks.

Bit-for-bit equivalent to coverfree._kernels_py; the transform kernels keep
Python-object arithmetic (exact big ints / Fractions) but strip interpreter
loop overhead, while the Monte Carlo sampler and the cover-free feasibility
search run on C integers.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc
from libc.stdint cimport int64_t, uint64_t

BACKEND = "c"


def zeta_inplace(list vals, int n):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t bit, base, b
    cdef int i
    for i in range(n):
        bit = (<Py_ssize_t>1) << i
        base = 0
        while base < size:
            for b in range(base, base + bit):
                vals[b + bit] = vals[b + bit] + vals[b]
            base += bit << 1


def mobius_inplace(list vals, int n):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t bit, base, b
    cdef int i
    for i in range(n):
        bit = (<Py_ssize_t>1) << i
        base = 0
        while base < size:
            for b in range(base, base + bit):
                vals[b + bit] = vals[b + bit] - vals[b]
            base += bit << 1


def superset_zeta_inplace(list vals, int n):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t bit, base, b
    cdef int i
    for i in range(n):
        bit = (<Py_ssize_t>1) << i
        base = 0
        while base < size:
            for b in range(base, base + bit):
                vals[b] = vals[b] + vals[b + bit]
            base += bit << 1


def superset_mobius_inplace(list vals, int n):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t bit, base, b
    cdef int i
    for i in range(n):
        bit = (<Py_ssize_t>1) << i
        base = 0
        while base < size:
            for b in range(base, base + bit):
                vals[b] = vals[b] - vals[b + bit]
            base += bit << 1


def dot(list a, list b):
    cdef Py_ssize_t i, m = len(a)
    total = 0
    for i in range(m):
        x = a[i]
        y = b[i]
        if x and y:
            total = total + x * y
    return total


# -- Monte Carlo layer sampling -------------------------------------------------

cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


def mc_layer_hits(int n, int ell, int r, long samples, object seed):
    """Same stream as the pure-Python sampler (xoshiro256** via splitmix64)."""
    if n > 64:
        from . import _kernels_py
        return _kernels_py.mc_layer_hits(n, ell, r, samples, seed)
    cdef uint64_t state = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t GOLDEN = <uint64_t>0x9E3779B97F4A7C15
    cdef uint64_t s[4]
    cdef uint64_t z
    cdef int idx
    for idx in range(4):
        state = state + GOLDEN
        z = state
        z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
        s[idx] = z ^ (z >> 31)
    cdef uint64_t s0 = s[0], s1 = s[1], s2 = s[2], s3 = s[3]
    cdef uint64_t target, union_, mask, res, threshold, x, t, bound64
    cdef int perm[64]
    cdef int i, j, slot, bound, tmp
    cdef long hits = 0, smp
    for i in range(n):
        perm[i] = i
    for smp in range(samples):
        target = 0
        union_ = 0
        for slot in range(r + 1):
            mask = 0
            for i in range(ell):
                bound = n - i
                if bound > 1:
                    bound64 = <uint64_t>bound
                    threshold = (<uint64_t>0 - bound64) % bound64
                    while True:
                        x = s1 * <uint64_t>5
                        res = _rotl(x, 7) * <uint64_t>9
                        t = s1 << 17
                        s2 ^= s0
                        s3 ^= s1
                        s1 ^= s2
                        s0 ^= s3
                        s2 ^= t
                        s3 = _rotl(s3, 45)
                        if res >= threshold:
                            break
                    j = i + <int>(res % bound64)
                else:
                    j = i
                tmp = perm[i]
                perm[i] = perm[j]
                perm[j] = tmp
                mask |= (<uint64_t>1) << perm[i]
            if slot == 0:
                target = mask
            else:
                union_ |= mask
        if (target & ~union_) == 0:
            hits += 1
    return hits


# -- cover-free feasibility -------------------------------------------------------

cdef inline int _popcount64(uint64_t x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef int _gather_relevant(object members, uint64_t target, Py_ssize_t exclude,
                          uint64_t* rel, Py_ssize_t cap):
    """Deduped relevant masks sorted by (popcount desc, mask asc); -1 on overflow."""
    cdef Py_ssize_t count = 0, i, j, k
    cdef uint64_t m, key
    cdef uint64_t* keys = <uint64_t*>PyMem_Malloc(cap * sizeof(uint64_t))
    if keys == NULL:
        raise MemoryError()
    i = 0
    for obj in members:
        if i == exclude:
            i += 1
            continue
        i += 1
        m = (<uint64_t>obj) & target
        if m == 0:
            continue
        keys[count] = ((<uint64_t>(64 - _popcount64(m))) << 56) | m
        count += 1
    # insertion sort is fine: counts are desk scale in the hot search path
    for j in range(1, count):
        key = keys[j]
        k = j
        while k > 0 and keys[k - 1] > key:
            keys[k] = keys[k - 1]
            k -= 1
        keys[k] = key
    cdef Py_ssize_t out = 0
    for j in range(count):
        m = keys[j] & ((<uint64_t>1 << 56) - 1)
        if out == 0 or rel[out - 1] != m:
            rel[out] = m
            out += 1
    PyMem_Free(keys)
    return <int>out


cdef bint _cover_dfs(uint64_t* rel, uint64_t* suffix, Py_ssize_t count,
                     uint64_t target, Py_ssize_t i, uint64_t acc, int budget) nogil:
    cdef Py_ssize_t j
    cdef uint64_t new
    if acc == target:
        return True
    if budget == 0 or i == count:
        return False
    for j in range(i, count):
        if (acc | suffix[j]) != target:
            return False
        new = acc | rel[j]
        if new == acc:
            continue
        if _cover_dfs(rel, suffix, count, target, j + 1, new, budget - 1):
            return True
    return False


cdef bint _covers_any(object members, Py_ssize_t nmembers, uint64_t target,
                      int k, Py_ssize_t exclude):
    if k <= 0:
        return False
    if target == 0:
        return nmembers - (1 if exclude >= 0 else 0) > 0
    cdef uint64_t* rel = <uint64_t*>PyMem_Malloc((nmembers + 1) * sizeof(uint64_t))
    cdef uint64_t* suffix = <uint64_t*>PyMem_Malloc((nmembers + 2) * sizeof(uint64_t))
    if rel == NULL or suffix == NULL:
        if rel != NULL:
            PyMem_Free(rel)
        if suffix != NULL:
            PyMem_Free(suffix)
        raise MemoryError()
    cdef int count
    cdef Py_ssize_t j
    cdef bint found = False
    try:
        count = _gather_relevant(members, target, exclude, rel, nmembers + 1)
        if count > 0:
            suffix[count] = 0
            for j in range(count - 1, -1, -1):
                suffix[j] = suffix[j + 1] | rel[j]
            if suffix[0] == target:
                found = _cover_dfs(rel, suffix, count, target, 0, 0, k)
    finally:
        PyMem_Free(rel)
        PyMem_Free(suffix)
    return found


def covers_any(members, target, int k):
    """True iff target is a submask of the union of 1..k distinct members."""
    cdef Py_ssize_t nm = len(members)
    if _mask_too_wide(members, target):
        from . import _kernels_py
        return _kernels_py.covers_any(members, target, k)
    if k <= 0:
        return False
    if target == 0:
        return nm > 0
    return _covers_any(members, nm, <uint64_t>(int(target)), k, -1)


cdef bint _mask_too_wide(members, target):
    cdef object m
    if int(target).bit_length() > 56:
        return True
    for m in members:
        if int(m).bit_length() > 56:
            return True
    return False


def cover_free_insert_ok(members, cand, int r):
    """Whether adding cand to an r-cover-free family keeps it r-cover-free."""
    if _mask_too_wide(members, cand):
        from . import _kernels_py
        return _kernels_py.cover_free_insert_ok(members, cand, r)
    cdef Py_ssize_t nm = len(members)
    cdef uint64_t c = <uint64_t>(int(cand))
    cdef uint64_t a0, residue
    cdef Py_ssize_t idx
    if _covers_any(members, nm, c, r, -1):
        return False
    idx = 0
    for obj in members:
        a0 = <uint64_t>obj
        residue = a0 & ~c
        if residue == 0:
            return False
        if r > 1 and _covers_any(members, nm, residue, r - 1, idx):
            return False
        idx += 1
    return True


def is_cover_free(members, int r):
    """Full check of the r-cover-free property for a distinct-mask family."""
    members = list(members)
    cdef Py_ssize_t i
    for i in range(1, len(members)):
        if not cover_free_insert_ok(members[:i], members[i], r):
            return False
    return True

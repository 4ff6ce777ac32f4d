# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse elimination kernels; same contract as ``_pykernels``."""

from libc.stdint cimport int64_t
from libcpp.pair cimport pair
from libcpp.queue cimport priority_queue
from libcpp.vector cimport vector

ctypedef pair[int, int64_t] entry
ctypedef vector[entry] srow


cdef int64_t _modinv(int64_t a, int64_t m) except -1:
    cdef int64_t r0 = m, r1 = a % m, s0 = 0, s1 = 1, q, tmp
    while r1:
        q = r0 // r1
        tmp = r0 - q * r1
        r0 = r1
        r1 = tmp
        tmp = s0 - q * s1
        s0 = s1
        s1 = tmp
    if r0 != 1:
        raise ValueError("pivot is not a unit")
    s0 %= m
    if s0 < 0:
        s0 += m
    return s0


cdef Py_ssize_t _find(const srow& row, int c) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = <Py_ssize_t> row.size(), mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if row[mid].first < c:
            lo = mid + 1
        else:
            hi = mid
    if lo < <Py_ssize_t> row.size() and row[lo].first == c:
        return lo
    return -1


cdef void _axpy(srow& dst, const srow& src, int64_t f, int64_t D, srow& out,
                vector[vector[int]]& cols, int rid) noexcept nogil:
    """dst -= f * src (mod D), registering newly filled columns."""
    cdef size_t i = 0, j = 0, nd = dst.size(), ns = src.size()
    cdef int64_t v
    cdef int c
    out.clear()
    while i < nd or j < ns:
        if j >= ns or (i < nd and dst[i].first < src[j].first):
            out.push_back(dst[i])
            i += 1
        elif i >= nd or src[j].first < dst[i].first:
            c = src[j].first
            v = (D - (f * src[j].second) % D) % D
            if v:
                out.push_back(entry(c, v))
                cols[c].push_back(rid)
            j += 1
        else:
            v = (dst[i].second - (f * src[j].second) % D) % D
            if v < 0:
                v += D
            if v:
                out.push_back(entry(dst[i].first, v))
            i += 1
            j += 1
    dst.swap(out)


def sparse_snf_mod(int ncols, indptr, indices, data, long long modulus, long long prime):
    """Smith form of a CSR integer matrix over ``Z / prime^e``; see ``_pykernels``."""
    cdef int64_t D = modulus, p = prime, q = modulus, pt, a, f, uinv
    cdef int e = 0
    while q % p == 0:
        q //= p
        e += 1
    if q != 1 or e == 0:
        raise ValueError(f"modulus {modulus} is not a positive power of {prime}")
    if D >= (<int64_t> 1) << 31:
        raise OverflowError("modulus too large for the compiled kernel")

    cdef int nrows = len(indptr) - 1
    cdef vector[srow] rows = vector[srow](nrows)
    cdef vector[vector[int]] cols = vector[vector[int]](ncols)
    cdef vector[int] ver = vector[int](nrows, 0)
    cdef vector[char] alive = vector[char](nrows, 0)
    cdef vector[int] stamp = vector[int](nrows, -1)
    cdef srow scratch
    cdef int r, r2, c, k, t, best_c, v, cur = 0
    cdef size_t best_n, idx
    cdef Py_ssize_t pos
    cdef int64_t val
    cdef dict acc

    for r in range(nrows):
        acc = {}
        for k in range(indptr[r], indptr[r + 1]):
            c = indices[k]
            acc[c] = (acc.get(c, 0) + data[k]) % modulus
        for c in sorted(acc):
            val = acc[c]
            if val:
                rows[r].push_back(entry(c, val))
                cols[c].push_back(r)
        alive[r] = rows[r].size() > 0

    counts = [0] * e
    cdef priority_queue[pair[int64_t, int]] heap
    cdef pair[int64_t, int] top
    cdef int64_t span = <int64_t> nrows + 1
    cdef vector[int] targets

    for t in range(e):
        pt = 1
        for k in range(t):
            pt *= p
        while not heap.empty():
            heap.pop()
        for r in range(nrows):
            if alive[r]:
                heap.push(pair[int64_t, int](-(<int64_t> rows[r].size() * span + r), ver[r]))
        while not heap.empty():
            top = heap.top()
            heap.pop()
            r = <int> ((-top.first) % span)
            if not alive[r] or top.second != ver[r]:
                continue
            best_c = -1
            best_n = 0
            for idx in range(rows[r].size()):
                a = rows[r][idx].second
                if a % pt == 0 and (a // pt) % p != 0:
                    c = rows[r][idx].first
                    if best_c < 0 or cols[c].size() < best_n:
                        best_c = c
                        best_n = cols[c].size()
            if best_c < 0:
                continue
            pos = _find(rows[r], best_c)
            uinv = _modinv(rows[r][pos].second // pt, D)
            cur += 1
            targets.clear()
            for idx in range(cols[best_c].size()):
                r2 = cols[best_c][idx]
                if r2 != r and alive[r2] and stamp[r2] != cur:
                    stamp[r2] = cur
                    targets.push_back(r2)
            for idx in range(targets.size()):
                r2 = targets[idx]
                pos = _find(rows[r2], best_c)
                if pos < 0:
                    continue
                f = ((rows[r2][pos].second // pt) * uinv) % D
                _axpy(rows[r2], rows[r], f, D, scratch, cols, r2)
                ver[r2] += 1
                if rows[r2].size():
                    heap.push(pair[int64_t, int](-(<int64_t> rows[r2].size() * span + r2), ver[r2]))
                else:
                    alive[r2] = 0
            cols[best_c].clear()
            rows[r].clear()
            alive[r] = 0
            counts[t] += 1
    return counts, ncols - sum(counts)

"""Pure-Python sparse elimination kernels (fallback for ``_ckernels``)."""
from __future__ import annotations

import heapq
from typing import Sequence


def _prime_exponent(modulus: int, prime: int) -> int:
    e, q = 0, modulus
    while q % prime == 0:
        q //= prime
        e += 1
    if q != 1 or e == 0:
        raise ValueError(f"modulus {modulus} is not a positive power of {prime}")
    return e


def sparse_snf_mod(ncols: int, indptr: Sequence[int], indices: Sequence[int],
                   data: Sequence[int], modulus: int, prime: int) -> tuple[list[int], int]:
    """Smith form of a CSR integer matrix over ``Z / prime^e``.

    The matrix rows generate a submodule of ``(Z/modulus)^ncols``.  Returns
    ``(counts, free)`` where ``counts[t]`` is the number of diagonal entries
    equal to ``prime^t`` and ``free`` the number of columns left without a
    pivot; the quotient is ``prod Z/prime^t ^ counts[t] x (Z/modulus)^free``.
    """
    D, p = modulus, prime
    e = _prime_exponent(D, p)
    nrows = len(indptr) - 1
    rows: list[dict[int, int]] = []
    cols: list[set[int]] = [set() for _ in range(ncols)]
    for r in range(nrows):
        row: dict[int, int] = {}
        for k in range(indptr[r], indptr[r + 1]):
            c = indices[k]
            row[c] = (row.get(c, 0) + data[k]) % D
        row = {c: v for c, v in row.items() if v}
        for c in row:
            cols[c].add(r)
        rows.append(row)
    alive = {r for r in range(nrows) if rows[r]}
    ver = [0] * nrows
    counts = [0] * e

    for t in range(e):
        pt = p ** t
        heap = [(len(rows[r]), r, ver[r]) for r in alive]
        heapq.heapify(heap)
        while heap:
            _, r, v = heapq.heappop(heap)
            if v != ver[r] or r not in alive:
                continue
            row = rows[r]
            best = None
            for c, a in row.items():
                if a % pt == 0 and (a // pt) % p:
                    key = (len(cols[c]), c)
                    if best is None or key < best:
                        best = key
            if best is None:
                continue
            c = best[1]
            uinv = pow(row[c] // pt, -1, D)
            for r2 in list(cols[c]):
                if r2 == r:
                    continue
                row2 = rows[r2]
                f = (row2[c] // pt) * uinv % D
                for k, ak in row.items():
                    nv = (row2.get(k, 0) - f * ak) % D
                    if nv:
                        if k not in row2:
                            cols[k].add(r2)
                        row2[k] = nv
                    elif k in row2:
                        del row2[k]
                        cols[k].discard(r2)
                ver[r2] += 1
                if row2:
                    heapq.heappush(heap, (len(row2), r2, ver[r2]))
                else:
                    alive.discard(r2)
            for k in row:
                cols[k].discard(r)
            rows[r] = {}
            alive.discard(r)
            counts[t] += 1
    return counts, ncols - sum(counts)

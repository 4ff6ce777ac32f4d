"""Exact integer linear algebra.

Everything here works with Python integers, so there is no overflow and no
floating point.  Matrices are plain lists of rows and the row convention is
used throughout: a matrix ``M`` with ``c`` columns presents the abelian group
``Z^c / rowspan(M)``.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Sequence

from .errors import MembershipError

IntMatrix = list[list[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _find_pivot(row: Sequence[int], start: int = 0) -> int:
    for c in range(start, len(row)):
        if row[c]:
            return c
    return -1


class Lattice:
    """Sublattice of ``Z^dim`` kept in row echelon form.

    Vectors are inserted one at a time (column-at-a-time gcd elimination),
    so arbitrarily many generators can be streamed through without ever
    storing more than ``dim`` basis rows.

    If ``modulus`` is given, the lattice is initialised with ``modulus * Z^dim``
    and all entries are kept reduced modulo it.  That is only meaningful
    when the caller knows ``modulus * Z^dim`` lies inside the lattice being
    described, e.g. because the quotient is known to have exponent dividing
    ``modulus``.
    """

    __slots__ = ("dim", "modulus", "_rows")

    def __init__(self, dim: int, modulus: int | None = None):
        self.dim = dim
        self.modulus = modulus
        self._rows: dict[int, list[int]] = {}
        if modulus is not None:
            if modulus < 1:
                raise ValueError("modulus must be positive")
            for c in range(dim):
                row = [0] * dim
                row[c] = modulus
                self._rows[c] = row

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], dim: int,
                  modulus: int | None = None) -> "Lattice":
        lat = cls(dim, modulus)
        lat.add_many(rows)
        return lat

    def copy(self) -> "Lattice":
        other = Lattice.__new__(Lattice)
        other.dim = self.dim
        other.modulus = self.modulus
        other._rows = {c: r.copy() for c, r in self._rows.items()}
        return other

    def add(self, vec: Sequence[int]) -> bool:
        """Insert ``vec``; return True if the lattice grew."""
        if len(vec) != self.dim:
            raise ValueError(f"expected vector of length {self.dim}, got {len(vec)}")
        mod = self.modulus
        v = [x % mod for x in vec] if mod else list(vec)
        rows = self._rows
        changed = False
        c = _find_pivot(v)
        while c >= 0:
            a = v[c]
            r = rows.get(c)
            if r is None:
                if a < 0:
                    v = [-x for x in v]
                rows[c] = v
                return True
            b = r[c]
            if a % b == 0:
                q = a // b
                for k in range(c, self.dim):
                    if r[k]:
                        v[k] -= q * r[k]
            else:
                g, x, y = xgcd(b, a)
                bg, ag = b // g, a // g
                new_r = r[:c] + [x * r[k] + y * v[k] for k in range(c, self.dim)]
                v = v[:c] + [bg * v[k] - ag * r[k] for k in range(c, self.dim)]
                if mod:
                    new_r = [e % mod for e in new_r]
                    if new_r[c] == 0:
                        new_r[c] = mod
                rows[c] = new_r
                changed = True
            if mod:
                v = [e % mod for e in v]
            c = _find_pivot(v, c + 1)
        return changed

    def add_many(self, vecs: Iterable[Sequence[int]]) -> bool:
        changed = False
        for v in vecs:
            changed |= self.add(v)
        return changed

    def __contains__(self, vec: Sequence[int]) -> bool:
        mod = self.modulus
        v = [x % mod for x in vec] if mod else list(vec)
        c = _find_pivot(v)
        while c >= 0:
            r = self._rows.get(c)
            if r is None or v[c] % r[c]:
                return False
            q = v[c] // r[c]
            for k in range(c, self.dim):
                if r[k]:
                    v[k] -= q * r[k]
            if mod:
                v = [e % mod for e in v]
            c = _find_pivot(v, c + 1)
        return True

    def coordinates(self, vec: Sequence[int]) -> list[int]:
        """Coefficients of ``vec`` with respect to :meth:`basis`.

        Only defined for lattices without a modulus.
        """
        if self.modulus is not None:
            raise ValueError("coordinates are not defined for modular lattices")
        basis = self.basis()
        pivots = [_find_pivot(r) for r in basis]
        v = list(vec)
        coeffs = []
        for r, c in zip(basis, pivots):
            q, rem = divmod(v[c], r[c])
            if rem:
                raise MembershipError(f"vector {list(vec)} is not in the lattice")
            coeffs.append(q)
            if q:
                for k in range(c, self.dim):
                    v[k] -= q * r[k]
        if any(v):
            raise MembershipError(f"vector {list(vec)} is not in the lattice")
        return coeffs

    @property
    def rank(self) -> int:
        return len(self._rows)

    def is_full_rank(self) -> bool:
        return len(self._rows) == self.dim

    def index(self) -> int:
        """``[Z^dim : L]`` for a full-rank lattice."""
        if not self.is_full_rank():
            raise ValueError("lattice is not of full rank; index is infinite")
        return prod(self._rows[c][c] for c in range(self.dim))

    def basis(self) -> IntMatrix:
        """Reduced Hermite normal form, rows ordered by pivot column."""
        cols = sorted(self._rows)
        rows = [self._rows[c].copy() for c in cols]
        for i, c in enumerate(cols):
            piv = rows[i][c]
            for k in range(i):
                q = rows[k][c] // piv
                if q:
                    rk, ri = rows[k], rows[i]
                    for t in range(c, self.dim):
                        rk[t] -= q * ri[t]
        return rows

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.dim == other.dim and self.basis() == other.basis()

    def __repr__(self) -> str:
        return f"Lattice(dim={self.dim}, rank={self.rank}, modulus={self.modulus})"


def hermite_normal_form(rows: Iterable[Sequence[int]], ncols: int) -> IntMatrix:
    return Lattice.from_rows(rows, ncols).basis()


# ---------------------------------------------------------------------------
# Smith normal form


def _identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_form(M: Sequence[Sequence[int]], ncols: int | None = None,
               transforms: bool = False):
    """Diagonalise ``M`` by unimodular row and column operations.

    Returns the diagonal ``d_1 | d_2 | ...`` (nonnegative, zeros at the end)
    and, if ``transforms`` is set, unimodular ``U`` and ``V`` with
    ``U * M * V == diag``.  Pivots are chosen as the entry of smallest
    nonzero absolute value, ties broken by lowest (row, column) index.
    """
    A = [list(r) for r in M]
    nr = len(A)
    nc = ncols if ncols is not None else (len(A[0]) if A else 0)
    U = _identity(nr) if transforms else None
    V = _identity(nc) if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def row_axpy(dst, src, q):  # row_dst -= q * row_src
        rd, rs = A[dst], A[src]
        for k in range(nc):
            if rs[k]:
                rd[k] -= q * rs[k]
        if U is not None:
            ud, us = U[dst], U[src]
            for k in range(nr):
                if us[k]:
                    ud[k] -= q * us[k]

    def col_axpy(dst, src, q):  # col_dst -= q * col_src
        for r in A:
            if r[src]:
                r[dst] -= q * r[src]
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] -= q * r[src]

    diag = []
    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            row = A[i]
            for j in range(t, nc):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if A[i][t]:
                    row_axpy(i, t, A[i][t] // piv)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if A[t][j]:
                    col_axpy(j, t, A[t][j] // piv)
                    if A[t][j]:
                        dirty = True
            if dirty:
                # a smaller remainder exists in row t or column t
                best = None
                for i in range(t, nr):
                    a = A[i][t]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, t)
                for j in range(t, nc):
                    a = A[t][j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_axpy(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    diag.extend([0] * (min(nr, nc) - len(diag)))
    if transforms:
        return diag, U, V
    return diag


@dataclass(frozen=True)
class SmithInvariants:
    """Invariant factors of a finitely generated abelian group."""

    torsion: tuple[int, ...]
    free_rank: int = 0

    @property
    def order(self) -> int | None:
        return prod(self.torsion) if self.free_rank == 0 else None

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0


def smith_invariants(M: Sequence[Sequence[int]], ncols: int | None = None) -> SmithInvariants:
    """Invariant factors of ``Z^ncols / rowspan(M)``; unit factors omitted."""
    nc = ncols if ncols is not None else (len(M[0]) if M else 0)
    lat = Lattice.from_rows(M, nc)
    basis = lat.basis()
    diag = smith_form(basis, nc) if basis else []
    torsion = tuple(sorted(d for d in diag if d > 1))
    return SmithInvariants(torsion, nc - lat.rank)


def kernel_lattice(M: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Hermite basis of ``{v : v * M == 0}`` (left kernel over the integers)."""
    nr = len(M)
    nc = ncols if ncols is not None else (len(M[0]) if M else 0)
    lat = Lattice(nc + nr)
    for i, row in enumerate(M):
        aug = list(row) + [0] * nr
        aug[nc + i] = 1
        lat.add(aug)
    kern = [r[nc:] for r in lat.basis() if _find_pivot(r) >= nc]
    return hermite_normal_form(kern, nr) if kern else []


def preimage_lattice(images: Sequence[Sequence[int]], target: Sequence[Sequence[int]],
                     ncols: int | None = None, modulus: int | None = None) -> IntMatrix:
    """Coefficient vectors ``c`` with ``c * images`` in ``rowspan(target)``.

    ``images`` holds the images of the standard basis under a linear map, so
    the result is the preimage of a sublattice under that map.

    ``modulus`` may be passed when ``modulus * Z^ncols`` lies in the target
    span; elimination then runs modulo it and the result is a full-rank
    lattice containing ``modulus * Z^k``.
    """
    k = len(images)
    if modulus is None:
        stacked = [list(r) for r in images] + [[-x for x in r] for r in target]
        kern = kernel_lattice(stacked, ncols)
        proj = [r[:k] for r in kern]
        if not proj:
            return []
        return hermite_normal_form(proj, k)
    nc = ncols if ncols is not None else (len(images[0]) if images else 0)
    lat = Lattice(nc + k, modulus)
    for r in target:
        lat.add(list(r) + [0] * k)
    for i, r in enumerate(images):
        aug = list(r) + [0] * k
        aug[nc + i] = 1
        lat.add(aug)
    proj = [r[nc:] for r in lat.basis() if _find_pivot(r) >= nc]
    return hermite_normal_form(proj, k)


def quotient_invariants(ambient_basis: Sequence[Sequence[int]],
                        sub_generators: Sequence[Sequence[int]],
                        ncols: int | None = None) -> SmithInvariants:
    """Invariants of ``span(ambient_basis) / span(sub_generators)``.

    Raises :class:`MembershipError` if a generator lies outside the ambient
    lattice.
    """
    nc = ncols
    if nc is None:
        for rows in (ambient_basis, sub_generators):
            if rows:
                nc = len(rows[0])
                break
        else:
            nc = 0
    amb = Lattice.from_rows(ambient_basis, nc)
    coords = [amb.coordinates(s) for s in sub_generators]
    return smith_invariants(coords, amb.rank)


@dataclass(frozen=True)
class AbelianPresentation:
    """``Z^generator_count`` modulo the row span of ``relations``."""

    generator_count: int
    relations: tuple[tuple[int, ...], ...] = field(default=())

    @cached_property
    def invariants(self) -> SmithInvariants:
        return smith_invariants([list(r) for r in self.relations], self.generator_count)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.invariants.torsion

    @property
    def free_rank(self) -> int:
        return self.invariants.free_rank

    @property
    def order(self) -> int | None:
        return self.invariants.order

    @property
    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        return self.invariant_factors[-1] if self.invariant_factors else 1


def sparse_cokernel_invariants(rows: Iterable[dict[int, int]], ncols: int) -> SmithInvariants:
    """Invariants of ``Z^ncols`` modulo sparse integer rows (``{column: value}``).

    Eliminates on unit pivots first (no division, exact over the integers),
    then finishes the leftover block with a dense Smith form.
    """
    live: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for rid, r in enumerate(rows):
        r = {c: v for c, v in r.items() if v}
        if r:
            live[rid] = r
            for c in r:
                cols.setdefault(c, set()).add(rid)
    ver = dict.fromkeys(live, 0)
    heap = [(len(r), rid, 0) for rid, r in live.items()]
    heapq.heapify(heap)
    pivots = 0
    while heap:
        _, rid, v = heapq.heappop(heap)
        row = live.get(rid)
        if row is None or ver[rid] != v:
            continue
        best = None
        for c, a in row.items():
            if a in (1, -1):
                key = (len(cols[c]), c)
                if best is None or key < best:
                    best = key
        if best is None:
            continue
        c = best[1]
        sign = row[c]
        for r2 in list(cols[c]):
            if r2 == rid:
                continue
            row2 = live[r2]
            f = row2[c] * sign
            for k, a in row.items():
                nv = row2.get(k, 0) - f * a
                if nv:
                    if k not in row2:
                        cols.setdefault(k, set()).add(r2)
                    row2[k] = nv
                elif k in row2:
                    del row2[k]
                    cols[k].discard(r2)
            ver[r2] += 1
            if row2:
                heapq.heappush(heap, (len(row2), r2, ver[r2]))
            else:
                del live[r2]
        for k in row:
            cols[k].discard(rid)
        del live[rid]
        pivots += 1
    rest_cols = sorted({c for r in live.values() for c in r})
    where = {c: i for i, c in enumerate(rest_cols)}
    dense = []
    for r in live.values():
        d = [0] * len(rest_cols)
        for c, a in r.items():
            d[where[c]] = a
        dense.append(d)
    inner = smith_invariants(dense, len(rest_cols))
    untouched = ncols - pivots - len(rest_cols)
    return SmithInvariants(inner.torsion, inner.free_rank + untouched)

"""Brute-force ``H_2`` and ``B_0`` of small finite groups from the normalized bar complex.

Chains are indexed by non-identity elements only.  ``[a|b]`` with ``a`` or
``b`` the identity is zero.

Two routes are provided.

* ``kernel``: integer kernel of ``d2`` modulo the image of every ``d3``
  column (and the commuting-pair cycles for ``B_0``).  Dense; tiny ``N`` only.
* ``exact``: torsion of ``C2`` modulo every ``d3`` column, over the integers,
  by sparse unit-pivot elimination.
* ``sparse`` (default): the cokernel ``C2 / (im d3 + Z)`` is
  ``H ⊕ Z^(N-1)`` because ``C2 / Z2`` embeds in the free module ``C1``.  Its
  ``p``-primary torsion is read off from a sparse elimination modulo
  ``p^(2a)`` for each ``p^a`` exactly dividing ``N``; the free part shows up
  as exactly ``N - 1`` copies of the modulus, which is checked.  Only the
  ``d3`` columns ``[a|b|x]`` with ``x`` in a generating set are used: the
  ``d4`` identity
  ``d[a|b|cx] = d[b|c|x] - d[ab|c|x] + d[a|bc|x] + d[a|b|c]``
  shows they span the whole image.
"""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import ModelInvalid, TooLarge
from .kernels import CSRBuilder, invariants_from_counts, sparse_snf_mod
from .tables import FiniteGroupTable, configured_cap
from .zlinalg import Lattice, kernel_lattice, quotient_invariants, sparse_cokernel_invariants

LARGE_THRESHOLD = 128
EXACT_LIMIT = 81
KERNEL_LIMIT = 12


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def combine_primary(parts: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors (ascending, divisibility chain) from primary components."""
    cols = [sorted(part, reverse=True) for part in parts if part]
    width = max((len(c) for c in cols), default=0)
    out = []
    for i in range(width):
        v = 1
        for c in cols:
            if i < len(c):
                v *= c[i]
        out.append(v)
    return sorted(out)


class BarComplex:
    """Index bookkeeping for normalized chains of a :class:`FiniteGroupTable`."""

    def __init__(self, T: FiniteGroupTable, cap: int | None = None, allow_large: bool = False):
        limit = configured_cap(cap)
        if T.N > limit:
            raise TooLarge(f"group of order {T.N} exceeds the oracle cap {limit}")
        if T.N > LARGE_THRESHOLD:
            if not allow_large:
                raise TooLarge(f"order {T.N} > {LARGE_THRESHOLD} needs allow_large=True")
            warnings.warn(f"bar-complex run at order {T.N}; this can take a long time",
                          RuntimeWarning, stacklevel=2)
        self.T = T
        self.elems = [a for a in range(T.N) if a != T.identity]
        self.pos = {a: i for i, a in enumerate(self.elems)}
        self.m = len(self.elems)

    def c1(self, a: int) -> int | None:
        return self.pos.get(a)

    def c2(self, a: int, b: int) -> int | None:
        ia, ib = self.pos.get(a), self.pos.get(b)
        if ia is None or ib is None:
            return None
        return ia * self.m + ib

    def boundary2_column(self, a: int, b: int) -> dict[int, int]:
        """``d[a|b] = [b] - [ab] + [a]`` in ``C1`` coordinates."""
        out: dict[int, int] = {}
        for x, s in ((b, 1), (self.T.mul(a, b), -1), (a, 1)):
            i = self.c1(x)
            if i is not None:
                out[i] = out.get(i, 0) + s
        return {k: v for k, v in out.items() if v}

    def boundary3_column(self, a: int, b: int, c: int) -> dict[int, int]:
        """``d[a|b|c] = [b|c] - [ab|c] + [a|bc] - [a|b]`` in ``C2`` coordinates."""
        t = self.T
        out: dict[int, int] = {}
        for (x, y), s in (((b, c), 1), ((t.mul(a, b), c), -1), ((a, t.mul(b, c)), 1), ((a, b), -1)):
            i = self.c2(x, y)
            if i is not None:
                out[i] = out.get(i, 0) + s
        return {k: v for k, v in out.items() if v}


def boundary2(T: FiniteGroupTable, cap: int | None = None, allow_large: bool = False) -> list[list[int]]:
    """Dense ``d2`` with one row per basis chain ``[a|b]`` (row-vector convention)."""
    bc = BarComplex(T, cap, allow_large)
    rows = []
    for a in bc.elems:
        for b in bc.elems:
            row = [0] * bc.m
            for k, v in bc.boundary2_column(a, b).items():
                row[k] = v
            rows.append(row)
    return rows


def boundary3(T: FiniteGroupTable, cap: int | None = None, allow_large: bool = False,
              last: Sequence[int] | None = None) -> Iterator[dict[int, int]]:
    """Stream of sparse ``d3`` columns ``[a|b|c]``; ``last`` restricts ``c``."""
    bc = BarComplex(T, cap, allow_large)
    cs = bc.elems if last is None else [c for c in last if c != T.identity]
    for a in bc.elems:
        for b in bc.elems:
            for c in cs:
                col = bc.boundary3_column(a, b, c)
                if col:
                    yield col


def commuting_pair_cycles(T: FiniteGroupTable, cap: int | None = None,
                          allow_large: bool = False) -> list[dict[int, int]]:
    """``z_(a,b) = [a|b] - [b|a]`` for every ordered commuting pair of non-identity elements."""
    bc = BarComplex(T, cap, allow_large)
    out = []
    for a in bc.elems:
        for b in bc.elems:
            if T.commutes(a, b):
                z: dict[int, int] = {}
                if a != b:
                    z = {bc.c2(a, b): 1, bc.c2(b, a): -1}
                out.append(z)
    return out


def is_cycle(T: FiniteGroupTable, chain: dict[int, int]) -> bool:
    bc = BarComplex(T, allow_large=True) if T.N > LARGE_THRESHOLD else BarComplex(T)
    acc: dict[int, int] = {}
    for idx, coef in chain.items():
        a, b = bc.elems[idx // bc.m], bc.elems[idx % bc.m]
        for k, v in bc.boundary2_column(a, b).items():
            acc[k] = acc.get(k, 0) + coef * v
    return not any(acc.values())


@dataclass
class OracleResult:
    invariants: list[int]
    method: str
    order: int
    elapsed_ms: float
    details: dict = field(default_factory=dict)


def _sparse_quotient(T: FiniteGroupTable, bc: BarComplex, extra: list[dict[int, int]],
                     backend: str | None) -> tuple[list[int], dict]:
    gens = T.generating_set()
    rows = CSRBuilder()
    for a in bc.elems:
        for b in bc.elems:
            for x in gens:
                col = bc.boundary3_column(a, b, x)
                if col:
                    rows.add_row(col)
    for z in extra:
        if z:
            rows.add_row(z)
    ncols = bc.m * bc.m
    parts, details = [], {"generators": gens, "rows": rows.nrows, "columns": ncols}
    for p, a in sorted(_factorize(T.N).items()):
        D = p ** (2 * a)
        counts, free = sparse_snf_mod(ncols, rows.indptr, rows.indices, rows.data, D, p, backend=backend)
        if free != bc.m:
            raise ModelInvalid(f"expected {bc.m} free summands modulo {D}, found {free}")
        parts.append(invariants_from_counts(counts, 0, D, p))
    return combine_primary(parts), details


def _exact_quotient(T: FiniteGroupTable, bc: BarComplex, extra: list[dict[int, int]]) -> list[int]:
    if T.N > EXACT_LIMIT:
        raise TooLarge(f"exact route limited to order <= {EXACT_LIMIT}")
    cols = list(boundary3(T, allow_large=True)) + extra
    inv = sparse_cokernel_invariants(cols, bc.m * bc.m)
    if inv.free_rank != bc.m:
        raise ModelInvalid(f"cokernel of d3 has free rank {inv.free_rank}, expected {bc.m}")
    return list(inv.torsion)


def _kernel_quotient(T: FiniteGroupTable, bc: BarComplex, extra: list[dict[int, int]]) -> list[int]:
    if T.N > KERNEL_LIMIT:
        raise TooLarge(f"kernel route limited to order <= {KERNEL_LIMIT}")
    Z = kernel_lattice(boundary2(T), bc.m)
    dim = bc.m * bc.m
    image = Lattice(dim)
    for col in list(boundary3(T)) + [z for z in extra if z]:
        v = [0] * dim
        for k, c in col.items():
            v[k] = c
        image.add(v)
    inv = quotient_invariants(Z, image.basis(), dim)
    if inv.free_rank:
        raise ModelInvalid(f"second homology has free rank {inv.free_rank}")
    return list(inv.torsion)


def schur_multiplier(T: FiniteGroupTable, method: str = "sparse", cap: int | None = None,
                     allow_large: bool = False, backend: str | None = None) -> OracleResult:
    """Invariant factors of ``H_2(G, Z)``."""
    return _run(T, method, cap, allow_large, backend, with_pairs=False)


def b0_oracle(T: FiniteGroupTable, method: str = "sparse", cap: int | None = None,
              allow_large: bool = False, backend: str | None = None) -> OracleResult:
    """Invariant factors of ``H_2(G, Z)`` modulo the classes of commuting-pair cycles."""
    return _run(T, method, cap, allow_large, backend, with_pairs=True)


def _run(T, method, cap, allow_large, backend, with_pairs) -> OracleResult:
    start = time.perf_counter()
    bc = BarComplex(T, cap, allow_large)
    extra: list[dict[int, int]] = []
    if with_pairs:
        # z_(b,a) = -z_(a,b): one of each pair spans the same subgroup
        for a in bc.elems:
            for b in bc.elems:
                if bc.pos[a] < bc.pos[b] and T.commutes(a, b):
                    extra.append({bc.c2(a, b): 1, bc.c2(b, a): -1})
    details: dict = {"commuting_pairs": len(extra)} if with_pairs else {}
    if method == "sparse":
        inv, more = _sparse_quotient(T, bc, extra, backend)
        details.update(more)
    elif method == "exact":
        inv = _exact_quotient(T, bc, extra)
    elif method == "kernel":
        inv = _kernel_quotient(T, bc, extra)
    else:
        raise ValueError(f"unknown oracle method {method!r}")
    return OracleResult(inv, method, T.N, (time.perf_counter() - start) * 1000, details)

"""Finite groups given by multiplication tables, and table-level algorithms."""
from __future__ import annotations

import itertools
import os
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BadParameters, ModelInvalid, TooLarge
from .zlinalg import Lattice

DEFAULT_CAP = 243


def configured_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("MAXCLASS_ORACLE_CAP")
    return int(env) if env else DEFAULT_CAP


class FiniteGroupTable:
    """Group on ``0..N-1`` given by ``table[a][b] = a * b``.

    The identity and inverses are derived.  Construction checks the latin
    square property and associativity (every triple for ``N <= 64``, a seeded
    random sample of triples otherwise).
    """

    def __init__(self, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                 check: bool = True, samples: int = 20000, seed: int = 0):
        self.table = [list(r) for r in table]
        self.N = N = len(self.table)
        if N == 0:
            raise BadParameters("empty multiplication table")
        self.labels = list(labels) if labels is not None else None
        full = list(range(N))
        for r in self.table:
            if len(r) != N or sorted(r) != full:
                raise ModelInvalid("multiplication table is not a latin square")
        for b in range(N):
            if len({r[b] for r in self.table}) != N:
                raise ModelInvalid("multiplication table is not a latin square")
        ident = [a for a in range(N) if self.table[a] == full]
        if not ident:
            raise ModelInvalid("no identity element")
        self.identity = ident[0]
        self.inverse = [0] * N
        for a in range(N):
            self.inverse[a] = self.table[a].index(self.identity)
        if check:
            self.check_associative(samples, seed)

    def check_associative(self, samples: int = 20000, seed: int = 0) -> None:
        t, N = self.table, self.N
        if N <= 64:
            triples: Iterable = itertools.product(range(N), repeat=3)
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(N), rng.randrange(N), rng.randrange(N)) for _ in range(samples))
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise ModelInvalid(f"associativity fails at ({a}, {b}, {c})")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def commutator(self, a: int, b: int) -> int:
        t, inv = self.table, self.inverse
        return t[t[inv[a]][inv[b]]][t[a][b]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def order_statistics(self) -> dict[int, int]:
        return dict(sorted(Counter(self.element_order(a) for a in range(self.N)).items()))

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.N) for b in range(a))

    def commutes(self, a: int, b: int) -> bool:
        return self.table[a][b] == self.table[b][a]

    def generated(self, gens: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``gens``."""
        gens = [g for g in gens]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                row = self.table[x]
                for g in gens:
                    y = row[g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def normal_closure(self, elems: Iterable[int]) -> frozenset[int]:
        t, inv = self.table, self.inverse
        gens = set(elems)
        while True:
            H = self.generated(gens)
            conj = {t[t[inv[g]][h]][g] for h in H for g in range(self.N)}
            if conj <= H:
                return H
            gens |= conj

    def commutator_subgroup(self, A: Iterable[int], B: Iterable[int]) -> frozenset[int]:
        B = list(B)
        return self.generated({self.commutator(a, b) for a in A for b in B})

    def lower_central_series(self) -> list[frozenset[int]]:
        series = [frozenset(range(self.N))]
        while True:
            nxt = self.commutator_subgroup(series[-1], range(self.N))
            if nxt == series[-1]:
                return series
            series.append(nxt)
            if len(nxt) == 1:
                return series

    def nilpotency_class(self) -> int | None:
        series = self.lower_central_series()
        return len(series) - 1 if len(series[-1]) == 1 else None

    def is_maximal_class(self) -> bool:
        if self.N < 4:
            return False
        p = min(q for q in range(2, self.N + 1) if self.N % q == 0)
        n, q = 0, self.N
        while q % p == 0:
            q //= p
            n += 1
        return q == 1 and n >= 2 and self.nilpotency_class() == n - 1

    def center(self) -> frozenset[int]:
        return frozenset(a for a in range(self.N) if all(self.commutes(a, b) for b in range(self.N)))

    def centralizer(self, S: Iterable[int]) -> frozenset[int]:
        S = list(S)
        return frozenset(a for a in range(self.N) if all(self.commutes(a, b) for b in S))

    def is_abelian_subset(self, H: Iterable[int]) -> bool:
        H = list(H)
        return all(self.commutes(a, b) for a in H for b in H)

    def generating_set(self) -> list[int]:
        """Greedy small generating set: repeatedly add the element enlarging the span most."""
        gens: list[int] = []
        H = self.generated(gens)
        while len(H) < self.N:
            best, best_size = None, -1
            for g in range(self.N):
                if g in H:
                    continue
                size = len(self.generated(gens + [g]))
                if size > best_size:
                    best, best_size = g, size
                    if size == self.N:
                        break
            gens.append(best)
            H = self.generated(gens)
        return gens

    def relabel(self, perm: Sequence[int]) -> "FiniteGroupTable":
        """Isomorphic copy where old element ``a`` is called ``perm[a]``."""
        N = self.N
        new = [[0] * N for _ in range(N)]
        for a in range(N):
            for b in range(N):
                new[perm[a]][perm[b]] = perm[self.table[a][b]]
        return FiniteGroupTable(new, check=False)

    def to_json(self) -> dict:
        return {"schema": "maxclass.table/1", "order": self.N, "table": self.table}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroupTable":
        if data.get("schema") != "maxclass.table/1":
            raise BadParameters(f"unsupported table schema {data.get('schema')!r}")
        tab = data["table"]
        if data.get("order", len(tab)) != len(tab):
            raise BadParameters("declared order does not match table size")
        return cls(tab)


# ---------------------------------------------------------------------------
# Builders


def cyclic_group(n: int) -> FiniteGroupTable:
    return FiniteGroupTable([[(a + b) % n for b in range(n)] for a in range(n)])


def direct_product(G: FiniteGroupTable, H: FiniteGroupTable) -> FiniteGroupTable:
    N, M = G.N, H.N
    return FiniteGroupTable([[G.table[a // M][b // M] * M + H.table[a % M][b % M]
                              for b in range(N * M)] for a in range(N * M)], check=False)


@dataclass(frozen=True)
class _Module:
    """``Z^k / L`` with an automorphism ``phi`` given by an integer matrix (column action)."""

    relations: tuple[tuple[int, ...], ...]
    phi: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.phi)

    def hnf(self) -> list[list[int]]:
        lat = Lattice.from_rows(self.relations, self.rank)
        if not lat.is_full_rank():
            raise BadParameters("module relations must have full rank")
        return lat.basis()

    def reduce(self, v: Sequence[int], H: list[list[int]]) -> tuple[int, ...]:
        v = list(v)
        for c, row in enumerate(H):
            q = v[c] // row[c]
            if q:
                for k in range(c, self.rank):
                    v[k] -= q * row[k]
        return tuple(v)

    def act(self, v: Sequence[int]) -> list[int]:
        return [sum(self.phi[i][j] * v[j] for j in range(self.rank)) for i in range(self.rank)]


def cyclic_extension(module: _Module, q: int, z: Sequence[int] | None = None) -> FiniteGroupTable:
    """Group of pairs ``t^i a`` with ``t^q = z`` and ``t^-1 a t = phi(a)``."""
    H = module.hnf()
    k = module.rank
    elems = list(itertools.product(*(range(H[c][c]) for c in range(k))))
    index = {e: i for i, e in enumerate(elems)}
    zero = (0,) * k
    zz = module.reduce(z if z is not None else zero, H)
    if module.reduce(module.act(zz), H) != zz:
        raise BadParameters("t^q must be fixed by the action")
    # phi^j on every element
    powers = [list(elems)]
    for _ in range(1, q):
        powers.append([module.reduce(module.act(v), H) for v in powers[-1]])
    for a in elems:
        if module.reduce(module.act(powers[q - 1][index[a]]), H) != a:
            raise BadParameters("phi^q must be the identity")
    A = len(elems)
    N = q * A
    table = [[0] * N for _ in range(N)]
    for i in range(q):
        for j in range(q):
            r = i + j
            carry = r >= q
            r %= q
            for ia, a in enumerate(elems):
                pa = powers[j][ia]
                for ib, b in enumerate(elems):
                    s = [pa[c] + b[c] + (zz[c] if carry else 0) for c in range(k)]
                    table[i * A + ia][j * A + ib] = r * A + index[module.reduce(s, H)]
    return FiniteGroupTable(table)


def _check_cap(N: int, cap: int | None) -> None:
    c = configured_cap(cap)
    if N > c:
        raise TooLarge(f"group of order {N} exceeds the table cap {c}")


def classical_2group(kind: str, n: int, cap: int | None = None) -> FiniteGroupTable:
    """Dihedral, semidihedral or generalised quaternion group of order ``2^n``."""
    if n < 4:
        raise BadParameters("classical 2-groups of maximal class need n >= 4")
    _check_cap(2 ** n, cap)
    M = 2 ** (n - 1)
    if kind == "dihedral":
        e, z = -1, 0
    elif kind == "semidihedral":
        e, z = 2 ** (n - 2) - 1, 0
    elif kind == "quaternion":
        e, z = -1, 2 ** (n - 2)
    else:
        raise BadParameters(f"unknown classical 2-group kind {kind!r}")
    return cyclic_extension(_Module(((M,),), ((e,),)), 2, (z,))


_THETA_3 = ((1, 0, 0), (1, 1, 0), (0, 1, 1))


def maximal_class_81() -> dict[str, FiniteGroupTable]:
    """The four groups of order 3^4 and class 3, keyed by a descriptive label."""
    shift = ((0, 0, 1), (1, 0, 0), (0, 1, 0))
    ring = ((3, 3, 1), (0, 3, 3), (0, 0, 3))
    return {
        "wreath": cyclic_extension(_Module(((3, 0, 0), (0, 3, 0), (0, 0, 3)), shift), 3),
        "ring-split": cyclic_extension(_Module(ring, _THETA_3), 3),
        "ring-nonsplit": cyclic_extension(_Module(ring, _THETA_3), 3, (0, 0, 1)),
        "c9xc3": cyclic_extension(_Module(((3, 0, -1), (0, 3, 0), (0, 0, 3)), _THETA_3), 3),
    }


def to_multiplication_table(G, cap: int | None = None) -> FiniteGroupTable:
    """Table of a :class:`~maxclass.group.MaxClassGroup` in lexicographic normal-form order."""
    N = G.order
    _check_cap(N, cap)
    elems = list(G.elements())
    table = [[G.index_of(G.multiply(g, h)) for h in elems] for g in elems]
    labels = [",".join(map(str, g.digits())) for g in elems]
    return FiniteGroupTable(table, labels=labels)

"""p-groups of maximal class ``G = <s> x| P1`` built from a commutator map.

``P1`` is ``O / kappa^(n-1)`` with the twisted product
``x o y = x + y + h * B(x, y)`` where ``h`` is an inverse of 2 and
``B(x, y) = kappa^(m-1) * alpha(x mod kappa^(m-1), y mod kappa^(m-1))``.
``s`` has order ``p`` and acts on ``P1`` by multiplication with ``theta``.

Elements are pairs ``(i, x)`` standing for ``s^i * x``; the product is
``(i, x)(j, y) = (i + j, theta^j x o y)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .cyclotomic import (AlphaMap, CycElement, check_parameters, cyc_theta_pow,
                         cyc_valuation, normalize, relation_rows, ring_exponent)
from .errors import MembershipError, ModelInvalid, WrongLevel
from .zlinalg import Lattice, preimage_lattice


@dataclass(frozen=True)
class GroupElement:
    """``s^s_exp * body`` with ``body`` in ``O / kappa^(n-1)``."""

    s_exp: int
    body: CycElement

    def digits(self) -> tuple[int, ...]:
        return (self.s_exp,) + self.body.digits

    def __repr__(self) -> str:
        return f"GroupElement({self.s_exp}; {list(self.body.digits)})"


class MaxClassGroup:
    """Group of order ``p^n`` and class ``n - 1`` attached to an :class:`AlphaMap`."""

    def __init__(self, p: int, n: int, m: int, alpha: AlphaMap, verify: bool = True):
        check_parameters(p, m, n)
        if (alpha.p, alpha.m, alpha.n) != (p, m, n):
            raise ModelInvalid(
                f"alpha is for (p, m, n) = {(alpha.p, alpha.m, alpha.n)}, group asked for {(p, m, n)}")
        self.p, self.n, self.m = p, n, m
        self.alpha = alpha
        self.k = n - 1
        self._half = (ring_exponent(p, self.k) + 1) // 2
        if verify:
            verify_maximal_class(self)

    # -- elements ---------------------------------------------------------

    @property
    def order(self) -> int:
        return self.p ** self.n

    def body(self, digits: Sequence[int]) -> CycElement:
        return CycElement(self.p, self.k, digits)

    def element(self, s_exp: int, digits: Sequence[int] = ()) -> GroupElement:
        return GroupElement(s_exp % self.p, self.body(digits))

    @cached_property
    def identity(self) -> GroupElement:
        return GroupElement(0, CycElement.zero(self.p, self.k))

    @cached_property
    def s(self) -> GroupElement:
        return GroupElement(1, CycElement.zero(self.p, self.k))

    def s_i(self, i: int) -> GroupElement:
        """Generator of ``P_i`` modulo ``P_(i+1)``: body ``kappa^(i-1)``."""
        if not 1 <= i <= self.n - 1:
            raise ValueError(f"s_i defined for 1 <= i <= {self.n - 1}")
        return GroupElement(0, CycElement.kappa_pow(self.p, self.k, i - 1))

    def elements(self) -> Iterator[GroupElement]:
        """All elements in lexicographic normal-form order."""
        p, k = self.p, self.k
        for i in range(p):
            for digits in itertools.product(range(p), repeat=k):
                yield GroupElement(i, CycElement(p, k, digits, canonical=True))

    def index_of(self, g: GroupElement) -> int:
        idx = g.s_exp
        for d in g.body.digits:
            idx = idx * self.p + d
        return idx

    # -- arithmetic -------------------------------------------------------

    def form(self, x: CycElement, y: CycElement) -> CycElement:
        """``B(x, y)``; equals the commutator ``[x, y]`` inside ``P1``."""
        m, d = self.m, self.n - self.m
        if d == 0:
            return CycElement.zero(self.p, self.k)
        val = normalize(self.p, d, self.alpha.raw(x.digits[:m - 1], y.digits[:m - 1]))
        # kappa^(m-1) times a canonical lift: a pure digit shift
        return CycElement(self.p, self.k, (0,) * (m - 1) + val, canonical=True)

    def circ(self, x: CycElement, y: CycElement) -> CycElement:
        return x + y + self._half * self.form(x, y)

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return GroupElement((g.s_exp + h.s_exp) % self.p,
                            self.circ(cyc_theta_pow(g.body, h.s_exp), h.body))

    def inverse(self, g: GroupElement) -> GroupElement:
        return GroupElement((-g.s_exp) % self.p, -cyc_theta_pow(g.body, -g.s_exp))

    def power(self, g: GroupElement, k: int) -> GroupElement:
        if k < 0:
            g, k = self.inverse(g), -k
        out = self.identity
        while k:
            if k & 1:
                out = self.multiply(out, g)
            g = self.multiply(g, g)
            k >>= 1
        return out

    def commutator(self, g: GroupElement, h: GroupElement) -> GroupElement:
        """``g^-1 h^-1 g h``."""
        return self.multiply(self.multiply(self.inverse(g), self.inverse(h)),
                             self.multiply(g, h))

    def conjugate(self, g: GroupElement, h: GroupElement) -> GroupElement:
        """``h^-1 g h``."""
        return self.multiply(self.multiply(self.inverse(h), g), h)

    def product(self, elems: Sequence[GroupElement]) -> GroupElement:
        out = self.identity
        for e in elems:
            out = self.multiply(out, e)
        return out

    def level(self, g: GroupElement) -> int:
        """Largest ``i`` with ``g`` in ``P_i`` (``n`` for the identity, 0 outside ``P1``)."""
        if g.s_exp:
            return 0
        return cyc_valuation(g.body) + 1

    # -- commutator chain and normal form -----------------------------------

    @cached_property
    def chain(self) -> tuple[GroupElement, ...]:
        """``c_1 = s_1`` and ``c_i = [c_(i-1), s]``; ``c_i`` lies in ``P_i`` minus ``P_(i+1)``."""
        out = [self.s_i(1)]
        for _ in range(2, self.n):
            out.append(self.commutator(out[-1], self.s))
        for i, c in enumerate(out, start=1):
            if self.level(c) != i:
                raise ModelInvalid(f"commutator chain element c_{i} has level {self.level(c)}")
        return tuple(out)

    def normal_form(self, g: GroupElement) -> tuple[int, ...]:
        """Exponents ``(e0, e1, ..., e_(n-1))`` with ``g = s^e0 c_1^e1 ... c_(n-1)^e_(n-1)``."""
        p = self.p
        exps = [g.s_exp]
        rest = self.multiply(self.power(self.s, -g.s_exp), g)
        for i, c in enumerate(self.chain, start=1):
            lead = c.body.digits[i - 1]
            e = rest.body.digits[i - 1] * pow(lead, -1, p) % p
            exps.append(e)
            rest = self.multiply(self.power(c, -e), rest)
        if rest != self.identity:
            raise ModelInvalid(f"normal form peeling left {rest}")
        return tuple(exps)

    def from_normal_form(self, exps: Sequence[int]) -> GroupElement:
        out = self.power(self.s, exps[0])
        for c, e in zip(self.chain, exps[1:]):
            out = self.multiply(out, self.power(c, e))
        return out

    # -- structure -----------------------------------------------------------

    @cached_property
    def degree_of_commutativity(self) -> int:
        return degree_of_commutativity(self)

    @cached_property
    def commutator_level(self) -> int:
        """``i`` with ``[P1, P1] = P_i`` (``n`` when ``P1`` is abelian)."""
        return self.m + self.alpha.image_valuation()

    def is_p1_abelian(self) -> bool:
        return self.alpha.is_zero()

    def __repr__(self) -> str:
        return f"MaxClassGroup(p={self.p}, n={self.n}, m={self.m}, alpha={self.alpha!r})"


def construct_group(p: int, n: int, m: int, alpha: AlphaMap) -> MaxClassGroup:
    """Build and verify the group; raises :class:`ModelInvalid` if it is not of maximal class."""
    return MaxClassGroup(p, n, m, alpha, verify=True)


# ---------------------------------------------------------------------------
# Subgroups


class Subgroup:
    """Subgroup of ``G`` given by an additive body lattice, optionally with ``s``.

    Only two shapes occur: subgroups of ``P1`` (``has_s`` false) and ``G``
    itself.  The body lattice lives in digit coordinates and always contains
    the relations of ``O / kappa^(n-1)``.
    """

    def __init__(self, G: MaxClassGroup, generators: Sequence[Sequence[int]] = (),
                 has_s: bool = False, check: bool = True):
        self.G = G
        self.has_s = has_s
        k = G.k
        self.lattice = Lattice(k, ring_exponent(G.p, k) if k else None)
        self.lattice.add_many(relation_rows(G.p, k))
        self.lattice.add_many(generators)
        if check:
            self._check_closed()

    @classmethod
    def whole(cls, G: MaxClassGroup) -> "Subgroup":
        return cls(G, _unit_rows(G.k), has_s=True, check=False)

    @classmethod
    def p_level(cls, G: MaxClassGroup, i: int) -> "Subgroup":
        """``{x : v(x) >= i - 1}`` as a subgroup of ``P1`` (trivial for ``i >= n``)."""
        return cls(G, _unit_rows(G.k)[max(i - 1, 0):], check=False)

    def _check_closed(self) -> None:
        basis = self.basis()
        for x, y in itertools.combinations(basis, 2):
            b = self.G.form(self.G.body(x), self.G.body(y))
            if list(b.digits) not in self.lattice:
                raise ModelInvalid("body lattice is not closed under commutation")

    def basis(self) -> list[list[int]]:
        return [r for r in self.lattice.basis() if any(r)]

    def generators(self) -> list[GroupElement]:
        gens = [GroupElement(0, self.G.body(r)) for r in self.basis()]
        gens = [g for g in gens if g != self.G.identity]
        if self.has_s:
            gens.insert(0, self.G.s)
        return gens

    @property
    def order(self) -> int:
        body = self.G.p ** self.G.k // self.lattice.index() if self.G.k else 1
        return body * (self.G.p if self.has_s else 1)

    def __contains__(self, g: GroupElement) -> bool:
        if g.s_exp and not self.has_s:
            return False
        return list(g.body.digits) in self.lattice

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.has_s == other.has_s and self.lattice == other.lattice

    def __le__(self, other: "Subgroup") -> bool:
        if self.has_s and not other.has_s:
            return False
        return all(r in other.lattice for r in self.basis())

    def is_trivial(self) -> bool:
        return not self.has_s and self.order == 1

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, has_s={self.has_s})"


def _unit_rows(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def normal_closure(G: MaxClassGroup, bodies: Sequence[CycElement]) -> Subgroup:
    """Smallest normal subgroup of ``G`` inside ``P1`` containing ``bodies``."""
    lat = Lattice(G.k, ring_exponent(G.p, G.k) if G.k else None)
    lat.add_many(relation_rows(G.p, G.k))
    pending = [list(b.digits) for b in bodies]
    units = [CycElement.kappa_pow(G.p, G.k, u) for u in range(G.k)]
    while pending:
        v = pending.pop()
        if not lat.add(v):
            continue
        x = G.body(v)
        pending.append(list(cyc_theta_pow(x, 1).digits))
        for e in units:
            pending.append(list(G.form(x, e).digits))
    sub = Subgroup.__new__(Subgroup)
    sub.G, sub.has_s, sub.lattice = G, False, lat
    sub._check_closed()
    return sub


def gamma_series(G: MaxClassGroup) -> list[Subgroup]:
    """Lower central series ``gamma_1 = G, gamma_2, ...`` down to the trivial group."""
    series = [Subgroup.whole(G)]
    cur = normal_closure(G, [G.commutator(G.s, G.s_i(1)).body])
    while True:
        series.append(cur)
        if cur.is_trivial():
            return series
        gens = cur.generators()
        nxt = normal_closure(G, [G.commutator(h, x).body for h in gens for x in (G.s, G.s_i(1))])
        if nxt == cur:
            raise ModelInvalid("lower central series stabilised above the trivial group")
        cur = nxt


def verify_maximal_class(G: MaxClassGroup) -> None:
    """Raise :class:`ModelInvalid` unless ``G`` has order ``p^n`` and class ``n - 1``."""
    series = gamma_series(G)
    if len(series) != G.n:
        raise ModelInvalid(f"nilpotency class {len(series) - 1}, expected {G.n - 1}")
    orders = [S.order for S in series]
    if orders[0] != G.p ** G.n or orders[1] != G.p ** (G.n - 2):
        raise ModelInvalid(f"|G : gamma_2| is {orders[0] // orders[1]}, expected p^2")
    for i in range(1, len(orders) - 1):
        if orders[i] != G.p * orders[i + 1]:
            raise ModelInvalid(f"|gamma_{i + 1} : gamma_{i + 2}| is not p")


def p1_centralizer_check(G: MaxClassGroup, series: list[Subgroup] | None = None) -> Subgroup:
    """Compute ``C_G(P2 / P4)`` and confirm it is the body subgroup ``P1``."""
    series = series or gamma_series(G)
    P2, P4 = series[1], series[3] if len(series) > 3 else series[-1]
    gens = P2.generators()
    cosets = []
    for i in range(G.p):
        for j in range(G.p):
            g = G.multiply(G.power(G.s, i), G.power(G.s_i(1), j))
            if all(G.commutator(g, y) in P4 for y in gens):
                cosets.append((i, j))
    if sorted(cosets) != [(0, j) for j in range(G.p)]:
        raise ModelInvalid(f"C_G(P2/P4) meets cosets {cosets}, expected exactly P1")
    return Subgroup.p_level(G, 1)


def pi_series(G: MaxClassGroup) -> list[Subgroup]:
    """``[P_1, ..., P_n]`` with ``P_1 = C_G(P_2/P_4)`` (verified) and ``P_i = gamma_i``."""
    gam = gamma_series(G)
    return [p1_centralizer_check(G, gam)] + gam[1:]


def degree_of_commutativity(G: MaxClassGroup) -> int:
    """Largest ``l <= n - 3`` with ``[P_i, P_j] <= P_(i+j+l)`` for all ``i, j >= 1``."""
    best = G.n - 3
    for i in range(1, G.n):
        for j in range(i + 1, G.n):
            c = G.commutator(G.s_i(i), G.s_i(j))
            if c != G.identity:
                best = min(best, G.level(c) - i - j)
    return best


def commutator_span(G: MaxClassGroup, first: int, second_from: int) -> Subgroup:
    """``[P_first, P_second_from]`` for subgroups of ``P1`` (a class-2 span)."""
    rows = []
    for u in range(first - 1, G.k):
        for v in range(second_from - 1, G.k):
            rows.append(list(G.form(CycElement.kappa_pow(G.p, G.k, u),
                                    CycElement.kappa_pow(G.p, G.k, v)).digits))
    return Subgroup(G, rows)


def theorem1_predicate(G: MaxClassGroup) -> bool:
    """Whether ``[P1, P1] == [P1, P_(n-2)]``."""
    return commutator_span(G, 1, 1) == commutator_span(G, 1, G.n - 2)


def centralizer_in_Pi(G: MaxClassGroup, x: GroupElement, i: int) -> Subgroup:
    """``C_(P_i)(x)`` computed by solving ``B(x, y) = 0`` for ``y`` in ``P_i``."""
    if not 1 <= i <= G.n - 1 or G.level(x) != i:
        raise WrongLevel(f"element has level {G.level(x)}, not in P_{i} minus P_{i + 1}")
    k = G.k
    # y = sum_{u >= i-1} c_u kappa^u
    images = [list(G.form(x.body, CycElement.kappa_pow(G.p, k, u)).digits)
              for u in range(i - 1, k)]
    coeffs = preimage_lattice(images, relation_rows(G.p, k), k,
                              modulus=ring_exponent(G.p, k))
    rows = [[0] * (i - 1) + list(c) for c in coeffs]
    return Subgroup(G, rows)


def centralizer_brute(G: MaxClassGroup, x: GroupElement, i: int) -> Subgroup:
    """Same as :func:`centralizer_in_Pi` by enumerating ``P_i``."""
    p, k = G.p, G.k
    found = []
    for tail in itertools.product(range(p), repeat=k - (i - 1)):
        y = GroupElement(0, CycElement(p, k, (0,) * (i - 1) + tail, canonical=True))
        if G.multiply(x, y) == G.multiply(y, x):
            found.append(list(y.body.digits))
    sub = Subgroup(G, found)
    if sub.order != len(found):
        raise ModelInvalid("brute-force centralizer is not a subgroup")
    return sub


def expected_centralizer(G: MaxClassGroup, x: GroupElement, i: int) -> Subgroup:
    """``<x, P_(i+j)>`` with ``j = max(n - 2i - l, 1)``."""
    j = max(G.n - 2 * i - G.degree_of_commutativity, 1)
    rows = [list(x.body.digits)] + _unit_rows(G.k)[i + j - 1:]
    return Subgroup(G, rows)


def center(G: MaxClassGroup) -> Subgroup:
    """``Z(G)``, computed inside ``P1`` (the ``s``-cosets never centralise ``s1``)."""
    k = G.k
    images = []
    for u in range(k):
        e = CycElement.kappa_pow(G.p, k, u)
        row = list((cyc_theta_pow(e, 1) - e).digits)
        for v in range(k):
            row += list(G.form(e, CycElement.kappa_pow(G.p, k, v)).digits)
        images.append(row)
    target = []
    for block in range(k + 1):
        for r in relation_rows(G.p, k):
            t = [0] * (k * (k + 1))
            t[block * k:(block + 1) * k] = r
            target.append(t)
    coeffs = preimage_lattice(images, target, k * (k + 1), modulus=ring_exponent(G.p, k))
    return Subgroup(G, coeffs)


def element_in(G: MaxClassGroup, g: GroupElement) -> None:
    if not isinstance(g, GroupElement) or g.body.p != G.p or g.body.j != G.k:
        raise MembershipError(f"{g!r} is not an element of {G!r}")

"""Arithmetic in the truncated local ring ``O / p^j`` of the p-th cyclotomic integers.

``O = Z[theta]`` with ``theta`` a primitive p-th root of unity,
``kappa = theta - 1`` generates the prime above ``p`` and ``(p) = (kappa)^(p-1)``.
Every element of ``O / kappa^j`` is written uniquely as ``sum a_u kappa^u``
with digits ``0 <= a_u < p``; that digit string is the canonical form used
everywhere in the package.

Carries come from ``(1 + kappa)^p = 1``, i.e.
``p * kappa^u = -sum_{i=1}^{p-1} binom(p, i+1) kappa^(u+i)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import (BadParameters, BadResidue, InvalidAlpha, NotDivisible,
                     PrecisionMismatch, UnsupportedPrime)
from .zlinalg import Lattice, preimage_lattice, smith_form, hermite_normal_form


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _check_odd_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise UnsupportedPrime(f"p = {p} is not an odd prime")


# Swapped out by the fault-injection negative control in ``verify``.
_carry_override: dict[int, tuple[int, ...]] = {}


@lru_cache(maxsize=None)
def _carry_table(p: int) -> tuple[int, ...]:
    return tuple(comb(p, i + 1) for i in range(1, p))


def carry_coefficients(p: int) -> tuple[int, ...]:
    """``c_1..c_{p-1}`` with ``p * kappa^u = -sum_i c_i kappa^(u+i)``."""
    return _carry_override.get(p) or _carry_table(p)


def normalize(p: int, j: int, coeffs: Iterable[int]) -> tuple[int, ...]:
    """Canonical digits of ``sum coeffs[u] kappa^u`` in ``O / kappa^j``."""
    a = list(coeffs)[:j]
    if len(a) < j:
        a.extend([0] * (j - len(a)))
    carry = carry_coefficients(p)
    for u in range(j):
        q, r = divmod(a[u], p)
        if q:
            a[u] = r
            top = min(p - 1, j - 1 - u)
            for i in range(1, top + 1):
                a[u + i] -= q * carry[i - 1]
    return tuple(a)


def relation_rows(p: int, j: int) -> list[list[int]]:
    """Rows spanning the lattice ``L`` with ``Z^j / L = O / kappa^j`` (digit coordinates)."""
    carry = carry_coefficients(p)
    rows = []
    for u in range(j):
        row = [0] * j
        row[u] = p
        for i in range(1, p):
            if u + i < j:
                row[u + i] = carry[i - 1]
        rows.append(row)
    return rows


def ring_exponent(p: int, j: int) -> int:
    """Additive exponent of ``O / kappa^j``, i.e. ``p^ceil(j / (p-1))``."""
    return p ** (-(-j // (p - 1))) if j > 0 else 1


class CycElement:
    """Element of ``O / kappa^j`` in canonical kappa-adic digit form."""

    __slots__ = ("p", "j", "digits")

    def __init__(self, p: int, j: int, digits: Sequence[int] = (), *, canonical: bool = False):
        self.p = p
        self.j = j
        if canonical:
            self.digits = tuple(digits)
        else:
            self.digits = normalize(p, j, digits)

    @classmethod
    def zero(cls, p: int, j: int) -> "CycElement":
        return cls(p, j, (0,) * j, canonical=True)

    @classmethod
    def one(cls, p: int, j: int) -> "CycElement":
        return cls.from_int(p, j, 1)

    @classmethod
    def from_int(cls, p: int, j: int, k: int) -> "CycElement":
        return cls(p, j, [k] if j else [])

    @classmethod
    def kappa_pow(cls, p: int, j: int, u: int) -> "CycElement":
        d = [0] * j
        if u < j:
            d[u] = 1
        return cls(p, j, d, canonical=True)

    def _check(self, other: "CycElement") -> None:
        if self.p != other.p or self.j != other.j:
            raise PrecisionMismatch(
                f"O/p^{self.j} (p={self.p}) vs O/p^{other.j} (p={other.p})")

    def __add__(self, other):
        if isinstance(other, int):
            other = CycElement.from_int(self.p, self.j, other)
        return cyc_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return CycElement(self.p, self.j, [-a for a in self.digits])

    def __sub__(self, other):
        self._check(other)
        return CycElement(self.p, self.j, [a - b for a, b in zip(self.digits, other.digits)])

    def __mul__(self, other):
        if isinstance(other, int):
            return CycElement(self.p, self.j, [other * a for a in self.digits])
        return cyc_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CycElement):
            return NotImplemented
        return (self.p, self.j, self.digits) == (other.p, other.j, other.digits)

    def __hash__(self):
        return hash((self.p, self.j, self.digits))

    def __bool__(self):
        return any(self.digits)

    def __repr__(self):
        return f"CycElement(p={self.p}, j={self.j}, digits={self.digits})"

    def valuation(self) -> int:
        return cyc_valuation(self)

    def reduce(self, j: int) -> "CycElement":
        """Image in ``O / kappa^j`` for ``j <= self.j``."""
        if j > self.j:
            raise PrecisionMismatch(f"cannot reduce O/p^{self.j} to O/p^{j}")
        return CycElement(self.p, j, self.digits[:j], canonical=True)

    def lift(self, j: int) -> "CycElement":
        """Canonical lift (same digits, zero-padded) to ``O / kappa^j``."""
        if j < self.j:
            raise PrecisionMismatch(f"cannot lift O/p^{self.j} to O/p^{j}")
        return CycElement(self.p, j, self.digits + (0,) * (j - self.j), canonical=True)

    def shift(self, k: int, j: int | None = None) -> "CycElement":
        """``kappa^k * x`` viewed in ``O / kappa^j`` (default: same precision)."""
        j = self.j if j is None else j
        d = ((0,) * k + self.digits + (0,) * j)[:j]
        # a digit shift of a canonical string is canonical
        return CycElement(self.p, j, d, canonical=True)


def cyc_add(x: CycElement, y: CycElement) -> CycElement:
    x._check(y)
    return CycElement(x.p, x.j, [a + b for a, b in zip(x.digits, y.digits)])


def _convolve(a: Sequence[int], b: Sequence[int], j: int) -> list[int]:
    out = [0] * j
    for u, au in enumerate(a):
        if au:
            for v in range(min(len(b), j - u)):
                bv = b[v]
                if bv:
                    out[u + v] += au * bv
    return out


def cyc_mul(x: CycElement, y: CycElement) -> CycElement:
    x._check(y)
    return CycElement(x.p, x.j, _convolve(x.digits, y.digits, x.j))


@lru_cache(maxsize=None)
def _theta_power_digits(p: int, j: int, r: int) -> tuple[int, ...]:
    return normalize(p, j, [comb(r, i) for i in range(min(r, j - 1) + 1)] if j else [])


def theta_power(p: int, j: int, r: int) -> CycElement:
    return CycElement(p, j, _theta_power_digits(p, j, r % p), canonical=True)


def cyc_theta_pow(x: CycElement, r: int) -> CycElement:
    """``theta^r * x``."""
    return CycElement(x.p, x.j, _convolve(_theta_power_digits(x.p, x.j, r % x.p), x.digits, x.j))


def cyc_valuation(x: CycElement) -> int:
    for u, a in enumerate(x.digits):
        if a:
            return u
    return x.j


def cyc_div_kappa(x: CycElement) -> CycElement:
    """``x / kappa`` in ``O / kappa^(j-1)``."""
    if x.j < 1:
        raise NotDivisible("cannot divide in the zero ring")
    if x.digits[0]:
        raise NotDivisible(f"{x} is a unit, not divisible by kappa")
    return CycElement(x.p, x.j - 1, x.digits[1:], canonical=True)


def sigma(x: CycElement, b: int) -> CycElement:
    """Image of ``x`` under the automorphism ``theta -> theta^b``."""
    p, j = x.p, x.j
    b %= p
    if b == 0:
        raise BadResidue(f"sigma_b needs b prime to p, got b = 0 mod {p}")
    # kappa -> (1 + kappa)^b - 1
    image = list(_theta_power_digits(p, j, b))
    if j:
        image[0] -= 1
    image = normalize(p, j, image)
    acc: list[int] = [0] * j
    for a in reversed(x.digits):
        acc = list(normalize(p, j, _convolve(acc, image, j)))
        if j:
            acc[0] += a
    return CycElement(p, j, acc)


def unit_u(p: int, j: int, a: int) -> CycElement:
    """``u_a = (theta^a - 1) / kappa`` in ``O / kappa^j``."""
    a %= p
    if a == 0:
        raise BadResidue(f"u_a needs a prime to p, got a = 0 mod {p}")
    return CycElement(p, j, [comb(a, i + 1) for i in range(min(a, j))])


def primitive_root(p: int) -> int:
    """Smallest positive primitive root modulo ``p``."""
    phi = p - 1
    factors = {q for q in range(2, phi + 1) if phi % q == 0 and is_prime(q)}
    for g in range(1, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    raise UnsupportedPrime(f"no primitive root mod {p}")


def choose_a(p: int) -> tuple[int, int]:
    """``(g, a)`` with ``a = (g + 1)^-1 mod p`` normalised into ``[2, (p-1)/2]``."""
    if not is_prime(p):
        raise UnsupportedPrime(f"{p} is not prime")
    if p <= 3:
        raise UnsupportedPrime(f"the canonical commutator map needs p >= 5, got p = {p}")
    g = primitive_root(p)
    a = pow(g + 1, -1, p)
    if a > (p - 1) // 2:
        a = (1 - a) % p
    return g, a


def check_parameters(p: int, m: int, n: int) -> None:
    _check_odd_prime(p)
    if m < 4:
        raise BadParameters(f"need m >= 4, got m = {m}")
    if not m <= n <= 2 * m - 2:
        raise BadParameters(f"need m <= n <= 2m - 2, got m = {m}, n = {n}")


# ---------------------------------------------------------------------------
# Commutator maps


def wedge_pairs(k: int) -> list[tuple[int, int]]:
    """Index pairs ``u < v < k`` in lexicographic order."""
    return list(combinations(range(k), 2))


class AlphaMap:
    """Equivariant alternating bilinear map ``O/p^(m-1) ^ O/p^(m-1) -> O/p^(n-m)``.

    Stored as the table ``alpha(kappa^u ^ kappa^v)`` for ``u < v <= m - 2``.
    Tables are validated on construction; invalid ones raise
    :class:`InvalidAlpha`.
    """

    __slots__ = ("p", "m", "n", "kind", "g", "a", "_table")

    def __init__(self, p: int, m: int, n: int, table: dict[tuple[int, int], Sequence[int]],
                 kind: str = "custom", g: int | None = None, a: int | None = None,
                 validate: bool = True):
        check_parameters(p, m, n)
        self.p, self.m, self.n = p, m, n
        self.kind = kind
        self.g, self.a = g, a
        d = n - m
        tab = {}
        for (u, v), digits in table.items():
            if not (0 <= u < v <= m - 2):
                raise InvalidAlpha(f"table index ({u}, {v}) outside 0 <= u < v <= {m - 2}")
            tab[(u, v)] = normalize(p, d, digits)
        for key in wedge_pairs(m - 1):
            tab.setdefault(key, (0,) * d)
        self._table = tab
        if validate:
            self.validate()

    @property
    def domain_precision(self) -> int:
        return self.m - 1

    @property
    def target_precision(self) -> int:
        return self.n - self.m

    def value(self, u: int, v: int) -> CycElement:
        """``alpha(kappa^u ^ kappa^v)`` for any ``u, v``."""
        d = self.target_precision
        if u == v or max(u, v) >= self.m - 1:
            return CycElement.zero(self.p, d)
        if u < v:
            return CycElement(self.p, d, self._table[(u, v)], canonical=True)
        return -CycElement(self.p, d, self._table[(v, u)], canonical=True)

    def table_items(self):
        return sorted(self._table.items())

    def raw(self, x: Sequence[int], y: Sequence[int]) -> list[int]:
        """Unnormalised bilinear expansion on integer digit vectors."""
        d = self.target_precision
        acc = [0] * d
        for (u, v), t in self._table.items():
            c = x[u] * y[v] - x[v] * y[u]
            if c and any(t):
                for k in range(d):
                    acc[k] += c * t[k]
        return acc

    def __call__(self, x: CycElement, y: CycElement) -> CycElement:
        return alpha_apply(self, x, y)

    def validate(self) -> None:
        p, k, d = self.p, self.m - 1, self.target_precision
        # additivity on the quotient module: relations of O/p^(m-1) pair to zero
        for r in relation_rows(p, k):
            for w in range(k):
                e = [0] * k
                e[w] = 1
                if any(normalize(p, d, self.raw(r, e))):
                    raise InvalidAlpha(f"table is not bilinear on O/p^{k}: relation {r} pairs "
                                       f"nontrivially with kappa^{w}")
        # equivariance on generators
        for (u, v) in wedge_pairs(k):
            tx = theta_power(p, k, 1) * CycElement.kappa_pow(p, k, u)
            ty = theta_power(p, k, 1) * CycElement.kappa_pow(p, k, v)
            lhs = normalize(p, d, self.raw(tx.digits, ty.digits))
            rhs = cyc_theta_pow(self.value(u, v), 1).digits
            if lhs != rhs:
                raise InvalidAlpha(f"table is not theta-equivariant at ({u}, {v})")

    def image_valuation(self) -> int:
        """``k`` such that the image of the map is ``kappa^k O / kappa^(n-m)``."""
        d = self.target_precision
        vals = [cyc_valuation(CycElement(self.p, d, t, canonical=True)) for t in self._table.values()]
        return min(vals, default=d)

    def is_surjective(self) -> bool:
        return self.image_valuation() == 0

    def is_zero(self) -> bool:
        return not any(any(t) for t in self._table.values())

    def scaled(self, unit: CycElement) -> "AlphaMap":
        """The map ``unit * alpha`` (a custom map)."""
        tab = {key: (unit * CycElement(self.p, self.target_precision, t, canonical=True)).digits
               for key, t in self._table.items()}
        return AlphaMap(self.p, self.m, self.n, tab)

    def truncated(self, n: int) -> "AlphaMap":
        """Compose with reduction ``O/p^(n-m) -> O/p^(n'-m)`` for ``n' <= n``."""
        d = n - self.m
        tab = {key: t[:d] for key, t in self._table.items()}
        return AlphaMap(self.p, self.m, n, tab, kind=self.kind, g=self.g, a=self.a)

    def __eq__(self, other):
        if not isinstance(other, AlphaMap):
            return NotImplemented
        return (self.p, self.m, self.n, self._table) == (other.p, other.m, other.n, other._table)

    def __hash__(self):
        return hash((self.p, self.m, self.n, tuple(sorted(self._table.items()))))

    def __repr__(self):
        extra = f", a={self.a}" if self.kind == "canonical" else ""
        return f"AlphaMap(p={self.p}, m={self.m}, n={self.n}, kind={self.kind!r}{extra})"


def alpha_apply(A: AlphaMap, x: CycElement, y: CycElement) -> CycElement:
    k = A.domain_precision
    for z in (x, y):
        if z.p != A.p or z.j != k:
            raise PrecisionMismatch(f"alpha expects elements of O/p^{k} with p = {A.p}")
    return CycElement(A.p, A.target_precision, A.raw(x.digits, y.digits))


def alpha_canonical(p: int, m: int, n: int, a: int | None = None) -> AlphaMap:
    """The map ``kappa^-1 (sigma_a(x) sigma_{1-a}(y) - sigma_a(y) sigma_{1-a}(x))``.

    Evaluated on lifts at precision ``n - m + 1`` followed by one division
    by ``kappa``; the result does not depend on the lifts because ``n <= 2m - 2``.
    """
    check_parameters(p, m, n)
    if a is None:
        g, a = choose_a(p)
    else:
        g = None
        if a % p in (0, 1):
            raise BadResidue(f"a must avoid 0 and 1 mod p, got a = {a}")
        a %= p
    j = n - m + 1
    b = (1 - a) % p
    table = {}
    for u, v in wedge_pairs(m - 1):
        x = CycElement.kappa_pow(p, j, u)
        y = CycElement.kappa_pow(p, j, v)
        expr = sigma(x, a) * sigma(y, b) - sigma(y, a) * sigma(x, b)
        table[(u, v)] = cyc_div_kappa(expr).digits
    return AlphaMap(p, m, n, table, kind="canonical", g=g, a=a)


def alpha_closed_form(p: int, m: int, n: int, a: int, u: int, v: int) -> CycElement:
    """Closed expression for ``alpha(kappa^u ^ kappa^v)``; used as a cross-check only."""
    d = n - m
    if u == v:
        return CycElement.zero(p, d)
    ua = unit_u(p, d, a)
    ub = unit_u(p, d, 1 - a)
    lo, diff = min(u, v), abs(u - v)
    val = _pow(ua * ub, lo) * (_pow(ua, diff) - _pow(ub, diff))
    val = val.shift(u + v - 1)
    return val if u > v else -val


def _pow(x: CycElement, e: int) -> CycElement:
    out = CycElement.one(x.p, x.j)
    for _ in range(e):
        out = out * x
    return out


@dataclass(frozen=True)
class AlphaSolutions:
    """The finite abelian group of all valid commutator tables for ``(p, m, n)``.

    ``generators[i]`` has additive order ``orders[i]`` and the group is their
    direct sum.
    """

    p: int
    m: int
    n: int
    generators: tuple[AlphaMap, ...]
    orders: tuple[int, ...]
    lattice_basis: tuple[tuple[int, ...], ...]

    @property
    def zero(self) -> AlphaMap:
        return AlphaMap(self.p, self.m, self.n, {})

    @property
    def order(self) -> int:
        out = 1
        for o in self.orders:
            out *= o
        return out

    def contains(self, A: AlphaMap) -> bool:
        lat = Lattice.from_rows(self.lattice_basis, len(self.lattice_basis[0]) if self.lattice_basis else 0)
        return list(_table_vector(A)) in lat if self.lattice_basis else A.is_zero()

    def combination(self, coeffs: Sequence[int]) -> AlphaMap:
        d = self.n - self.m
        acc = {key: [0] * d for key in wedge_pairs(self.m - 1)}
        for c, gen in zip(coeffs, self.generators):
            for key, t in gen.table_items():
                for k in range(d):
                    acc[key][k] += c * t[k]
        return AlphaMap(self.p, self.m, self.n, acc)

    def all_maps(self):
        """Every element of the solution group (use only for tiny cases)."""
        from itertools import product
        for coeffs in product(*(range(o) for o in self.orders)):
            yield self.combination(coeffs)


def _table_vector(A: AlphaMap) -> list[int]:
    out = []
    for _, t in A.table_items():
        out.extend(t)
    return out


def alpha_solve(p: int, m: int, n: int) -> AlphaSolutions:
    """All alternating, bilinear, theta-equivariant tables for ``(p, m, n)``.

    Works for any odd prime, including ``p = 3`` where no canonical map exists.
    """
    check_parameters(p, m, n)
    k, d = m - 1, n - m
    pairs = wedge_pairs(k)
    npairs = len(pairs)
    nvars = npairs * d
    Ld = relation_rows(p, d)
    theta_d = [list(normalize(p, d, _convolve(_theta_power_digits(p, d, 1), e, d)))
               for e in _unit_vectors(d)]

    # The value alpha(x ^ y) for digit vectors x, y is linear in the unknowns:
    # coefficient of pair (u, v) is x_u y_v - x_v y_u.
    def pair_coeffs(x, y):
        return [x[u] * y[v] - x[v] * y[u] for u, v in pairs]

    # Each condition is a linear functional of the table: a list of
    # (pair index, multiplier) where the multiplier is an integer or theta.
    conditions: list[list[tuple[int, int | str]]] = []
    for r in relation_rows(p, k):
        for e in _unit_vectors(k):
            conditions.append([(i, c) for i, c in enumerate(pair_coeffs(r, e)) if c])
    th = theta_power(p, k, 1)
    for idx, (u, v) in enumerate(pairs):
        tx = (th * CycElement.kappa_pow(p, k, u)).digits
        ty = (th * CycElement.kappa_pow(p, k, v)).digits
        terms = [(i, c) for i, c in enumerate(pair_coeffs(tx, ty)) if c]
        terms.append((idx, "-theta"))
        conditions.append(terms)

    ncond = len(conditions)
    # image of the unknown (pair i, digit s) in (Z^d)^ncond
    images = [[0] * (ncond * d) for _ in range(nvars)]
    for c, terms in enumerate(conditions):
        for i, mult in terms:
            for s in range(d):
                row = images[i * d + s]
                if mult == "-theta":
                    for t in range(d):
                        row[c * d + t] -= theta_d[s][t]
                else:
                    row[c * d + s] += mult
    target = []
    for c in range(ncond):
        for r in Ld:
            row = [0] * (ncond * d)
            row[c * d:(c + 1) * d] = r
            target.append(row)
    if nvars == 0:
        return AlphaSolutions(p, m, n, (), (), ())
    K = preimage_lattice(images, target, ncond * d, modulus=ring_exponent(p, d))
    # the solution group is K / (L_d)^npairs
    Lk = []
    for i in range(npairs):
        for r in Ld:
            row = [0] * nvars
            row[i * d:(i + 1) * d] = r
            Lk.append(row)
    Klat = Lattice.from_rows(K, nvars)
    coords = [Klat.coordinates(r) for r in Lk]
    basis = Klat.basis()
    diag, U, V = smith_form(coords, len(basis), transforms=True)
    # U * coords * V = D; generators of K / Lk are the rows of V^-1 * basis
    Vinv = _unimodular_inverse(V)
    gens, orders = [], []
    for i, dval in enumerate(diag + [0] * (len(basis) - len(diag))):
        if dval == 1:
            continue
        vec = [sum(Vinv[i][t] * basis[t][c] for t in range(len(basis))) for c in range(nvars)]
        tab = {pairs[q]: vec[q * d:(q + 1) * d] for q in range(npairs)}
        gens.append(AlphaMap(p, m, n, tab))
        orders.append(dval)
    return AlphaSolutions(p, m, n, tuple(gens), tuple(orders),
                          tuple(tuple(r) for r in hermite_normal_form(basis, nvars)))


def _unit_vectors(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def _unimodular_inverse(V: list[list[int]]) -> list[list[int]]:
    """Inverse of a unimodular integer matrix by exact Gauss-Jordan."""
    from fractions import Fraction
    n = len(V)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(V)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    out = [[int(x) for x in row[n:]] for row in A]
    return out

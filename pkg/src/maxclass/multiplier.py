"""Bogomolov multipliers of maximal-class groups via wedge coinvariants.

For ``P1`` of class 2 with ``[P1, P1] = P_m'``, the multiplier is the
``<theta>``-coinvariant quotient of ``A ^ A`` (``A = O / kappa^(m'-1)``)
by the span ``K`` of wedges ``x ^ y`` with ``[x, y] = 1``.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cyclotomic import (AlphaMap, CycElement, check_parameters, is_prime, normalize,
                         relation_rows, ring_exponent, wedge_pairs)
from .errors import (BadParameters, BudgetExceeded, HypothesisViolated, ModelInvalid,
                     WrongKind)
from .group import MaxClassGroup
from .zlinalg import Lattice, preimage_lattice, smith_form

DEFAULT_BUDGET = 20000


# ---------------------------------------------------------------------------
# Exterior squares


class WedgeModule:
    """``A ^ A`` for ``A = O / kappa^j`` presented on the wedges ``e_u ^ e_v``, ``u < v``."""

    def __init__(self, p: int, j: int):
        if p == 2 or not is_prime(p):
            raise BadParameters(f"p = {p} is not an odd prime")
        if j < 1:
            raise BadParameters(f"need j >= 1, got {j}")
        self.p, self.j = p, j
        self.basis = wedge_pairs(j)
        self.index = {pair: i for i, pair in enumerate(self.basis)}

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def exponent_bound(self) -> int:
        return ring_exponent(self.p, self.j)

    def wedge(self, x: Sequence[int], y: Sequence[int]) -> list[int]:
        """Coordinates of ``x ^ y`` for integer digit vectors."""
        return [x[u] * y[v] - x[v] * y[u] for u, v in self.basis]

    def relations(self) -> list[list[int]]:
        """``r ^ e_w`` for every relation row ``r`` of ``A`` and basis vector ``e_w``."""
        out = []
        for r in relation_rows(self.p, self.j):
            for w in range(self.j):
                e = [0] * self.j
                e[w] = 1
                row = self.wedge(r, e)
                if any(row):
                    out.append(row)
        return out

    def theta_image(self, u: int, v: int) -> list[int]:
        """``theta e_u ^ theta e_v`` with ``theta e_u = e_u + e_(u+1)`` (``e_j = 0``)."""
        tu = [0] * self.j
        tv = [0] * self.j
        for t, w in ((tu, u), (tv, v)):
            t[w] = 1
            if w + 1 < self.j:
                t[w + 1] = 1
        return self.wedge(tu, tv)

    def theta_matrix(self) -> list[list[int]]:
        return [self.theta_image(u, v) for u, v in self.basis]

    def coinvariant_rows(self) -> list[list[int]]:
        """``theta w - w`` for each basis wedge ``w``."""
        out = []
        for i, (u, v) in enumerate(self.basis):
            row = self.theta_image(u, v)
            row[i] -= 1
            out.append(row)
        return out

    def quotient(self, extra: Sequence[Sequence[int]] = ()) -> list[int]:
        """Invariant factors of ``A ^ A`` modulo ``extra``."""
        return _invariants_mod(self.relations() + [list(r) for r in extra], self.rank,
                               self.exponent_bound)

    def invariants(self) -> list[int]:
        return self.quotient()


def _lattice_mod(rows: Sequence[Sequence[int]], ncols: int, modulus: int) -> Lattice:
    lat = Lattice(ncols, modulus)
    lat.add_many(rows)
    return lat


def _invariants_mod(rows: Sequence[Sequence[int]], ncols: int, modulus: int) -> list[int]:
    if ncols == 0:
        return []
    basis = _lattice_mod(rows, ncols, modulus).basis()
    return [d for d in smith_form(basis, ncols) if d != 1]


def wedge_square(p: int, j: int) -> WedgeModule:
    return WedgeModule(p, j)


def wedge_coinvariants(p: int, j: int) -> list[int]:
    """Invariant factors of ``(O/kappa^j ^ O/kappa^j)`` modulo ``(theta - 1)``."""
    W = WedgeModule(p, j)
    return W.quotient(W.coinvariant_rows())


# ---------------------------------------------------------------------------
# Commuting wedges


class _Form:
    """Bilinear form ``Z^k x Z^k -> O/kappa^d`` from a table of basis values."""

    def __init__(self, p: int, k: int, d: int, values: Callable[[int, int], Sequence[int]]):
        self.p, self.k, self.d = p, k, d
        self.table = [[list(values(u, v)) for v in range(k)] for u in range(k)]
        self.target = relation_rows(p, d)
        self.modulus = ring_exponent(p, d)

    def images_left(self, x: Sequence[int]) -> list[list[int]]:
        """Rows ``B(x, e_v)`` for each ``v``."""
        out = []
        for v in range(self.k):
            acc = [0] * self.d
            for u in range(self.k):
                if x[u]:
                    t = self.table[u][v]
                    for s in range(self.d):
                        acc[s] += x[u] * t[s]
            out.append(list(normalize(self.p, self.d, acc)))
        return out

    def kernel_of(self, x: Sequence[int]) -> list[list[int]]:
        """Lattice basis of ``{y : B(x, y) = 0}``."""
        if self.d == 0:
            return _unit_rows(self.k)
        return preimage_lattice(self.images_left(x), self.target, self.d, modulus=self.modulus)

    def radical(self) -> list[list[int]]:
        """Lattice basis of ``{x : B(x, .) = 0}``."""
        if self.d == 0:
            return _unit_rows(self.k)
        k, d = self.k, self.d
        images = []
        for u in range(k):
            row = []
            for v in range(k):
                row.extend(self.table[u][v])
            images.append(row)
        target = []
        for blk in range(k):
            for r in self.target:
                t = [0] * (k * d)
                t[blk * d:(blk + 1) * d] = r
                target.append(t)
        return preimage_lattice(images, target, k * d, modulus=self.modulus)


def _unit_rows(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def _coset_reps(basis: list[list[int]], k: int):
    """Representatives of ``Z^k / L`` for a full-rank HNF basis ``L``."""
    diag = [basis[i][i] for i in range(k)]
    return itertools.product(*(range(dv) for dv in diag)), _prod(diag)


def _reduce_hnf(x: list[int], basis: list[list[int]]) -> tuple[int, ...]:
    """Coset representative of ``x`` modulo a full-rank upper-triangular HNF basis."""
    x = list(x)
    for i, row in enumerate(basis):
        q = x[i] // row[i]
        if q:
            for t in range(i, len(x)):
                x[t] -= q * row[t]
    return tuple(x)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _kalpha_brute(form: _Form, W: WedgeModule, budget: int) -> list[list[int]]:
    k = form.k
    rad = Lattice(k, ring_exponent(form.p, k))
    rad.add_many(relation_rows(form.p, k))
    rad.add_many(form.radical())
    basis = rad.basis()
    reps, count = _coset_reps(basis, k)
    if count > budget:
        raise BudgetExceeded(f"{count} kernel solves exceed the budget {budget}")
    # ker B(cx, .) = ker B(x, .) and cx ^ y = c(x ^ y) for a unit c: one x per orbit
    E = ring_exponent(form.p, k)
    units = [c for c in range(2, E) if c % form.p]
    seen: set[tuple[int, ...]] = set()
    gens: list[list[int]] = []
    for x in reps:
        if not any(x) or x in seen:
            continue
        for c in units:
            seen.add(_reduce_hnf([c * t for t in x], basis))
        for y in form.kernel_of(x):
            gens.append(W.wedge(x, y))
    for r in basis:
        for w in range(k):
            e = [0] * k
            e[w] = 1
            gens.append(W.wedge(r, e))
    return [g for g in gens if any(g)]


def _kalpha_closed(W: WedgeModule, mu: int) -> list[list[int]]:
    out = []
    for i, (u, v) in enumerate(W.basis):
        if v >= mu - 1:
            row = [0] * W.rank
            row[i] = 1
            out.append(row)
    return out


def _alpha_form(A: AlphaMap) -> _Form:
    return _Form(A.p, A.m - 1, A.n - A.m, lambda u, v: A.value(u, v).digits)


def kalpha_generators(A: AlphaMap, strategy: str = "brute", budget: int = DEFAULT_BUDGET) -> list[list[int]]:
    """Wedge vectors spanning the commuting-wedge subgroup of ``O/kappa^(m-1) ^ O/kappa^(m-1)``.

    ``closed`` returns all ``e_u ^ e_v`` with ``v >= mu - 1`` and is only
    defined for canonical maps; together with the coinvariant relations it
    spans the same quotient as ``brute``.
    """
    W = WedgeModule(A.p, A.m - 1)
    if strategy == "brute":
        return _kalpha_brute(_alpha_form(A), W, budget)
    if strategy == "closed":
        if A.kind != "canonical":
            raise WrongKind("the closed strategy needs a canonical commutator map")
        return _kalpha_closed(W, A.n - A.m + 2)
    raise BadParameters(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# Reports


@dataclass
class B0Report:
    p: int
    n: int
    m: int
    a: int | None
    method: str
    invariants: list[int]
    mu: int
    x: int
    y: int
    elapsed_ms: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def exponent(self) -> int:
        return max(self.invariants, default=1)

    @property
    def order(self) -> int:
        return _prod(self.invariants)


def _decompose(p: int, m: int, n: int) -> tuple[int, int, int]:
    x, y = divmod(n - m + 1, p - 1)
    return n - m + 2, x, y


def b0_coinvariants(G: MaxClassGroup, strategies: Sequence[str] = ("brute", "closed"),
                    budget: int = DEFAULT_BUDGET) -> B0Report:
    """``B0(G)`` as the coinvariant quotient of ``P1/P_m' ^ P1/P_m'`` by commuting wedges."""
    start = time.perf_counter()
    p, n, m = G.p, G.n, G.m
    mu, x, y = _decompose(p, m, n)
    ell = G.degree_of_commutativity
    if ell <= 0:
        raise HypothesisViolated(f"degree of commutativity is {ell}; a positive value is required")
    a = G.alpha.a if G.alpha.kind == "canonical" else None
    extras: dict = {"degree_of_commutativity": ell}
    if G.is_p1_abelian():
        extras.update(derived_m=n, strategies={})
        return B0Report(p, n, m, a, "coinvariants", [], mu, x, y,
                        (time.perf_counter() - start) * 1000, extras)
    mprime = G.commutator_level
    k = mprime - 1
    units = [CycElement.kappa_pow(p, G.k, u) for u in range(k)]
    # [P1, P1] must be central in P1
    for c in (G.form(e, f) for e in units for f in units):
        if any(any(G.form(c, e).digits) for e in units):
            raise HypothesisViolated("P1 has class greater than 2")
    form = _Form(p, k, G.k, lambda u, v: G.form(units[u], units[v]).digits)
    W = WedgeModule(p, k)
    base = W.relations() + W.coinvariant_rows()
    extras["derived_m"] = mprime
    results: dict[str, Lattice] = {}
    skipped: dict[str, str] = {}
    for strat in strategies:
        if strat == "brute":
            try:
                gens = _kalpha_brute(form, W, budget)
            except BudgetExceeded as exc:
                skipped[strat] = str(exc)
                continue
        elif strat == "closed":
            if G.alpha.kind != "canonical" or mprime != m:
                skipped[strat] = "needs a canonical commutator map"
                continue
            gens = _kalpha_closed(W, mu)
        else:
            raise BadParameters(f"unknown strategy {strat!r}")
        results[strat] = _lattice_mod(base + gens, W.rank, W.exponent_bound)
    if not results:
        raise BudgetExceeded(f"no strategy could run: {skipped}")
    lats = list(results.values())
    agree = all(L == lats[0] for L in lats[1:])
    if not agree:
        raise ModelInvalid(f"commuting-wedge strategies disagree for {G!r}")
    invariants = [d for d in smith_form(lats[0].basis(), W.rank) if d != 1]
    extras["strategies"] = {s: "ok" for s in results}
    extras["strategies"].update(skipped)
    extras["strategies_agree"] = agree if len(results) > 1 else None
    return B0Report(p, n, m, a, "coinvariants", invariants, mu, x, y,
                    (time.perf_counter() - start) * 1000, extras)


def theorem3_formula(p: int, m: int, n: int) -> B0Report:
    """The closed formula, evaluated literally with its floor exponents."""
    if p < 5:
        raise BadParameters(f"the closed formula needs p >= 5, got p = {p}")
    check_parameters(p, m, n)
    mu, x, y = _decompose(p, m, n)
    inv = []
    if x > 0:
        inv += [p ** x] * ((p - 1 - y) // 2)
    inv += [p ** (x + 1)] * (y // 2)
    return B0Report(p, n, m, None, "formula", sorted(inv), mu, x, y,
                    extras={"label": "as-printed"})


def bounds_check(report: B0Report) -> bool:
    """Rank at most ``(p-1)/2`` and exponent at most ``p^ceil((n-m+1)/(p-1))``."""
    p = report.p
    j = report.n - report.m + 1
    return report.rank <= (p - 1) // 2 and report.exponent <= p ** (-(-j // (p - 1)))


def corollary_threshold(p: int) -> int:
    return max(p + 2, 6 * p - 29)


@dataclass
class Reconciliation:
    p: int
    m: int
    n: int
    x: int
    y: int
    formula_value: list[int]
    computed_value: list[int]
    agree: bool
    properties: dict
    witness: dict | None = None


def reconcile(p: int, m: int, n: int) -> Reconciliation:
    """Compare the literal formula with ``wedge_coinvariants(p, n - m + 1)``."""
    formula = theorem3_formula(p, m, n)
    j = n - m + 1
    computed = wedge_coinvariants(p, j)
    prev = wedge_coinvariants(p, j - 1) if j > 1 else []
    two_back = wedge_coinvariants(p, j - 2) if j > 2 else []
    order = _prod(computed)
    props = {
        "monotone": _prod(prev) <= order,
        "staircase": order in (_prod(two_back) * p,) if j > 2 else None,
        "homocyclic": (len(set(computed)) <= 1 and len(computed) == (p - 1) // 2) if formula.y == 0 else None,
    }
    agree = computed == formula.invariants
    witness = None
    if not agree:
        witness = {
            "j": j,
            "formula_order": formula.order,
            "computed_order": order,
            "computed_order_at_j_minus_1": _prod(prev),
            "formula_breaks_monotonicity": formula.order < _prod(prev),
        }
    return Reconciliation(p, m, n, formula.x, formula.y, formula.invariants, computed,
                          agree, props, witness)

"""Property runner behind ``maxclass verify``.

Each check is a named predicate; the runner records pass/fail with a short
detail string and never stops at the first failure.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import cyclotomic
from .cyclotomic import AlphaMap, CycElement, alpha_canonical, alpha_solve, cyc_theta_pow
from .errors import ModelInvalid
from .group import (MaxClassGroup, centralizer_brute, centralizer_in_Pi,
                    expected_centralizer, p1_centralizer_check, theorem1_predicate)
from .homology import schur_multiplier
from .multiplier import b0_coinvariants, bounds_check
from .polyref import PolyRing
from .presentation import emit_presentation
from .tables import cyclic_group, direct_product

BRUTE_LIMIT = 20000


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass
class Ledger:
    checks: list[Check] = field(default_factory=list)

    def run(self, name: str, fn: Callable[[], tuple[bool, str] | bool]) -> Check:
        start = time.perf_counter()
        try:
            out = fn()
            passed, detail = out if isinstance(out, tuple) else (bool(out), "")
        except Exception as exc:  # a crash is a failed property, not an abort
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        chk = Check(name, bool(passed), detail, time.perf_counter() - start)
        self.checks.append(chk)
        return chk

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self) -> str:
        lines = []
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            extra = f" ({c.detail})" if c.detail else ""
            lines.append(f"[{tag}] {c.name}{extra} [{c.seconds:.2f}s]")
        n_ok = sum(c.passed for c in self.checks)
        lines.append(f"{n_ok}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"


# -- fault injection ----------------------------------------------------------

FAULTS = ("wrong-carry",)


def inject_fault(name: str) -> None:
    if name != "wrong-carry":
        raise ValueError(f"unknown fault {name!r}")
    for p in (3, 5, 7):
        good = cyclotomic._carry_table(p)
        cyclotomic._carry_override[p] = (good[0] + 1,) + good[1:]
    cyclotomic._theta_power_digits.cache_clear()


def clear_faults() -> None:
    cyclotomic._carry_override.clear()
    cyclotomic._theta_power_digits.cache_clear()


# -- individual properties ------------------------------------------------------

def ring_matches_reference(p: int, j: int, samples: int, rng: random.Random) -> tuple[bool, str]:
    R = PolyRing(p)
    bad = 0
    for _ in range(samples):
        x = [rng.randrange(p) for _ in range(j)]
        y = [rng.randrange(p) for _ in range(j)]
        r = rng.randrange(1, p)
        X, Y = CycElement(p, j, x), CycElement(p, j, y)
        fx, fy = R.from_digits(x), R.from_digits(y)
        if not (R.congruent(R.from_digits((X * Y).digits), R.mul(fx, fy), j)
                and R.congruent(R.from_digits((X + Y).digits), R.add(fx, fy), j)
                and R.congruent(R.from_digits(cyc_theta_pow(X, r).digits), R.theta(fx, r), j)):
            bad += 1
    return bad == 0, f"{bad}/{samples} mismatches"


def alpha_is_valid(A: AlphaMap) -> tuple[bool, str]:
    A.validate()
    return True, f"image valuation {A.image_valuation()}"


def centralizers_match(G: MaxClassGroup, rng: random.Random, samples: int = 200) -> tuple[bool, str]:
    notes = []
    for i in range(1, G.n):
        x = G.s_i(i)
        solved = centralizer_in_Pi(G, x, i)
        expected = expected_centralizer(G, x, i)
        if solved != expected:
            return False, f"solved centralizer of s_{i} has order {solved.order}, expected {expected.order}"
        size = G.p ** (G.k - (i - 1))
        if size <= BRUTE_LIMIT:
            if centralizer_brute(G, x, i) != solved:
                return False, f"brute-force centralizer of s_{i} differs"
            notes.append("brute")
        else:
            for _ in range(samples):
                tail = [rng.randrange(G.p) for _ in range(G.k - (i - 1))]
                y = G.element(0, [0] * (i - 1) + tail)
                if (G.multiply(x, y) == G.multiply(y, x)) != (y in solved):
                    return False, f"sampled element disagrees for s_{i}"
            notes.append("sampled")
    return True, f"{notes.count('brute')} brute, {notes.count('sampled')} sampled"


def presentation_holds(G: MaxClassGroup) -> tuple[bool, str]:
    P = emit_presentation(G)
    results = P.check(G)
    census = P.census()
    return all(results), f"{sum(results)}/{len(results)} relators trivial, census {census}"


def b0_is(G: MaxClassGroup, expected: list[int]) -> tuple[bool, str]:
    rep = b0_coinvariants(G)
    return rep.invariants == expected, f"got {rep.invariants}, expected {expected}"


def b0_within_bounds(G: MaxClassGroup) -> tuple[bool, str]:
    rep = b0_coinvariants(G)
    return bounds_check(rep), f"invariants {rep.invariants}"


def schur_is(T, expected: list[int]) -> tuple[bool, str]:
    got = schur_multiplier(T).invariants
    return got == expected, f"got {got}, expected {expected}"


def _canonical(p: int, m: int, n: int) -> MaxClassGroup:
    return MaxClassGroup(p, n, m, alpha_canonical(p, m, n))


def _p3_surjective() -> MaxClassGroup:
    sols = alpha_solve(3, 4, 5)
    A = next((a for a in sols.generators if a.is_surjective()), None)
    if A is None:
        raise ModelInvalid("alpha_solve(3, 4, 5) returned no surjective generator")
    return MaxClassGroup(3, 5, 4, A)


def _criterion_grid() -> tuple[bool, str]:
    bad = []
    for m in (4, 5, 6):
        for n in range(m, 2 * m - 1):
            G = _canonical(5, m, n)
            if theorem1_predicate(G) != (b0_coinvariants(G).invariants == []):
                bad.append((m, n))
    return not bad, f"mismatches at {bad}" if bad else "all cells consistent"


# -- suites ---------------------------------------------------------------------

def run_fixtures(seed: int = 0, samples: int = 200) -> Ledger:
    rng = random.Random(seed)
    L = Ledger()
    for p in (3, 5, 7):
        for j in (1, 3, 6, 8):
            L.run(f"digit arithmetic matches polynomial model p={p} j={j}",
                  lambda p=p, j=j: ring_matches_reference(p, j, samples, rng))
    for m in (4, 5, 6):
        for n in range(m, 2 * m - 1):
            L.run(f"canonical commutator map is alternating, bilinear and equivariant ({5},{m},{n})",
                  lambda m=m, n=n: alpha_is_valid(alpha_canonical(5, m, n)))
    for case in ((5, 4, 4), (5, 4, 5), (5, 5, 5)):
        L.run(f"centralizers of s_i by formula, solver and enumeration agree {case}",
              lambda c=case: centralizers_match(_canonical(*c), rng))
    L.run("C_G(P2/P4) is exactly P1 (5,5,7)",
          lambda: (p1_centralizer_check(_canonical(5, 5, 7)).order > 1, ""))
    for case in ((5, 4, 5), (7, 4, 5)):
        L.run(f"order p^5 canonical group has B0 = C_p {case}",
              lambda c=case: b0_is(_canonical(*c), [c[0]]))
    L.run("abelian P1 gives trivial B0 (5,4,4)", lambda: b0_is(_canonical(5, 4, 4), []))
    L.run("surjective p=3 commutator map gives B0 = C_3 (3,4,5)", lambda: b0_is(_p3_surjective(), [3]))
    for m in (4, 5, 6):
        for n in range(m + 1, 2 * m - 1):
            L.run(f"B0 rank and exponent within bounds (5,{m},{n})",
                  lambda m=m, n=n: b0_within_bounds(_canonical(5, m, n)))
    L.run("[P1,P1] = [P1,P_(n-2)] exactly when B0 is trivial (p=5, m=4..6)", _criterion_grid)
    for p in (5, 7):
        L.run(f"presentation relators evaluate to identity p={p}",
              lambda p=p: presentation_holds(_canonical(p, 4, 5)))
    L.run("presentation relators evaluate to identity p=3", lambda: presentation_holds(_p3_surjective()))
    for n in (2, 6, 9):
        L.run(f"H2 of cyclic group of order {n} is trivial", lambda n=n: schur_is(cyclic_group(n), []))
    for p in (2, 3, 5):
        L.run(f"H2 of C{p} x C{p} is C{p}",
              lambda p=p: schur_is(direct_product(cyclic_group(p), cyclic_group(p)), [p]))
    return L


def run_case(G: MaxClassGroup, seed: int = 0) -> Ledger:
    rng = random.Random(seed)
    L = Ledger()
    tag = f"({G.p},{G.m},{G.n})"
    L.run(f"commutator map is alternating, bilinear and equivariant {tag}", lambda: alpha_is_valid(G.alpha))
    L.run(f"digit arithmetic matches polynomial model {tag}",
          lambda: ring_matches_reference(G.p, G.k, 200, rng))
    L.run(f"lower central series has maximal-class orders {tag}",
          lambda: (MaxClassGroup(G.p, G.n, G.m, G.alpha, verify=True) is not None, ""))
    L.run(f"degree of commutativity is positive {tag}",
          lambda: (G.degree_of_commutativity > 0, f"l = {G.degree_of_commutativity}"))
    L.run(f"centralizers of s_i by formula, solver and enumeration agree {tag}",
          lambda: centralizers_match(G, rng))
    L.run(f"presentation relators evaluate to identity {tag}", lambda: presentation_holds(G))
    L.run(f"B0 rank and exponent within bounds {tag}", lambda: b0_within_bounds(G))
    return L

"""Acceptance criteria 1-12, each checked at its stated tolerance and time budget.

Every test records one PASS/FAIL line that is printed in the terminal summary
and also echoed to stdout.  Set ``MAXCLASS_SKIP_243=1`` to skip the order-243
oracle runs (criteria 8, 9 and 10).
"""
import contextlib
import functools
import os
import random
import time
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from conftest import ACCEPTANCE_RESULTS, canonical_group, p3_surjective_group
from maxclass.cyclotomic import alpha_solve
from maxclass.group import MaxClassGroup, theorem1_predicate
from maxclass.homology import b0_oracle
from maxclass.multiplier import b0_coinvariants, bounds_check, reconcile
from maxclass.presentation import emit_presentation
from maxclass.tables import classical_2group, cyclic_group, direct_product, maximal_class_81, \
    to_multiplication_table
from maxclass.verify import centralizers_match, ring_matches_reference
from maxclass.homology import schur_multiplier

RUN_243 = os.environ.get("MAXCLASS_SKIP_243", "") not in ("1", "true", "yes")


@contextlib.contextmanager
def criterion(number, budget_s, what):
    start = time.perf_counter()
    notes = []
    try:
        yield notes
    except BaseException as exc:
        line = f"{what}: {type(exc).__name__}: {exc}"[:300]
        ACCEPTANCE_RESULTS[number] = (False, line)
        print(f"criterion {number}: FAIL {line}")
        raise
    elapsed = time.perf_counter() - start
    detail = f"{what} [{elapsed:.1f}s / budget {budget_s}s]" + (f" {'; '.join(notes)}" if notes else "")
    ok = elapsed <= budget_s
    ACCEPTANCE_RESULTS[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {number} exceeded its time budget: {detail}"


def small_p3_groups():
    """Every constructible p = 3 group of order 3^4 or 3^5, tagged with its order."""
    out = []
    for m, n in ((4, 4), (4, 5), (5, 5)):
        for i, A in enumerate(alpha_solve(3, m, n).all_maps()):
            out.append((f"(3,{m},{n})#{i}", MaxClassGroup(3, n, m, A)))
    return out


@functools.lru_cache(maxsize=None)
def oracle_b0(label):
    G = dict(small_p3_groups())[label]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return b0_oracle(to_multiplication_table(G), allow_large=True).invariants


def fixture_labels():
    return [label for label, G in small_p3_groups() if RUN_243 or G.order <= 81]


def test_criterion_01_order_p5_values():
    with criterion(1, 2, "canonical (p,4,5) gives C_p for p = 5, 7") as notes:
        for p in (5, 7):
            t = time.perf_counter()
            assert b0_coinvariants(canonical_group(p, 4, 5)).invariants == [p]
            dt = time.perf_counter() - t
            assert dt < 1, f"p={p} took {dt:.2f}s"
            notes.append(f"p={p} {dt:.2f}s")


def test_criterion_02_anchored_cases():
    with criterion(2, 30, "n = m+1 gives C_p; n = m-1 mod p-1 is homocyclic") as notes:
        cells = 0
        for p, ms in ((5, range(4, 9)), (7, range(4, 7))):
            for m in ms:
                assert b0_coinvariants(canonical_group(p, m, m + 1)).invariants == [p], (p, m)
                cells += 1
                for n in range(m + 1, 2 * m - 1):
                    if (n - (m - 1)) % (p - 1) == 0:
                        e = (n - m + 1) // (p - 1)
                        got = b0_coinvariants(canonical_group(p, m, n)).invariants
                        assert got == [p ** e] * ((p - 1) // 2), (p, m, n, got)
                        cells += 1
        notes.append(f"{cells} cells")


def test_criterion_03_staircase():
    with criterion(3, 10, "p = 5, m = 8, n = 9..14 grows by p every second step") as notes:
        orders = []
        for n in range(9, 15):
            orders.append(b0_coinvariants(canonical_group(5, 8, n)).order)
        ratios = [b // a for a, b in zip(orders, orders[1:])]
        assert all(b % a == 0 for a, b in zip(orders, orders[1:])), orders
        assert ratios == [1, 5, 1, 5, 1], orders
        notes.append(f"orders {orders}")


def test_criterion_04_reconciliation():
    with criterion(4, 30, "reconcile over p = 5, m = 4..8") as notes:
        agree = disagree = 0
        for m in range(4, 9):
            for n in range(m + 1, 2 * m - 1):
                r = reconcile(5, m, n)
                if r.y % 2 == 0:
                    assert r.agree, (m, n, r)
                if r.agree:
                    agree += 1
                else:
                    assert r.y % 2 == 1 and r.witness is not None, (m, n, r)
                    assert r.properties["monotone"]
                    disagree += 1
        notes.append(f"{agree} agree, {disagree} y-odd cells recorded with witness")


CELLS = [(5, m, n) for m in range(4, 9) for n in range(m, 2 * m - 1)] + \
        [(7, m, n) for m in range(4, 7) for n in range(m, 2 * m - 1)]


def test_criterion_05_bounds():
    with criterion(5, 120, "rank and exponent bounds on every computed report") as notes:
        seen = []

        @settings(max_examples=len(CELLS), database=None)
        @given(st.sampled_from(CELLS))
        def prop(cell):
            rep = b0_coinvariants(canonical_group(*cell))
            assert bounds_check(rep), (cell, rep.invariants)
            seen.append(cell)

        prop()
        for _, G in small_p3_groups():
            assert bounds_check(b0_coinvariants(G))
        notes.append(f"{len(set(seen))} sampled canonical cells plus all p = 3 groups")


def test_criterion_06_kalpha_strategies():
    with criterion(6, 60, "brute and closed K_alpha agree for p = 5, m = 4..6") as notes:
        cells = 0
        for m in range(4, 7):
            for n in range(m, 2 * m - 1):
                G = canonical_group(5, m, n)
                brute = b0_coinvariants(G, strategies=("brute",)).invariants
                closed = b0_coinvariants(G, strategies=("closed",)).invariants
                assert brute == closed, (m, n, brute, closed)
                cells += 1
        notes.append(f"{cells} cells")


def test_criterion_07_centralizers():
    with criterion(7, 300, "solved, expected and brute centralizers of s_i for p^n <= 5^5") as notes:
        rng = random.Random(0)
        for p, m, n in ((5, 4, 4), (5, 4, 5), (5, 5, 5), (7, 4, 4)):
            ok, detail = centralizers_match(canonical_group(p, m, n), rng)
            assert ok, ((p, m, n), detail)
            assert detail.endswith(" 0 sampled"), detail
        notes.append("all by full enumeration")


def test_criterion_08_oracle_matches_pipeline():
    with criterion(8, 3600, "oracle equals coinvariants for p = 3, n = 4, 5") as notes:
        labels = fixture_labels()
        for label in labels:
            G = dict(small_p3_groups())[label]
            assert oracle_b0(label) == b0_coinvariants(G).invariants, label
        notes.append(f"{len(labels)} groups" + ("" if RUN_243 else " (order 243 skipped)"))


def test_criterion_09_trivial_b0_iff_commutator_predicate():
    with criterion(9, 600, "predicate holds exactly when the oracle B0 is trivial") as notes:
        labels = fixture_labels()
        for label in labels:
            G = dict(small_p3_groups())[label]
            assert theorem1_predicate(G) == (oracle_b0(label) == []), label
        for name, T in maximal_class_81().items():
            assert b0_oracle(T).invariants == [], name
        for kind in ("dihedral", "semidihedral", "quaternion"):
            for k in (4, 5, 6):
                assert b0_oracle(classical_2group(kind, k)).invariants == [], (kind, k)
        notes.append(f"{len(labels)} p = 3 groups, 4 order-81 tables, 9 classical 2-groups")


def test_criterion_10_p3_nontrivial():
    with criterion(10, 3600, "surjective order-3^5 group has B0 = C_3") as notes:
        G = p3_surjective_group()
        t = time.perf_counter()
        assert b0_coinvariants(G).invariants == [3]
        dt = time.perf_counter() - t
        assert dt < 1, f"pipeline took {dt:.2f}s"
        notes.append(f"pipeline {dt:.2f}s")
        if RUN_243:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                assert b0_oracle(to_multiplication_table(G), allow_large=True).invariants == [3]
            notes.append("oracle agrees")


def test_criterion_11_presentation():
    with criterion(11, 10, "relators evaluate to identity; census 1 + 2 + (p-1)/2") as notes:
        groups = [p3_surjective_group()] + [canonical_group(p, m, n) for p, m, n in
                                            ((5, 4, 5), (5, 5, 7), (7, 4, 5), (7, 5, 7))]
        for G in groups:
            t = time.perf_counter()
            P = emit_presentation(G)
            assert all(P.check(G)), (G.p, G.m, G.n)
            assert P.census() == {"class": 1, "power": 2, "commutator": (G.p - 1) // 2}
            dt = time.perf_counter() - t
            assert dt < 1, f"{(G.p, G.m, G.n)} took {dt:.2f}s"
        notes.append(f"{len(groups)} groups")


def test_criterion_12_infrastructure_referees():
    with criterion(12, 120, "digit ring vs polynomial model; H2 of C_n and C_p x C_p") as notes:
        rng = random.Random(12)
        for p in (3, 5, 7):
            for j in range(1, 9):
                ok, detail = ring_matches_reference(p, j, 10_000, rng)
                assert ok, (p, j, detail)
        for p in (2, 3, 5):
            assert schur_multiplier(cyclic_group(p)).invariants == []
            assert schur_multiplier(cyclic_group(p * p)).invariants == []
            assert schur_multiplier(direct_product(cyclic_group(p), cyclic_group(p))).invariants == [p]
        notes.append("10^4 samples per (p, j)")

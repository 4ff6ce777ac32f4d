"""Compiled vs pure-Python sparse elimination on bar-complex matrices.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--include-243]

Each case builds the generator-column slice of ``d3`` plus the commuting-pair
cycles for a finite group, then reduces it modulo ``p^(2a)`` with both
backends.  Results must match; timings are the best of ``--repeat`` runs.
"""
from __future__ import annotations

import argparse
import time

from maxclass import kernels
from maxclass.cyclotomic import alpha_solve
from maxclass.group import MaxClassGroup
from maxclass.homology import BarComplex, _factorize
from maxclass.kernels import CSRBuilder, sparse_snf_mod
from maxclass.tables import classical_2group, maximal_class_81, to_multiplication_table


def build(T):
    bc = BarComplex(T, cap=T.N, allow_large=True)
    rows = CSRBuilder()
    for a in bc.elems:
        for b in bc.elems:
            for x in T.generating_set():
                col = bc.boundary3_column(a, b, x)
                if col:
                    rows.add_row(col)
    for a in bc.elems:
        for b in bc.elems:
            if bc.pos[a] < bc.pos[b] and T.commutes(a, b):
                rows.add_row({bc.c2(a, b): 1, bc.c2(b, a): -1})
    (p, e), = _factorize(T.N).items()
    return bc.m * bc.m, rows, p ** (2 * e), p


def best(fn, repeat):
    out, t_best = None, float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        t_best = min(t_best, time.perf_counter() - t)
    return out, t_best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--include-243", action="store_true", help="add an order-243 case (slow in Python)")
    args = ap.parse_args()
    cases = [
        ("dihedral-32", classical_2group("dihedral", 5)),
        ("quaternion-64", classical_2group("quaternion", 6)),
    ]
    cases += [(f"{k}-81", T) for k, T in maximal_class_81().items()]
    if args.include_243:
        A = next(a for a in alpha_solve(3, 4, 5).generators if a.is_surjective())
        cases.append(("p3-surjective-243", to_multiplication_table(MaxClassGroup(3, 5, 4, A))))
    if kernels.BACKEND != "compiled":
        print("compiled backend not available; only the Python timings are meaningful")
    print(f"{'case':<22}{'rows':>9}{'cols':>9}{'python s':>11}{'compiled s':>12}{'speedup':>9}  match")
    for name, T in cases:
        ncols, rows, D, p = build(T)
        args_ = (ncols, rows.indptr, rows.indices, rows.data, D, p)
        py, t_py = best(lambda: sparse_snf_mod(*args_, backend="python"), args.repeat)
        if kernels.BACKEND == "compiled":
            cc, t_cc = best(lambda: sparse_snf_mod(*args_, backend="compiled"), args.repeat)
            match, speed = py == cc, f"{t_py / t_cc:8.1f}x"
        else:
            t_cc, match, speed = float("nan"), True, "     n/a"
        print(f"{name:<22}{rows.nrows:>9}{ncols:>9}{t_py:>11.3f}{t_cc:>12.3f}{speed:>9}  {match}")


if __name__ == "__main__":
    main()

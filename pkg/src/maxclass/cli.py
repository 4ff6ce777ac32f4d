"""``maxclass`` command-line entry point."""
from __future__ import annotations

import argparse
import json
import sys
import time
from itertools import combinations
from typing import Sequence

from . import io
from .cyclotomic import AlphaMap, alpha_canonical, alpha_solve, check_parameters
from .errors import BadParameters, HypothesisViolated, MaxClassError, ModelInvalid, UnsupportedPrime
from .group import MaxClassGroup, gamma_series, theorem1_predicate
from .homology import b0_oracle
from .multiplier import B0Report, _decompose, b0_coinvariants, bounds_check, theorem3_formula
from .presentation import emit_presentation
from .tables import FiniteGroupTable, to_multiplication_table

EXIT_OK, EXIT_DISAGREE, EXIT_BAD_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
ALPHA_SOLUTIONS_SCHEMA = "maxclass.alpha-solutions/1"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- group loading ------------------------------------------------------------

def _add_case_flags(sp: argparse.ArgumentParser, required: bool = True) -> None:
    sp.add_argument("--p", type=int, required=required, help="odd prime")
    sp.add_argument("--m", type=int, required=required, help="level where P1 stops being abelian")
    sp.add_argument("--n", type=int, required=required, help="the group has order p^n")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--a", type=int, help="residue for the canonical commutator map")
    g.add_argument("--alpha-file", help="group spec or alpha-solve output to read the map from")
    sp.add_argument("--solution", type=int,
                    help="index into an alpha-solve file (default: first surjective solution)")


def _load_alpha(args) -> tuple[AlphaMap, str | None]:
    if args.alpha_file:
        with open(args.alpha_file, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise BadParameters(f"{args.alpha_file} is not valid JSON: {exc}") from exc
        if isinstance(data, dict) and data.get("schema") == ALPHA_SOLUTIONS_SCHEMA:
            sols = data["solutions"]
            if args.solution is None:
                idx = next((i for i, s in enumerate(sols) if s.get("surjective")), None)
                if idx is None:
                    raise BadParameters(f"{args.alpha_file} has no surjective solution; pass --solution")
            else:
                idx = args.solution
            if not 0 <= idx < len(sols):
                raise BadParameters(f"--solution {idx} out of range 0..{len(sols) - 1}")
            data = sols[idx]["spec"]
        A, label = io.groupspec_from_dict(data)
        if args.p is not None and (args.p, args.m, args.n) != (A.p, A.m, A.n):
            raise BadParameters(
                f"flags give (p, m, n) = {(args.p, args.m, args.n)} but the file holds {(A.p, A.m, A.n)}")
        return A, label
    if args.p is None:
        raise BadParameters("give --p, --m and --n, or --alpha-file")
    check_parameters(args.p, args.m, args.n)
    try:
        return alpha_canonical(args.p, args.m, args.n, args.a), None
    except UnsupportedPrime as exc:
        raise BadParameters(
            f"{exc}; for p = {args.p} run `maxclass alpha-solve --p {args.p} --m {args.m} --n {args.n} "
            f"--out FILE` and pass --alpha-file FILE") from exc


def _load_group(args) -> tuple[MaxClassGroup, str | None]:
    A, label = _load_alpha(args)
    return MaxClassGroup(A.p, A.n, A.m, A), label


# -- commands -----------------------------------------------------------------

def cmd_construct(args) -> int:
    G, label = _load_group(args)
    spec = io.groupspec_to_dict(G.alpha, label)
    if args.out:
        _emit(io.dumps(spec), args.out)
    gam = gamma_series(G)
    lines = [
        f"group (p, m, n) = ({G.p}, {G.m}, {G.n}), alpha {G.alpha.kind}"
        + (f" a = {G.alpha.a}" if G.alpha.kind == "canonical" else ""),
        f"order: {G.p}^{G.n} = {G.order}",
        f"nilpotency class: {len(gam) - 1}",
        f"degree of commutativity: {G.degree_of_commutativity}",
        f"[P1,P1] level: {G.commutator_level}",
        f"[P1,P1] = [P1,P_(n-2)]: {theorem1_predicate(G)}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    if args.table_out:
        _emit(json.dumps(to_multiplication_table(G, args.oracle_cap).to_json()) + "\n", args.table_out)
    if not args.out:
        sys.stdout.write(io.dumps(spec))
    return EXIT_OK


def _oracle_report(T: FiniteGroupTable, G: MaxClassGroup | None, args) -> B0Report:
    res = b0_oracle(T, cap=args.oracle_cap, allow_large=args.allow_large)
    if G is None:
        return B0Report(None, None, None, None, "oracle", res.invariants, None, None, None,
                        res.elapsed_ms, {"order": T.N, **res.details})
    mu, x, y = _decompose(G.p, G.m, G.n)
    a = G.alpha.a if G.alpha.kind == "canonical" else None
    return B0Report(G.p, G.n, G.m, a, "oracle", res.invariants, mu, x, y, res.elapsed_ms,
                    {"order": T.N, **res.details})


def cmd_b0(args) -> int:
    methods = ["formula", "coinvariants", "oracle"] if args.method == "all" else [args.method]
    if args.table_file and args.p is None:
        if methods != ["oracle"]:
            raise BadParameters("a bare --table-file only supports --method oracle")
        with open(args.table_file, encoding="utf-8") as fh:
            T = FiniteGroupTable.from_json(json.load(fh))
        rep = _oracle_report(T, None, args)
        rec = io.report_record(rep, agree_flags={})
        sys.stdout.write(io.dumps(io.report_file([rec])))
        return EXIT_OK
    G, _ = _load_group(args)
    doc, thm1 = G.degree_of_commutativity, theorem1_predicate(G)
    reports: dict[str, B0Report] = {}
    skipped: dict[str, str] = {}
    for meth in methods:
        try:
            if meth == "formula":
                reports[meth] = theorem3_formula(G.p, G.m, G.n)
            elif meth == "coinvariants":
                reports[meth] = b0_coinvariants(G)
            else:
                if args.table_file:
                    with open(args.table_file, encoding="utf-8") as fh:
                        T = FiniteGroupTable.from_json(json.load(fh))
                    if T.N != G.order:
                        raise BadParameters(f"table has order {T.N}, group has order {G.order}")
                else:
                    T = to_multiplication_table(G, args.oracle_cap)
                reports[meth] = _oracle_report(T, G, args)
        except (MaxClassError, ValueError) as exc:
            if len(methods) == 1 or isinstance(exc, (ModelInvalid, HypothesisViolated)):
                raise
            skipped[meth] = f"{type(exc).__name__}: {exc}"
    matrix = {f"{a}~{b}": reports[a].invariants == reports[b].invariants
              for a, b in combinations([m for m in methods if m in reports], 2)}
    records = []
    for meth, rep in reports.items():
        flags = {k: v for k, v in matrix.items() if meth in k.split("~")}
        flags["bounds"] = bounds_check(rep)
        records.append(io.report_record(rep, doc=doc, theorem1=thm1, agree_flags=flags))
    extra = {"agreement": matrix, "skipped": skipped} if args.method == "all" else {}
    _emit(io.dumps(io.report_file(records, **extra)), args.out)
    return EXIT_OK if all(matrix.values()) else EXIT_DISAGREE


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(".."))
    except ValueError as exc:
        raise BadParameters(f"--m-range must look like A..B, got {text!r}") from exc
    if lo > hi:
        raise BadParameters(f"empty --m-range {text!r}")
    return lo, hi


def table_rows(p: int, lo: int, hi: int) -> list[dict]:
    """Formula against pipeline for ``m`` in ``lo..hi`` and ``n`` in ``m+1..2m-2``."""
    rows = []
    for m in range(lo, hi + 1):
        for n in range(m + 1, 2 * m - 1):
            formula = theorem3_formula(p, m, n)
            G = MaxClassGroup(p, n, m, alpha_canonical(p, m, n))
            computed = b0_coinvariants(G)
            if not bounds_check(computed):
                raise ModelInvalid(f"computed B0 at {(p, m, n)} violates the rank/exponent bounds")
            rows.append({"p": p, "m": m, "n": n, "x": formula.x, "y": formula.y,
                         "formula_invariants": formula.invariants,
                         "computed_invariants": computed.invariants,
                         "agree": formula.invariants == computed.invariants})
    rows.sort(key=lambda r: (r["m"], r["n"]))
    return rows


def cmd_table(args) -> int:
    lo, hi = _parse_range(args.m_range)
    rows = table_rows(args.p, lo, hi)
    if args.format == "csv":
        text = io.table_rows_to_csv(rows)
    else:
        text = io.dumps({"schema": "maxclass.sweep/1", "rows": rows})
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verify
    if args.inject_fault:
        verify.inject_fault(args.inject_fault)
    try:
        if args.p is not None:
            G, _ = _load_group(args)
            ledger = verify.run_case(G, seed=args.seed)
        else:
            ledger = verify.run_fixtures(seed=args.seed)
    finally:
        verify.clear_faults()
    sys.stdout.write(ledger.render())
    return EXIT_OK if ledger.ok else EXIT_DISAGREE


def cmd_present(args) -> int:
    G, _ = _load_group(args)
    P = emit_presentation(G)
    _emit(P.to_text(), args.out)
    if args.check:
        results = P.check(G)
        census = P.census()
        sys.stderr.write(f"{sum(results)}/{len(results)} relators evaluate to the identity; census {census}\n")
        if not all(results):
            return EXIT_INTERNAL
    return EXIT_OK


def cmd_alpha_solve(args) -> int:
    start = time.perf_counter()
    sols = alpha_solve(args.p, args.m, args.n)
    entries = []
    for i, A in enumerate((sols.zero,) + sols.generators):
        entries.append({
            "index": i,
            "order": 1 if i == 0 else sols.orders[i - 1],
            "surjective": A.is_surjective(),
            "spec": io.groupspec_to_dict(A, "zero map" if i == 0 else f"generator {i}"),
        })
    doc = {"schema": ALPHA_SOLUTIONS_SCHEMA, "p": args.p, "m": args.m, "n": args.n,
           "group_order": sols.order, "orders": list(sols.orders), "solutions": entries}
    _emit(io.dumps(doc), args.out)
    n_surj = sum(e["surjective"] for e in entries)
    sys.stderr.write(f"{len(sols.generators)} generator(s), solution group of order {sols.order}, "
                     f"{n_surj} surjective listed, {(time.perf_counter() - start):.2f}s\n")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxclass",
        description="p-groups of maximal class: construction, commutator-pair multipliers and referees.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("construct", help="build and validate a group, write its spec")
    _add_case_flags(sp)
    sp.add_argument("--out", help="write the canonical group spec here")
    sp.add_argument("--table-out", help="also write the multiplication table (JSON)")
    sp.add_argument("--oracle-cap", type=int, help="order cap for the multiplication table")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("b0", help="compute B0 by formula, coinvariants and/or bar-complex oracle")
    _add_case_flags(sp, required=False)
    sp.add_argument("--method", choices=["formula", "coinvariants", "oracle", "all"], default="coinvariants")
    sp.add_argument("--oracle-cap", type=int, help="largest group order the oracle accepts")
    sp.add_argument("--allow-large", action="store_true", help="permit oracle runs above order 128")
    sp.add_argument("--table-file", help="multiplication table JSON for the oracle")
    sp.add_argument("--out", help="write the report here instead of stdout")
    sp.set_defaults(func=cmd_b0)

    sp = sub.add_parser("table", help="sweep formula against computed values")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m-range", required=True, help="inclusive range A..B")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("verify", help="run the property suite")
    _add_case_flags(sp, required=False)
    sp.add_argument("--fixtures", action="store_true", help="run the built-in fixture set")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--inject-fault", choices=["wrong-carry"], help="negative control")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("present", help="print the relators of the group")
    _add_case_flags(sp)
    sp.add_argument("--check", action="store_true", help="evaluate every relator in the group")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_present)

    sp = sub.add_parser("alpha-solve", help="list every valid commutator table")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_alpha_solve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("b0", "verify") and args.p is not None and (args.m is None or args.n is None):
        parser.error("--p, --m and --n must be given together")
    try:
        return args.func(args)
    except ModelInvalid as exc:
        sys.stderr.write(f"error: model invariant violated: {exc}\n")
        return EXIT_INTERNAL
    except HypothesisViolated as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT
    except MaxClassError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""File formats: group specs, reports, sweep tables and multiplication tables."""
from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable

from .cyclotomic import AlphaMap, alpha_canonical, normalize
from .errors import BadParameters, InvalidAlpha
from .multiplier import B0Report

GROUPSPEC_SCHEMA = "maxclass.groupspec/1"
REPORT_SCHEMA = "maxclass.report/1"
TABLE_COLUMNS = ["p", "m", "n", "x", "y", "formula_invariants", "computed_invariants", "agree"]


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def alpha_to_dict(A: AlphaMap) -> dict:
    if A.kind == "canonical":
        return {"kind": "canonical", "a": A.a}
    entries = [{"u": u, "v": v, "digits": list(d)} for (u, v), d in A.table_items() if any(d)]
    return {"kind": "table", "entries": entries}


def groupspec_to_dict(A: AlphaMap, label: str | None = None) -> dict:
    out = {"schema": GROUPSPEC_SCHEMA, "p": A.p, "m": A.m, "n": A.n, "alpha": alpha_to_dict(A)}
    if label:
        out["label"] = label
    return out


def _int_field(data: dict, key: str) -> int:
    val = data.get(key)
    if not isinstance(val, int) or isinstance(val, bool):
        raise BadParameters(f"group spec field {key!r} must be an integer, got {val!r}")
    return val


def groupspec_from_dict(data: dict) -> tuple[AlphaMap, str | None]:
    """Parse and validate a group spec; returns the map and its label."""
    if not isinstance(data, dict):
        raise BadParameters("group spec must be a JSON object")
    schema = data.get("schema", GROUPSPEC_SCHEMA)
    if schema != GROUPSPEC_SCHEMA:
        raise BadParameters(f"unsupported group spec schema {schema!r}")
    p, m, n = (_int_field(data, k) for k in ("p", "m", "n"))
    alpha = data.get("alpha")
    if not isinstance(alpha, dict):
        raise BadParameters("group spec needs an 'alpha' object")
    kind = alpha.get("kind")
    if kind == "canonical":
        A = alpha_canonical(p, m, n, alpha.get("a"))
    elif kind == "table":
        table = {}
        for e in alpha.get("entries", []):
            try:
                u, v, digits = int(e["u"]), int(e["v"]), [int(d) for d in e["digits"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise BadParameters(f"malformed alpha entry {e!r}") from exc
            if (u, v) in table:
                raise InvalidAlpha(f"duplicate alpha entry ({u}, {v})")
            if len(digits) != n - m:
                raise InvalidAlpha(f"entry ({u}, {v}) needs {n - m} digits, got {len(digits)}")
            table[(u, v)] = normalize(p, n - m, digits)
        A = AlphaMap(p, m, n, table)
    else:
        raise BadParameters(f"alpha kind must be 'canonical' or 'table', got {kind!r}")
    label = data.get("label")
    return A, label


def load_groupspec(path: str) -> tuple[AlphaMap, str | None]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BadParameters(f"cannot read group spec {path}: {exc}") from exc
    if isinstance(data, dict) and "solutions" in data:
        raise BadParameters(f"{path} holds several solutions; pick one with --solution")
    return groupspec_from_dict(data)


def report_record(report: B0Report, *, doc: int | None = None, theorem1: bool | None = None,
                  agree_flags: dict | None = None, details: dict | None = None) -> dict:
    return {
        "p": report.p, "n": report.n, "m": report.m, "a": report.a,
        "method": report.method,
        "invariants": list(report.invariants),
        "rank": report.rank,
        "exponent": report.exponent,
        "doc": doc,
        "theorem1": theorem1,
        "agree_flags": agree_flags or {},
        "elapsed_ms": round(report.elapsed_ms, 3),
        "details": details if details is not None else _jsonable(report.extras),
    }


def report_file(records: Iterable[dict], **extra: Any) -> dict:
    out = {"schema": REPORT_SCHEMA, "records": list(records)}
    out.update(extra)
    return out


def load_report(text: str) -> dict:
    data = json.loads(text)
    if data.get("schema") != REPORT_SCHEMA:
        raise BadParameters(f"unsupported report schema {data.get('schema')!r}")
    return data


def _jsonable(obj: Any) -> Any:
    return json.loads(json.dumps(obj, default=str))


def table_rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for r in rows:
        w.writerow([r["p"], r["m"], r["n"], r["x"], r["y"],
                    json.dumps(r["formula_invariants"], separators=(",", ":")),
                    json.dumps(r["computed_invariants"], separators=(",", ":")),
                    "true" if r["agree"] else "false"])
    return buf.getvalue()


def table_rows_from_csv(text: str) -> list[dict]:
    out = []
    for r in csv.DictReader(io.StringIO(text)):
        out.append({
            "p": int(r["p"]), "m": int(r["m"]), "n": int(r["n"]),
            "x": int(r["x"]), "y": int(r["y"]),
            "formula_invariants": json.loads(r["formula_invariants"]),
            "computed_invariants": json.loads(r["computed_invariants"]),
            "agree": r["agree"] == "true",
        })
    return out

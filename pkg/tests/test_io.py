import json

import pytest
from hypothesis import given, strategies as st

from conftest import canonical_group, p3_surjective_group
from maxclass import io
from maxclass.cyclotomic import alpha_solve
from maxclass.errors import BadParameters, InvalidAlpha
from maxclass.multiplier import b0_coinvariants


def spec_maps():
    yield canonical_group(5, 5, 7).alpha
    yield canonical_group(7, 4, 6).alpha
    yield p3_surjective_group().alpha
    yield from alpha_solve(5, 4, 6).all_maps()


@pytest.mark.parametrize("A", list(spec_maps()))
def test_groupspec_round_trip_is_byte_identical(A):
    text = io.dumps(io.groupspec_to_dict(A, "x"))
    B, label = io.groupspec_from_dict(json.loads(text))
    assert label == "x"
    assert io.dumps(io.groupspec_to_dict(B, label)) == text
    assert B == A or B.table_items() == A.table_items()


def test_groupspec_file(tmp_path):
    A = canonical_group(5, 4, 6).alpha
    path = tmp_path / "g.json"
    path.write_text(io.dumps(io.groupspec_to_dict(A)))
    B, label = io.load_groupspec(str(path))
    assert label is None and B.table_items() == A.table_items()


def test_groupspec_rejects_bad_input(tmp_path):
    good = io.groupspec_to_dict(p3_surjective_group().alpha)
    with pytest.raises(BadParameters):
        io.groupspec_from_dict({**good, "schema": "other/1"})
    with pytest.raises(BadParameters):
        io.groupspec_from_dict({**good, "p": "5"})
    with pytest.raises(BadParameters):
        io.groupspec_from_dict({**good, "alpha": {"kind": "mystery"}})
    entry = good["alpha"]["entries"][0]
    with pytest.raises(InvalidAlpha):
        io.groupspec_from_dict({**good, "alpha": {"kind": "table", "entries": [entry, entry]}})
    with pytest.raises(InvalidAlpha):
        short = {**entry, "digits": entry["digits"][:-1]}
        io.groupspec_from_dict({**good, "alpha": {"kind": "table", "entries": [short]}})
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(BadParameters):
        io.load_groupspec(str(bad))


def test_report_round_trip():
    rep = b0_coinvariants(canonical_group(5, 6, 10))
    rec = io.report_record(rep, doc=2, theorem1=False, agree_flags={"bounds": True})
    text = io.dumps(io.report_file([rec], note="x"))
    data = io.load_report(text)
    assert data["records"][0]["invariants"] == [5, 5]
    assert data["records"][0]["rank"] == 2 and data["records"][0]["exponent"] == 5
    assert io.dumps(data) == text
    with pytest.raises(BadParameters):
        io.load_report('{"schema": "nope"}')


rows = st.fixed_dictionaries({
    "p": st.sampled_from([5, 7]), "m": st.integers(4, 9), "n": st.integers(5, 16),
    "x": st.integers(0, 4), "y": st.integers(0, 6),
    "formula_invariants": st.lists(st.sampled_from([5, 25, 125]), max_size=3),
    "computed_invariants": st.lists(st.sampled_from([5, 25, 125]), max_size=3),
    "agree": st.booleans(),
})


@given(st.lists(rows, max_size=6))
def test_csv_round_trip(rs):
    text = io.table_rows_to_csv(rs)
    assert text.splitlines()[0] == ",".join(io.TABLE_COLUMNS)
    assert io.table_rows_from_csv(text) == rs

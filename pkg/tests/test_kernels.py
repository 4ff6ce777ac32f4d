from math import gcd

import pytest
from hypothesis import given, strategies as st

from maxclass import kernels
from maxclass.kernels import CSRBuilder, invariants_from_counts, sparse_snf_mod
from maxclass.zlinalg import smith_form

needs_compiled = pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled extension not built")


def reference(rows, ncols, D, p):
    """Counts via the dense integer Smith form, reduced modulo ``D``."""
    e = 0
    while p ** (e + 1) <= D:
        e += 1
    dense = [[r.get(c, 0) for c in range(ncols)] for r in rows] or [[0] * ncols]
    diag = smith_form(dense, ncols)
    diag = diag + [0] * (ncols - len(diag))
    counts, free = [0] * e, 0
    for d in diag:
        g = gcd(d, D)
        t = 0
        while g % p == 0 and t < e:
            g //= p
            t += 1
        if t == e:
            free += 1
        else:
            counts[t] += 1
    return counts, free


@st.composite
def sparse_problems(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    e = draw(st.integers(1, 4))
    ncols = draw(st.integers(1, 7))
    nrows = draw(st.integers(0, 9))
    rows = []
    for _ in range(nrows):
        cols = draw(st.lists(st.integers(0, ncols - 1), max_size=4, unique=True))
        rows.append({c: draw(st.integers(-30, 30)) for c in cols})
    return p, p ** e, ncols, rows


def run(rows, ncols, D, p, backend):
    b = CSRBuilder()
    for r in rows:
        b.add_row(r)
    return sparse_snf_mod(ncols, b.indptr, b.indices, b.data, D, p, backend=backend)


@given(sparse_problems())
def test_python_kernel_matches_dense_smith(case):
    p, D, ncols, rows = case
    counts, free = run(rows, ncols, D, p, "python")
    assert (list(counts), free) == reference(rows, ncols, D, p)


@needs_compiled
@given(sparse_problems())
def test_compiled_kernel_matches_python(case):
    p, D, ncols, rows = case
    assert run(rows, ncols, D, p, "compiled") == run(rows, ncols, D, p, "python")


def test_invariants_from_counts():
    assert invariants_from_counts([3, 1, 2], 1, 27, 3) == [3, 9, 9, 27]
    assert invariants_from_counts([0], 0, 5, 5) == []


def test_bad_modulus_rejected():
    with pytest.raises(ValueError):
        run([{0: 1}], 1, 12, 2, "python")
    with pytest.raises(ValueError):
        run([{0: 1}], 1, 4, 2, "fortran")


@needs_compiled
def test_compiled_falls_back_above_int32():
    D = 3 ** 21
    assert D >= 2 ** 31
    rows = [{0: 3, 1: 1}, {1: 9}]
    assert run(rows, 2, D, 3, "compiled") == run(rows, 2, D, 3, "python")


def test_pure_python_env_selects_fallback(monkeypatch):
    import importlib
    monkeypatch.setenv("MAXCLASS_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("MAXCLASS_PURE_PYTHON")
        importlib.reload(kernels)

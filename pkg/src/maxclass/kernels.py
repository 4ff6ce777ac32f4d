"""Backend selection for the sparse elimination kernel.

The compiled extension is used when it imports; set
``MAXCLASS_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
from __future__ import annotations

import os
from array import array
from typing import Sequence

from . import _pykernels

_compiled = None
if os.environ.get("MAXCLASS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def sparse_snf_mod(ncols: int, indptr: Sequence[int], indices: Sequence[int],
                   data: Sequence[int], modulus: int, prime: int,
                   backend: str | None = None) -> tuple[list[int], int]:
    """Dispatch to the selected backend; ``backend`` may force ``"python"`` or ``"compiled"``."""
    use = backend or BACKEND
    if use == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        if modulus < 2 ** 31:
            return _compiled.sparse_snf_mod(ncols, indptr, indices, data, modulus, prime)
    elif use != "python":
        raise ValueError(f"unknown backend {use!r}")
    return _pykernels.sparse_snf_mod(ncols, indptr, indices, data, modulus, prime)


def invariants_from_counts(counts: Sequence[int], free: int, modulus: int, prime: int) -> list[int]:
    """Nontrivial invariant factors (ascending) from a kernel result."""
    out: list[int] = []
    for t, k in enumerate(counts):
        if t:
            out.extend([prime ** t] * k)
    out.extend([modulus] * free)
    return out


class CSRBuilder:
    """Accumulates sparse rows into CSR arrays."""

    def __init__(self) -> None:
        self.indptr = array("q", [0])
        self.indices = array("q")
        self.data = array("q")

    def add_row(self, row: dict[int, int]) -> None:
        for c, v in row.items():
            if v:
                self.indices.append(c)
                self.data.append(v)
        self.indptr.append(len(self.indices))

    @property
    def nrows(self) -> int:
        return len(self.indptr) - 1

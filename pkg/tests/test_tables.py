import json
import random

import pytest

from maxclass.errors import BadParameters, ModelInvalid, TooLarge
from maxclass.tables import (FiniteGroupTable, classical_2group, configured_cap, cyclic_group,
                             direct_product, maximal_class_81)


@pytest.mark.parametrize("kind", ["dihedral", "semidihedral", "quaternion"])
@pytest.mark.parametrize("n", [4, 5, 6])
def test_classical_2groups_are_maximal_class(kind, n):
    T = classical_2group(kind, n)
    assert T.N == 2 ** n
    assert T.is_maximal_class()
    assert T.nilpotency_class() == n - 1
    assert len(T.center()) == 2


def test_classical_2group_element_orders():
    # dihedral: many involutions; quaternion: a single involution
    D = classical_2group("dihedral", 4).order_statistics()
    Q = classical_2group("quaternion", 4).order_statistics()
    assert D[2] == 9 and Q[2] == 1


def test_semidihedral_has_cyclic_index_two_subgroup():
    T = classical_2group("semidihedral", 4)
    assert max(T.element_order(a) for a in range(T.N)) == 8


# frozen from an independent table build and checked against the
# counts of elements of order 3 and 9 in the four class-3 groups of order 81
ORDER_81_STATS = {
    "wreath": {1: 1, 3: 44, 9: 36},
    "ring-split": {1: 1, 3: 62, 9: 18},
    "ring-nonsplit": {1: 1, 3: 8, 9: 72},
    "c9xc3": {1: 1, 3: 26, 9: 54},
}


def test_order_81_groups():
    groups = maximal_class_81()
    assert sorted(groups) == sorted(ORDER_81_STATS)
    for name, T in groups.items():
        assert T.N == 81
        assert T.is_maximal_class(), name
        assert T.order_statistics() == ORDER_81_STATS[name]


def test_relabel_preserves_invariants():
    T = classical_2group("semidihedral", 5)
    perm = list(range(T.N))
    random.Random(3).shuffle(perm)
    U = T.relabel(perm)
    assert U.order_statistics() == T.order_statistics()
    assert len(U.center()) == len(T.center())
    assert U.is_maximal_class()


def test_json_round_trip():
    T = direct_product(cyclic_group(2), cyclic_group(4))
    data = json.loads(json.dumps(T.to_json()))
    U = FiniteGroupTable.from_json(data)
    assert U.table == T.table


def test_bad_tables_rejected():
    with pytest.raises(ModelInvalid):
        FiniteGroupTable([[0, 1], [0, 1]])
    with pytest.raises(ModelInvalid):
        # latin square without associativity: a quasigroup of order 5
        FiniteGroupTable([[(2 * a + 3 * b) % 5 for b in range(5)] for a in range(5)])
    with pytest.raises(BadParameters):
        FiniteGroupTable.from_json({"schema": "other", "table": [[0]]})


def test_cap(monkeypatch):
    monkeypatch.setenv("MAXCLASS_ORACLE_CAP", "32")
    assert configured_cap() == 32
    with pytest.raises(TooLarge):
        classical_2group("dihedral", 6)
    assert configured_cap(100) == 100


def test_group_theory_helpers():
    T = direct_product(cyclic_group(3), cyclic_group(3))
    assert T.is_abelian()
    assert len(T.generating_set()) == 2
    D = classical_2group("dihedral", 4)
    assert not D.is_abelian()
    assert len(D.commutator_subgroup(range(D.N), range(D.N))) == 4
    assert [len(S) for S in D.lower_central_series()] == [16, 4, 2, 1]

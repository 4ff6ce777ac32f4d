import itertools

import pytest
from hypothesis import given, strategies as st

from maxclass.cyclotomic import (AlphaMap, CycElement, alpha_canonical, alpha_closed_form,
                                 alpha_solve, carry_coefficients, check_parameters, choose_a,
                                 cyc_div_kappa, cyc_theta_pow, cyc_valuation, normalize,
                                 primitive_root, relation_rows, ring_exponent, sigma, unit_u,
                                 wedge_pairs)
from maxclass.errors import (BadParameters, BadResidue, InvalidAlpha, NotDivisible,
                             PrecisionMismatch, UnsupportedPrime)
from maxclass.polyref import PolyRing


@st.composite
def ring_elements(draw, count=2):
    p = draw(st.sampled_from([3, 5, 7]))
    j = draw(st.integers(1, 8))
    xs = [draw(st.lists(st.integers(0, p - 1), min_size=j, max_size=j)) for _ in range(count)]
    return p, j, xs


@given(ring_elements())
def test_product_matches_polynomial_model(case):
    p, j, (x, y) = case
    R = PolyRing(p)
    got = (CycElement(p, j, x) * CycElement(p, j, y)).digits
    assert R.congruent(R.from_digits(got), R.mul(R.from_digits(x), R.from_digits(y)), j)


@given(ring_elements())
def test_sum_and_difference_match_polynomial_model(case):
    p, j, (x, y) = case
    R = PolyRing(p)
    X, Y = CycElement(p, j, x), CycElement(p, j, y)
    fx, fy = R.from_digits(x), R.from_digits(y)
    assert R.congruent(R.from_digits((X + Y).digits), R.add(fx, fy), j)
    assert R.congruent(R.from_digits((X - Y).digits), R.sub(fx, fy), j)


@given(ring_elements(count=1), st.integers(-20, 20))
def test_theta_action_matches_polynomial_model(case, r):
    p, j, (x,) = case
    R = PolyRing(p)
    got = cyc_theta_pow(CycElement(p, j, x), r).digits
    assert R.congruent(R.from_digits(got), R.theta(R.from_digits(x), r % p), j)


@given(ring_elements(count=1), st.integers(-200, 200))
def test_integer_embedding_matches_polynomial_model(case, k):
    p, j, _ = case
    R = PolyRing(p)
    assert R.congruent(R.from_digits(CycElement.from_int(p, j, k).digits), R.from_int(k), j)


@given(ring_elements(count=1))
def test_valuation_matches_polynomial_model(case):
    p, j, (x,) = case
    R = PolyRing(p)
    assert cyc_valuation(CycElement(p, j, x)) == R.valuation(R.from_digits(x), j)


@given(ring_elements(count=3))
def test_ring_axioms(case):
    p, j, (x, y, z) = case
    X, Y, Z = (CycElement(p, j, v) for v in (x, y, z))
    assert (X * Y) * Z == X * (Y * Z)
    assert X * (Y + Z) == X * Y + X * Z
    assert X * Y == Y * X
    assert X + (-X) == CycElement.zero(p, j)


@given(st.sampled_from([3, 5, 7]), st.integers(1, 10),
       st.lists(st.integers(-10**4, 10**4), min_size=0, max_size=12))
def test_normalize_is_idempotent_and_canonical(p, j, coeffs):
    d = normalize(p, j, coeffs)
    assert len(d) == j and all(0 <= t < p for t in d)
    assert normalize(p, j, d) == d


@given(ring_elements(count=1))
def test_theta_has_order_p(case):
    p, j, (x,) = case
    X = CycElement(p, j, x)
    assert cyc_theta_pow(X, p) == X
    assert cyc_theta_pow(cyc_theta_pow(X, 2), -2) == X


@given(ring_elements(count=1))
def test_division_by_kappa_inverts_multiplication(case):
    p, j, (x,) = case
    if j < 2:
        return
    X = CycElement(p, j, x)
    kX = X * CycElement.kappa_pow(p, j, 1)
    assert cyc_div_kappa(kX) == X.reduce(j - 1)


def test_division_by_kappa_rejects_units():
    with pytest.raises(NotDivisible):
        cyc_div_kappa(CycElement.one(5, 4))


def test_carry_rule_and_relations():
    assert carry_coefficients(5) == (10, 10, 5, 1)
    assert carry_coefficients(3) == (3, 1)
    rows = relation_rows(5, 6)
    assert rows[0] == [5, 10, 10, 5, 1, 0]
    assert all(rows[u][u] == 5 and not any(rows[u][:u]) for u in range(6))


@pytest.mark.parametrize("p,j,expected", [(5, 1, 5), (5, 4, 5), (5, 5, 25), (7, 13, 343), (3, 0, 1)])
def test_ring_exponent(p, j, expected):
    assert ring_exponent(p, j) == expected


def test_ring_exponent_is_additive_order_of_one():
    for p in (3, 5, 7):
        for j in range(1, 9):
            E = ring_exponent(p, j)
            assert not CycElement.from_int(p, j, E)
            assert CycElement.from_int(p, j, E // p)


@given(ring_elements(count=1), st.integers(1, 6))
def test_sigma_matches_substitution_in_polynomial_model(case, b):
    p, j, (x,) = case
    if b % p == 0:
        return
    R = PolyRing(p)
    f = R.from_digits(x)
    substituted = [0] * (b * len(f) + 1)
    for i, c in enumerate(f):
        substituted[i * b] += c
    got = sigma(CycElement(p, j, x), b).digits
    assert R.congruent(R.from_digits(got), R.reduce(substituted), j)


def test_unit_u_is_a_unit_and_rejects_zero_residue():
    for a in range(1, 5):
        assert cyc_valuation(unit_u(5, 6, a)) == 0
    with pytest.raises(BadResidue):
        unit_u(5, 6, 5)


@pytest.mark.parametrize("p,expected", [(5, (2, 2)), (7, (3, 2)), (11, (2, 4)), (13, (2, 5))])
def test_choose_a_values(p, expected):
    # frozen from an independent run of the selection rule
    assert choose_a(p) == expected


def test_primitive_root_has_full_order():
    for p in (3, 5, 7, 11, 13, 17):
        g = primitive_root(p)
        assert len({pow(g, e, p) for e in range(1, p)}) == p - 1


def test_parameter_checks():
    with pytest.raises(UnsupportedPrime):
        check_parameters(9, 4, 5)
    with pytest.raises(UnsupportedPrime):
        check_parameters(2, 4, 5)
    with pytest.raises(BadParameters):
        check_parameters(5, 4, 7)
    with pytest.raises(BadParameters):
        check_parameters(5, 3, 4)
    with pytest.raises(UnsupportedPrime):
        choose_a(3)


def test_precision_mismatch():
    with pytest.raises(PrecisionMismatch):
        CycElement(5, 3, [1]) + CycElement(5, 4, [1])


# -- commutator maps ----------------------------------------------------------

@pytest.mark.parametrize("p,m,n", [(5, 4, 5), (5, 5, 8), (5, 6, 10), (7, 4, 6), (7, 6, 9)])
def test_canonical_map_matches_closed_form(p, m, n):
    A = alpha_canonical(p, m, n)
    for u, v in wedge_pairs(m - 1):
        assert A.value(u, v) == alpha_closed_form(p, m, n, A.a, u, v)


@pytest.mark.parametrize("p,m,n", [(5, 4, 5), (5, 5, 7), (5, 6, 9), (7, 4, 6)])
def test_canonical_map_in_solution_group(p, m, n):
    sols = alpha_solve(p, m, n)
    assert sols.contains(alpha_canonical(p, m, n))
    assert sols.contains(sols.zero)


@pytest.mark.parametrize("p,m,n", [(5, 4, 5), (5, 5, 7), (5, 6, 10), (7, 5, 8)])
def test_canonical_map_is_surjective(p, m, n):
    assert alpha_canonical(p, m, n).is_surjective()


@given(st.sampled_from([(5, 4, 6), (5, 5, 7), (7, 4, 6)]), st.data())
def test_canonical_map_bilinear_alternating_equivariant(case, data):
    p, m, n = case
    A = alpha_canonical(p, m, n)
    k = m - 1
    vec = st.lists(st.integers(0, p - 1), min_size=k, max_size=k)
    x, y, z = data.draw(vec), data.draw(vec), data.draw(vec)
    X, Y, Z = (CycElement(p, k, v) for v in (x, y, z))
    assert A(X + Y, Z) == A(X, Z) + A(Y, Z)
    assert A(X, X) == CycElement.zero(p, n - m)
    assert A(X, Y) == -A(Y, X)
    r = data.draw(st.integers(1, p - 1))
    assert A(cyc_theta_pow(X, r), cyc_theta_pow(Y, r)) == cyc_theta_pow(A(X, Y), r)


def brute_valid_tables(p, m, n):
    """Every table on the basis pairs, filtered by the validation routine."""
    pairs = wedge_pairs(m - 1)
    d = n - m
    count = 0
    for flat in itertools.product(range(p), repeat=d * len(pairs)):
        table = {pr: flat[i * d:(i + 1) * d] for i, pr in enumerate(pairs)}
        try:
            AlphaMap(p, m, n, table)
        except InvalidAlpha:
            continue
        count += 1
    return count


@pytest.mark.parametrize("p,m,n", [(3, 4, 5), (3, 4, 6), (5, 4, 5), (3, 5, 6)])
def test_solver_group_order_matches_enumeration(p, m, n):
    # d * |pairs| small enough to enumerate
    assert alpha_solve(p, m, n).order == brute_valid_tables(p, m, n)


def test_p3_solutions_have_a_surjective_generator():
    sols = alpha_solve(3, 4, 5)
    assert sols.orders == (3,)
    assert any(a.is_surjective() for a in sols.generators)
    assert sols.zero.is_zero() and not sols.zero.is_surjective()


def test_invalid_table_rejected():
    with pytest.raises(InvalidAlpha):
        AlphaMap(5, 4, 5, {(0, 1): (0,), (0, 2): (1,), (1, 2): (0,)})
    with pytest.raises(InvalidAlpha):
        AlphaMap(5, 4, 5, {(0, 3): (1,)})


def test_abelian_case_map_is_empty_and_surjective():
    A = alpha_canonical(5, 5, 5)
    assert A.is_zero() and A.is_surjective()

import pytest
from hypothesis import given, strategies as st

from conftest import canonical_group, p3_surjective_group
from maxclass.cyclotomic import alpha_solve
from maxclass.errors import BadParameters
from maxclass.group import MaxClassGroup
from maxclass.presentation import (T, T1, Comm, FinitePresentation, Gen, Mul, Pow, comm,
                                   emit_presentation, evaluate, normal_form_word, parse, render,
                                   t_k)


def words(depth=3):
    base = st.sampled_from([T, T1])
    return st.recursive(
        base,
        lambda inner: st.one_of(
            st.builds(Pow, inner, st.integers(-4, 6).filter(lambda e: e not in (0, 1))),
            st.builds(lambda a, b: Mul((a, b)), inner, inner),
            st.builds(Comm, inner, inner),
        ),
        max_leaves=depth * 3,
    )


@given(words())
def test_render_parse_round_trip(w):
    # products flatten on parsing, so compare the canonical text
    text = render(w)
    assert render(parse(text)) == text


@given(words())
def test_parsed_word_evaluates_identically(w):
    G = canonical_group(5, 4, 5)
    assert evaluate(parse(render(w)), G) == evaluate(w, G)


def test_t_k_is_left_normed():
    assert t_k(1) == T1
    assert t_k(3) == Comm(Comm(T1, T), T)
    assert render(t_k(4)) == "[t1,t,t,t]"
    assert comm(T1, T, T1) == Comm(Comm(T1, T), T1)


@pytest.mark.parametrize("p,expected", [(5, {"class": 1, "power": 2, "commutator": 2}),
                                        (7, {"class": 1, "power": 2, "commutator": 3})])
def test_relator_census(p, expected):
    P = emit_presentation(canonical_group(p, 4, 5))
    assert P.census() == expected
    assert all(P.check(canonical_group(p, 4, 5)))


def test_p3_census_and_check():
    G = p3_surjective_group()
    P = emit_presentation(G)
    assert P.census() == {"class": 1, "power": 2, "commutator": 1}
    assert all(P.check(G))


@pytest.mark.parametrize("case", [(5, 5, 7), (5, 6, 9), (7, 5, 8)])
def test_relators_hold_in_larger_groups(case):
    G = canonical_group(*case)
    assert all(emit_presentation(G).check(G))


def test_relators_separate_commutator_maps():
    # the abelian-P1 group of the same order violates the canonical relators
    G = canonical_group(5, 4, 5)
    H = MaxClassGroup(5, 5, 4, alpha_solve(5, 4, 5).zero)
    P = emit_presentation(G)
    assert not all(P.check(H))


def test_text_round_trip():
    G = canonical_group(7, 4, 6)
    P = emit_presentation(G)
    text = P.to_text()
    assert text.endswith("\n") and len(text.splitlines()) == len(P.relators)
    Q = FinitePresentation.from_text(text)
    assert Q.relators == P.relators
    assert all(Q.check(G))


@given(st.integers(0, 4), st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_normal_form_word_evaluates_back(e, digits):
    G = canonical_group(5, 4, 5)
    g = G.element(e, digits)
    assert evaluate(normal_form_word(G, g), G) == g


def test_parse_errors():
    with pytest.raises(BadParameters):
        parse("t ^ x")
    with pytest.raises(BadParameters):
        parse("[t, t1")
    assert parse(" t1 * t ") == Mul((T1, T))
    assert parse("t") == Gen("t")

import itertools

import pytest
from hypothesis import given, strategies as st

from leibniz2.exterior_calculus import (
    DegreeError, PolyForm, PolyMultivector, d, dx, interior, interior_multi, lie_derivative, parse_form,
    partial, schouten_sq, sharp, triple_sharp, var, vf_bracket, wedge,
)
from leibniz2.poly import Poly, parse_poly
import oracles as o
from strategies import forms, multivectors, vector_fields

N = 3


# ---------------------------------------------------------------------------
# documented examples

def test_examples():
    x1 = var(4, 1)
    assert d(dx(4, 2, 3, 4, coeff=x1)) == dx(4, 1, 2, 3, 4)
    assert interior(partial(4, 2), dx(4, 1, 2)) == -dx(4, 1)
    assert interior(partial(3, 1), dx(3, 1)) == PolyForm.basis(3, (), 1)
    assert interior_multi([partial(4, 1), partial(4, 2), partial(4, 3)], dx(4, 1, 2, 3, 4)) == dx(4, 4)
    assert interior_multi([partial(2, 1), partial(2, 2)], dx(2, 1, 2)) == PolyForm.basis(2, (), 1)
    assert lie_derivative(partial(3, 1), dx(3, 2, coeff=var(3, 1))) == dx(3, 2)
    assert lie_derivative(partial(3, 1), dx(3, 1)) == PolyForm.zero(3, 1)
    assert vf_bracket(partial(3, 1, coeff=var(3, 1)), partial(3, 1)) == -partial(3, 1)
    pi = partial(3, 1, 2)
    assert sharp(pi, dx(3, 1)) == partial(3, 2)
    assert sharp(pi, dx(3, 2)) == -partial(3, 1)
    assert schouten_sq(pi) == PolyMultivector.zero(3, 3)
    bad = pi + partial(3, 2, 3, coeff=var(3, 2))
    assert schouten_sq(bad) == partial(3, 1, 2, 3, coeff=-2)
    assert triple_sharp(pi, PolyForm.zero(3, 3)) == PolyMultivector.zero(3, 3)
    assert wedge(dx(3, 1), dx(3, 1)) == PolyForm.zero(3, 2)


def test_text_and_parse():
    w = dx(3, 2, 3, coeff=parse_poly("x1 x2", 3))
    assert w.to_text() == "(x1 x2) dx2^dx3"
    assert parse_form(3, 2, [[[3, 2], "x1 x2"]]) == -w
    assert PolyForm.from_pairs(3, 2, w.to_pairs()) == w
    assert partial(3, 1, 2).to_text() == "(1) d1^d2"


def test_degree_errors():
    with pytest.raises(DegreeError):
        d(dx(2, 1, 2))
    with pytest.raises(DegreeError):
        wedge(dx(2, 1, 2), dx(2, 1))
    with pytest.raises(DegreeError):
        interior(partial(2, 1), PolyForm.basis(2, (), 1))


# ---------------------------------------------------------------------------
# oracle comparisons

@given(st.integers(0, N - 1).flatmap(lambda k: forms(N, k)))
def test_d_matches_oracle(w):
    assert o.same(d(w), o.o_d(N, w.degree, o.to_alt(w)))


@given(vector_fields(N), st.integers(1, N).flatmap(lambda k: forms(N, k)))
def test_interior_matches_oracle(X, w):
    assert o.same(interior(X, w), o.o_interior(N, w.degree, o.to_alt(X), o.to_alt(w)))


@given(st.integers(0, 2).flatmap(lambda k: st.tuples(forms(N, k), forms(N, N - 2 if k == 2 else 1))))
def test_wedge_matches_oracle(ab):
    a, b = ab
    assert o.same(wedge(a, b), o.o_wedge(N, a.degree, o.to_alt(a), b.degree, o.to_alt(b)))


@given(vector_fields(N), st.integers(0, N).flatmap(lambda k: forms(N, k)))
def test_lie_derivative_matches_coordinate_formula(X, w):
    assert o.same(lie_derivative(X, w), o.o_lie(N, w.degree, o.to_alt(X), o.to_alt(w)))


@given(vector_fields(N), vector_fields(N))
def test_vf_bracket_matches_oracle(X, Y):
    assert o.same(vf_bracket(X, Y), o.o_vf_bracket(N, o.to_alt(X), o.to_alt(Y)))


@given(multivectors(N, 2), forms(N, 1))
def test_sharp_matches_oracle(pi, xi):
    assert o.same(sharp(pi, xi), o.o_sharp(N, o.to_alt(pi), o.to_alt(xi)))


@given(multivectors(4, 2, max_terms=3))
def test_schouten_matches_oracle(pi):
    assert o.same(schouten_sq(pi), o.o_schouten_sq(4, o.to_alt(pi)))


@given(multivectors(4, 2, max_degree=1), forms(4, 3, max_degree=1))
def test_triple_sharp_matches_oracle(pi, h):
    assert o.same(triple_sharp(pi, h), o.o_triple_sharp(4, o.to_alt(pi), o.to_alt(h)))


# ---------------------------------------------------------------------------
# algebraic laws

@given(st.integers(0, N - 2).flatmap(lambda k: forms(N, k)))
def test_d_squared_is_zero(w):
    assert d(d(w)) == PolyForm.zero(N, w.degree + 2)


@given(vector_fields(N), st.integers(1, N).flatmap(lambda k: forms(N, k)))
def test_interior_squared_is_zero(X, w):
    if w.degree >= 2:
        assert interior(X, interior(X, w)) == PolyForm.zero(N, w.degree - 2)


@given(forms(N, 1), forms(N, 2))
def test_graded_commutativity(a, b):
    assert wedge(a, b) == wedge(b, a)
    assert wedge(a, a) == PolyForm.zero(N, 2)


@given(forms(N, 1), forms(N, 1))
def test_d_is_a_graded_derivation(a, b):
    assert d(wedge(a, b)) == wedge(d(a), b) - wedge(a, d(b))


@given(vector_fields(N), forms(N, 1), forms(N, 1))
def test_lie_derivative_is_a_derivation(X, a, b):
    lhs = lie_derivative(X, wedge(a, b))
    assert lhs == wedge(lie_derivative(X, a), b) + wedge(a, lie_derivative(X, b))


@given(vector_fields(N), vector_fields(N), forms(N, 2))
def test_commutator_of_lie_derivatives(X, Y, w):
    lhs = lie_derivative(X, lie_derivative(Y, w)) - lie_derivative(Y, lie_derivative(X, w))
    assert lhs == lie_derivative(vf_bracket(X, Y), w)


@given(vector_fields(N), vector_fields(N), forms(N, 2))
def test_interior_of_bracket(X, Y, w):
    lhs = interior(vf_bracket(X, Y), w)
    assert lhs == lie_derivative(X, interior(Y, w)) - interior(Y, lie_derivative(X, w))


@given(multivectors(N, 2), forms(N, 3), st.permutations(range(N)))
def test_naturality_under_permutation(pi, h, perm):
    assert schouten_sq(pi.permute_variables(perm)) == schouten_sq(pi).permute_variables(perm)
    assert (triple_sharp(pi.permute_variables(perm), h.permute_variables(perm))
            == triple_sharp(pi, h).permute_variables(perm))


def _poisson_jacobi_holds(pi, n):
    """Jacobi for {f,g} = pi(df, dg) on monomials of degree <= 2."""
    from leibniz2.exterior_calculus import d_function, pair

    def br(f, g):
        return pair(d_function(g), sharp(pi, d_function(f)))

    mons = [Poly.monomial(n, e) for deg in range(1, 3)
            for e in set(tuple(sum(1 for c in combo if c == i) for i in range(n))
                         for combo in itertools.combinations_with_replacement(range(n), deg))]
    for f, g, h in itertools.combinations(mons, 3):
        if br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g)) != Poly(n):
            return False
    return True


@pytest.mark.parametrize("pi", [
    partial(3, 1, 2),
    partial(3, 1, 2, coeff=var(3, 3)),
    partial(3, 1, 2) + partial(3, 2, 3, coeff=var(3, 2)),
    partial(3, 1, 2, coeff=var(3, 3)) + partial(3, 2, 3, coeff=var(3, 1)),
    partial(3, 1, 2, coeff=var(3, 3)) + partial(3, 1, 3, coeff=var(3, 2)),
    partial(3, 1, 2, coeff=var(3, 1)) + partial(3, 2, 3, coeff=var(3, 1)),
], ids=lambda p: p.to_text())
def test_schouten_vanishes_exactly_for_poisson(pi):
    assert _poisson_jacobi_holds(pi, 3) is (schouten_sq(pi) == PolyMultivector.zero(3, 3))


def test_non_poisson_example_fails_jacobi():
    assert not _poisson_jacobi_holds(partial(3, 1, 2) + partial(3, 2, 3, coeff=var(3, 2)), 3)

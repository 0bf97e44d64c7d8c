"""Hypothesis strategies for polynomials, forms and multivectors."""
from fractions import Fraction

from hypothesis import strategies as st

from leibniz2.exterior_calculus import PolyForm, PolyMultivector
from leibniz2.poly import Poly

small_rationals = st.fractions(min_value=-3, max_value=3, max_denominator=3)
small_ints = st.integers(-3, 3)


@st.composite
def polys(draw, n: int, max_degree: int = 2, max_terms: int = 3, coeffs=small_ints):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exp = [0] * n
        for _ in range(draw(st.integers(0, max_degree))):
            exp[draw(st.integers(0, n - 1))] += 1
        terms[tuple(exp)] = draw(coeffs)
    return Poly(n, terms)


@st.composite
def graded(draw, cls, n: int, degree: int, max_degree: int = 2, max_terms: int = 2):
    import itertools
    idxs = list(itertools.combinations(range(n), degree))
    comps = {}
    for _ in range(draw(st.integers(0, max_terms))):
        comps[draw(st.sampled_from(idxs))] = draw(polys(n, max_degree, 2))
    return cls.from_components(n, degree, comps)


def forms(n, degree, **kw):
    return graded(PolyForm, n, degree, **kw)


def multivectors(n, degree, **kw):
    return graded(PolyMultivector, n, degree, **kw)


def vector_fields(n, **kw):
    return multivectors(n, 1, **kw)


__all__ = ["Fraction", "forms", "multivectors", "polys", "small_ints", "small_rationals", "vector_fields"]

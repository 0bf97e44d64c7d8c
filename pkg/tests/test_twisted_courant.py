import pytest
from hypothesis import given, strategies as st

from leibniz2 import io
from leibniz2.exterior_calculus import (
    apply_vf, d_function, dx, partial, var,
)
from leibniz2.poly import Poly
from leibniz2.twisted_courant import (
    ExactTcaData, GeneralizedSection, axiom_sections, b_f2, b_transform, build_leibniz2,
    check_b_intertwine, check_b_morphism, check_tca_axioms, coordinate_forms, coordinate_sections,
    default_sections, dorfman, l3_exact, mixed_sections, pairing,
)
import oracles as o
from strategies import forms, polys, vector_fields

N = 3


def sections(n=N):
    return st.builds(GeneralizedSection, vector_fields(n, max_degree=2), forms(n, 1, max_degree=2))


def _oracle_section(e):
    return o.to_alt(e.vf), o.to_alt(e.form)


@given(sections(), sections(), forms(N, 3, max_degree=1))
def test_dorfman_matches_oracle(e1, e2, h):
    t = ExactTcaData(N, h)
    vf, form = o.o_dorfman(N, o.to_alt(h), _oracle_section(e1), _oracle_section(e2))
    got = dorfman(t, e1, e2)
    assert o.same(got.vf, vf) and o.same(got.form, form)


@given(sections(4), sections(4), forms(4, 3, max_degree=1))
def test_dorfman_matches_oracle_on_r4(e1, e2, h):
    t = ExactTcaData(4, h)
    vf, form = o.o_dorfman(4, o.to_alt(h), _oracle_section(e1), _oracle_section(e2))
    got = dorfman(t, e1, e2)
    assert o.same(got.vf, vf) and o.same(got.form, form)


@given(sections(), sections(), polys(N, 2), forms(N, 3, max_degree=1))
def test_leibniz_rule_anomalies(e1, e2, f, h):
    t = ExactTcaData(N, h)
    rho_f = apply_vf(e1.vf, f)
    # right argument: ordinary Leibniz rule
    assert dorfman(t, e1, e2.scale(f)) == dorfman(t, e1, e2).scale(f) + e2.scale(rho_f)
    # left argument: corrected by the pairing
    lhs = dorfman(t, e2.scale(f), e1)
    rhs = (dorfman(t, e2, e1).scale(f) - e2.scale(rho_f)
           + GeneralizedSection.of_form(d_function(f).scale(pairing(e1, e2))))
    assert lhs == rhs


@given(sections(), sections())
def test_anchor_is_a_bracket_morphism(e1, e2):
    from leibniz2.exterior_calculus import vf_bracket
    t = ExactTcaData(N, None)
    assert dorfman(t, e1, e2).vf == vf_bracket(e1.vf, e2.vf)


@given(sections(), sections(), sections(), forms(N, 3, max_degree=2))
def test_jacobi_holds_on_r3(e1, e2, e3, h):
    # dh = 0 for degree reasons on R^3
    t = ExactTcaData(N, h)
    jac = dorfman(t, e1, dorfman(t, e2, e3)) - dorfman(t, dorfman(t, e1, e2), e3) - dorfman(t, e2, dorfman(t, e1, e3))
    assert jac == GeneralizedSection.zero(N)


@given(sections(4), sections(4), sections(4))
def test_jacobi_anomaly_equals_l3_on_r4(e1, e2, e3):
    h = dx(4, 2, 3, 4, coeff=var(4, 1))
    t = ExactTcaData(4, h)
    jac = dorfman(t, e1, dorfman(t, e2, e3)) - dorfman(t, dorfman(t, e1, e2), e3) - dorfman(t, e2, dorfman(t, e1, e3))
    assert jac == GeneralizedSection.of_form(l3_exact(t, e1, e2, e3))


def test_fixture_l3_value(fixtures_dir):
    t = io.load(fixtures_dir / "tca-r4.alg").obj.data
    coords = [GeneralizedSection.of_vf(partial(4, i)) for i in (1, 2, 3)]
    got = l3_exact(t, *coords)
    H = o.o_d(4, 3, o.to_alt(t.h))
    want = H
    for i, k in zip((0, 1, 2), (4, 3, 2)):
        want = o.o_interior(4, k, {(i,): 1}, want)
    assert o.same(got, want)
    assert got == dx(4, 4)


@pytest.mark.parametrize("name", ["tca-r3.alg", "tca-b.alg"])
def test_axioms_pass_on_r3_fixtures(fixtures_dir, name):
    t = io.load(fixtures_dir / name).obj.data
    assert check_tca_axioms(t, axiom_sections(3)).passed


def test_axioms_pass_on_r4_fixture(fixtures_dir):
    t = io.load(fixtures_dir / "tca-r4.alg").obj.data
    fam = coordinate_sections(4) + mixed_sections(4)
    rep = check_tca_axioms(t, fam)
    assert rep.passed
    assert rep.notes["H"] == "(1) dx1^dx2^dx3^dx4"


def _mutated(t, drop):
    return lambda a, b: dorfman(t, a, b, drop=drop)


def test_drop_lie_breaks_invariance(fixtures_dir):
    inp = io.load(fixtures_dir / "tca-mutated.alg").obj
    assert inp.mutation == "drop-lie"
    t = inp.data
    rep = check_tca_axioms(t, axiom_sections(3), bracket=_mutated(t, "lie"))
    assert {"nonskew", "invariant", "jacobi"} <= set(rep.failed_names())
    f = rep.check("invariant").failures[0]
    # rho(d1) <d1, x1 dx1> = 1 while the mutated bracket terms vanish
    assert f.witness == ("d1", "d1", "x1 dx1")
    assert f.residual == Poly.const(3, 1)


def test_drop_interior_is_caught_by_mixed_sections():
    t = ExactTcaData(3, dx(3, 1, 2, 3, coeff=var(3, 3)))
    br = _mutated(t, "interior")
    rep = check_tca_axioms(t, axiom_sections(3), bracket=br)
    assert "nonskew" in rep.failed_names() and "jacobi" in rep.failed_names()
    # without mixed sections nonskew cannot see the missing term
    rep2 = check_tca_axioms(t, default_sections(3), bracket=br)
    assert "nonskew" not in rep2.failed_names()


def test_drop_h_with_closed_h_is_invisible():
    t = ExactTcaData(3, dx(3, 1, 2, 3))
    rep = check_tca_axioms(t, axiom_sections(3), bracket=_mutated(t, "h"))
    assert rep.passed


def test_build_leibniz2_r4_fixture(fixtures_dir):
    t = io.load(fixtures_dir / "tca-r4.alg").obj.data
    rep = build_leibniz2(t, coordinate_sections(4), coordinate_forms(4))
    assert rep.passed
    assert [c.name for c in rep.checks] == ["(a)", "(b)", "(c)", "(d)", "(e1)", "(e2)", "(e3)", "(f)"]
    assert rep.notes["l3(d1,d2,d3)"] == "(1) dx4"


def test_b_transform_and_f2():
    B = dx(3, 2, 3, coeff=var(3, 1))
    X = partial(3, 2)
    e = GeneralizedSection(X, dx(3, 1))
    got = b_transform(B, e)
    want = o.o_interior(3, 2, o.to_alt(X), o.to_alt(B))
    assert got.vf == X
    assert o.same(got.form - dx(3, 1), want)
    f2 = b_f2(B, GeneralizedSection.of_vf(partial(3, 2)), GeneralizedSection.of_vf(partial(3, 3)))
    dB = o.o_d(3, 2, o.to_alt(B))
    want = o.o_interior(3, 2, {(2,): 1}, o.o_interior(3, 3, {(1,): 1}, dB))
    assert o.same(f2, want) and f2 == dx(3, 1)


@pytest.mark.parametrize("B", [None, dx(3, 1, 2), dx(3, 2, 3, coeff=var(3, 1))], ids=str)
@pytest.mark.parametrize("h", [None, dx(3, 1, 2, 3, coeff=var(3, 3))], ids=str)
def test_b_field_checks_on_r3(B, h):
    fam = default_sections(3)
    assert check_b_intertwine(B, h, fam, n=3).passed
    assert check_b_morphism(B, h, fam, n=3).passed


def test_b_intertwine_fails_without_shift():
    # e^B is not an automorphism of the same bracket when dB != 0
    B = dx(3, 2, 3, coeff=var(3, 1))
    t = ExactTcaData(3, None)
    e1, e2 = (GeneralizedSection.of_vf(partial(3, i)) for i in (2, 3))
    lhs = b_transform(B, dorfman(t, e1, e2))
    rhs = dorfman(t, b_transform(B, e1), b_transform(B, e2))
    assert lhs != rhs


@given(sections())
def test_section_dict_round_trip(e):
    assert GeneralizedSection.from_dict(N, e.to_dict()) == e

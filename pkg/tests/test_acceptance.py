"""Acceptance criteria, each run exactly and timed against its budget.

A one-line PASS/FAIL summary per criterion is printed at the end of the
pytest session (and to stdout under ``-s``).
"""
import functools
import itertools
import random
import time

from leibniz2 import io
from leibniz2.algebra_core import LinearMap
from leibniz2.cli import main
from leibniz2.crossed_module import crossed_to_dg, dg_to_crossed, random_crossed_module
from leibniz2.dirac import (
    check_graph_dirac, check_h_twisted_lie_algebroid, check_lie2, check_twisted_poisson,
    l3_twisted, pi_bracket,
)
from leibniz2.exterior_calculus import PolyMultivector, dx, partial, sharp, var, vf_bracket
from leibniz2.leibniz_cohomology import coboundary
from leibniz2.omni import (
    DglaAutomorphism, build_end, build_omni, check_dgla_automorphism, inner_automorphism,
    random_chain_automorphism, scalar_automorphism, search_f2, standard_complexes,
)
from leibniz2.poly import Poly
from leibniz2.sh_leibniz import check_sh_leibniz
from leibniz2.twisted_courant import (
    ExactTcaData, GeneralizedSection, axiom_sections, build_leibniz2, check_b_intertwine,
    check_b_morphism, check_tca_axioms, coordinate_forms, coordinate_sections, default_forms,
    default_sections, dorfman, l3_exact,
)

from conftest import ACCEPTANCE_LINES
from test_cohomology import random_cochain, random_pair

SH_CONDITIONS = ("(a)", "(b)", "(c)", "(d)", "(e1)", "(e2)", "(e3)", "(f)")


def criterion(number: int, budget: float):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            status, detail = "PASS", ""
            try:
                fn(*args, **kwargs)
            except AssertionError as exc:
                status, detail = "FAIL", f" ({str(exc).splitlines()[0][:80]})" if str(exc) else ""
                raise
            finally:
                elapsed = time.perf_counter() - t0
                if status == "PASS" and elapsed >= budget:
                    status, detail = "FAIL", " (over budget)"
                line = f"criterion {number}: {status} in {elapsed:.1f}s (budget {budget:g}s){detail}"
                ACCEPTANCE_LINES.append(line)
                print(line)
            assert elapsed < budget, f"criterion {number} took {elapsed:.1f}s"
        return run
    return wrap


def _fixture(fixtures_dir, name):
    return io.load(fixtures_dir / name).obj


def _all_conditions_pass(rep):
    for name in SH_CONDITIONS:
        assert rep.check(name).passed, f"{rep.subject}: {name}"


# ---------------------------------------------------------------------------

@criterion(1, 5)
def test_criterion_1_verifier_soundness(fixtures_dir, expected):
    for name in ("abelian.alg", "e2-dg.alg", "crossed-derived.alg", "omni-derived.alg", "skeletal.alg"):
        _all_conditions_pass(check_sh_leibniz(_fixture(fixtures_dir, name)))
    for name in ("tca-r3.alg", "tca-r4.alg"):
        t = _fixture(fixtures_dir, name).data
        small = t.n <= 3
        rep = build_leibniz2(t, coordinate_sections(t.n), coordinate_forms(t.n)) if not small else \
            build_leibniz2(t, coordinate_sections(t.n), default_forms(t.n))
        _all_conditions_pass(rep)
    for name in ("bad-chain.alg", "bad-leibniz.alg"):
        rep = check_sh_leibniz(_fixture(fixtures_dir, name))
        exp = expected[name]
        c = rep.check(exp["check"])
        assert not c.passed
        assert list(c.failures[0].witness) == exp["witness"]


@criterion(2, 10)
def test_criterion_2_crossed_module_round_trip():
    rng = random.Random(2024)
    for _ in range(50):
        c = random_crossed_module(rng, max_dim=3)
        assert max(c.g.space.dim, c.h.space.dim) <= 3
        a = crossed_to_dg(c)
        assert dg_to_crossed(a) == c
        assert crossed_to_dg(dg_to_crossed(a)) == a


@criterion(3, 30)
def test_criterion_3_coboundary_squares_to_zero():
    rng = random.Random(3)
    for k in range(100):
        rep = random_pair(rng)
        cochain = random_cochain(rng, rep, k % 4)
        dd = coboundary(coboundary(cochain))
        assert all(v == 0 for v in dd.array().flat), f"degree {k % 4}"


def _automorphisms():
    """(complex, End, automorphism, label) for dims <= 2."""
    rng = random.Random(4)
    out = []
    for c in standard_complexes():
        e = build_end(c)
        out.append((c, e, DglaAutomorphism.identity(e), f"identity {c}"))
        if not c.d.coefficients.any():
            out.append((c, e, scalar_automorphism(e, 2), f"scalar {c}"))
        pair = random_chain_automorphism(e, rng)
        if pair is not None:
            out.append((c, e, inner_automorphism(e, *pair), f"inner {c}"))
        if e.deg0.dim <= 6:
            ident = LinearMap.identity(e.deg0), LinearMap.identity(e.deg1)
            for v in search_f2(e, *ident).homogeneous[:2]:
                out.append((c, e, DglaAutomorphism(*ident, v), f"f2 {c}"))
    return out


@criterion(4, 30)
def test_criterion_4_omni_construction():
    autos = _automorphisms()
    assert len(autos) >= 20
    assert any(not f.f2.is_zero() for _, _, f, _ in autos)
    for c, e, f, label in autos:
        assert check_dgla_automorphism(f, e).passed, label
        rep = check_sh_leibniz(build_omni(f, c, e))
        assert rep.passed, f"{label}: {rep.failed_names()}"


def _r3_twists():
    mons = [m for deg in range(3) for m in itertools.product(range(3), repeat=3) if sum(m) == deg]
    return [dx(3, 1, 2, 3, coeff=Poly.monomial(3, list(m), 1)) for m in mons]


def _r4_twists():
    x = [var(4, i) for i in range(1, 5)]
    return [dx(4, 2, 3, 4, coeff=x[0]), dx(4, 1, 2, 3), dx(4, 1, 3, 4, coeff=x[1]),
            dx(4, 1, 2, 4, coeff=x[2] * x[2]), dx(4, 1, 2, 3, coeff=x[3]),
            dx(4, 2, 3, 4, coeff=x[0]) + dx(4, 1, 3, 4, coeff=x[0] * x[1])]


@criterion(5, 120)
def test_criterion_5_twisted_courant_leibniz2(fixtures_dir):
    for h in _r3_twists():
        _all_conditions_pass(build_leibniz2(ExactTcaData(3, h), default_sections(3), default_forms(3)))
    for h in _r4_twists():
        _all_conditions_pass(build_leibniz2(ExactTcaData(4, h), coordinate_sections(4), coordinate_forms(4)))
    t = _fixture(fixtures_dir, "tca-r4.alg").data
    d = [GeneralizedSection.of_vf(PolyMultivector.basis(4, (i,))) for i in range(3)]
    assert l3_exact(t, *d) == dx(4, 4)


@criterion(6, 60)
def test_criterion_6_tca_axioms(fixtures_dir, expected):
    for h in _r3_twists():
        assert check_tca_axioms(ExactTcaData(3, h), axiom_sections(3)).passed
    for h in _r4_twists():
        assert check_tca_axioms(ExactTcaData(4, h), coordinate_sections(4)).passed
    inp = _fixture(fixtures_dir, "tca-mutated.alg")
    drop = io.MUTATIONS[inp.mutation]
    rep = check_tca_axioms(inp.data, axiom_sections(3),
                           bracket=lambda a, b: dorfman(inp.data, a, b, drop=drop))
    c = rep.check("invariant")
    assert not c.passed and c.failures
    assert ["axiom " + c.name, list(c.failures[0].witness)] == [
        expected["tca-mutated.alg"]["check"], expected["tca-mutated.alg"]["witness"]]


@criterion(7, 60)
def test_criterion_7_b_fields(fixtures_dir):
    cases = [
        (3, [None, dx(3, 1, 2), dx(3, 2, 3, coeff=var(3, 1))],
         [None, _fixture(fixtures_dir, "tca-r3.alg").data.h], default_sections(3), default_forms(3)),
        (4, [None, dx(4, 1, 2), dx(4, 2, 3, coeff=var(4, 1))],
         [None, _fixture(fixtures_dir, "tca-r4.alg").data.h], coordinate_sections(4), coordinate_forms(4)),
    ]
    for n, Bs, hs, secs, forms in cases:
        for B, h in itertools.product(Bs, hs):
            assert check_b_intertwine(B, h, secs, n=n).passed, (n, B, h)
            assert check_b_morphism(B, h, secs, forms, n=n).passed, (n, B, h)


@criterion(8, 60)
def test_criterion_8_twisted_poisson(fixtures_dir):
    assert check_twisted_poisson(_fixture(fixtures_dir, "poisson-r3.alg").data).passed
    assert check_twisted_poisson(_fixture(fixtures_dir, "poisson-r3-h.alg").data).passed
    bad = check_twisted_poisson(_fixture(fixtures_dir, "poisson-bad.alg").data)
    assert not bad.passed
    assert bad.check("twisted Poisson").failures[0].residual == partial(3, 1, 2, 3, coeff=-2)

    for name in ("poisson-r3.alg", "poisson-r3-h.alg", "poisson-r4-open.alg", "poisson-r5.alg"):
        p = _fixture(fixtures_dir, name).data
        fam = coordinate_forms(p.n)
        lie2 = check_lie2(p, fam)
        assert lie2.passed, (name, lie2.failed_names())
        assert lie2.check("anchor").passed and lie2.check("kernel").passed
        assert check_graph_dirac(p, fam).passed, name
        assert check_h_twisted_lie_algebroid(p, fam).passed, name
        forms = [f for _, f in fam]
        for a, b in itertools.product(forms, repeat=2):
            assert sharp(p.pi, pi_bracket(p, a, b)) == vf_bracket(sharp(p.pi, a), sharp(p.pi, b))
        for a, b, c in itertools.combinations(forms, 3):
            assert sharp(p.pi, l3_twisted(p, a, b, c)) == PolyMultivector.zero(p.n, 1)
    assert check_twisted_poisson(_fixture(fixtures_dir, "poisson-r4-open.alg").data).passed


@criterion(9, 30)
def test_criterion_9_cli_end_to_end(fixtures_dir, expected, tmp_path, capsys):
    for name, exp in sorted(expected.items()):
        out = tmp_path / (name + ".json")
        code = main(["verify", str(fixtures_dir / name), "--format", "structured", "--out", str(out)])
        capsys.readouterr()
        assert code == exp["exit"], name
        if code == 2:
            continue
        text = out.read_text()
        rep = io.report_loads(text)
        assert io.report_dumps(rep) == text, name
        assert rep.passed is (code == 0)
        if "check" in exp:
            assert list(rep.check(exp["check"]).failures[0].witness) == exp["witness"], name

import random

import pytest
from hypothesis import given, strategies as st

from leibniz2 import io
from leibniz2.algebra_core import LinearMap, PreconditionError, StructureTensor
from leibniz2.omni import (
    DglaAutomorphism, build_end, build_omni, check_dgla_automorphism, check_end_identities,
    inner_automorphism, random_chain_automorphism, scalar_automorphism, search_f2, standard_complexes,
)
from leibniz2.sh_leibniz import TwoTermComplex, check_sh_leibniz, classify
import oracles

COMPLEXES = standard_complexes()
# the naive oracle is quartic in dim V0; keep its inputs small
SMALL = [c for c in COMPLEXES if c.v0.dim * c.v0.dim + c.v1.dim * c.v1.dim + c.v0.dim <= 3]


@pytest.mark.parametrize("c", COMPLEXES, ids=lambda c: f"{c.v1.dim}-{c.v0.dim}-{c.d.coefficients.tolist()}")
def test_end_dgla_is_a_dg_algebra(c):
    e = build_end(c)
    assert check_end_identities(e).passed
    assert check_sh_leibniz(e.algebra).passed
    if c in SMALL:
        assert not any(oracles.sh_leibniz_failures(e.algebra).values())


def test_identity_gives_valid_omni(fixtures_dir):
    inp = io.load(fixtures_dir / "omni-identity.alg").obj
    a = build_omni(inp.automorphism, inp.complex, inp.end)
    assert not any(oracles.sh_leibniz_failures(a).values())
    assert check_sh_leibniz(a).passed
    assert classify(a).dg


def test_scalar_fixture(fixtures_dir):
    inp = io.load(fixtures_dir / "omni-scalar.alg").obj
    assert inp.complex.d.is_zero()
    assert check_dgla_automorphism(inp.automorphism, inp.end).passed
    a = build_omni(inp.automorphism, inp.complex, inp.end)
    assert not any(oracles.sh_leibniz_failures(a).values())


def test_scalar_needs_zero_differential():
    c = TwoTermComplex.of([[1]])
    e = build_end(c)
    f = scalar_automorphism(e, 2)
    assert not check_dgla_automorphism(f, e).passed
    with pytest.raises(PreconditionError):
        build_omni(f, c, e)


def test_f2_fixture_has_nonzero_f2(fixtures_dir):
    inp = io.load(fixtures_dir / "omni-f2.alg").obj
    f = inp.automorphism
    assert not f.f2.is_zero()
    a = build_omni(f, inp.complex, inp.end)
    assert not classify(a).dg
    assert not any(oracles.sh_leibniz_failures(a).values())


@given(st.integers(0, 100_000), st.sampled_from(SMALL))
def test_inner_automorphisms(seed, c):
    e = build_end(c)
    pair = random_chain_automorphism(e, random.Random(seed))
    if pair is None:
        return
    f = inner_automorphism(e, *pair)
    assert check_dgla_automorphism(f, e).passed
    a = build_omni(f, c, e)
    assert not any(oracles.sh_leibniz_failures(a).values())


@pytest.mark.parametrize("c", COMPLEXES[:6], ids=str)
def test_f2_search_solutions_are_automorphisms(c):
    e = build_end(c)
    ident = LinearMap.identity(e.deg0), LinearMap.identity(e.deg1)
    sol = search_f2(e, *ident)
    assert sol.exists
    for v in [sol.particular] + sol.homogeneous[:3]:
        f = DglaAutomorphism(*ident, v)
        assert check_dgla_automorphism(f, e).passed


def test_f2_search_skew_subspace():
    e = build_end(TwoTermComplex.zero(1, 2))
    ident = LinearMap.identity(e.deg0), LinearMap.identity(e.deg1)
    full = search_f2(e, *ident)
    skew = search_f2(e, *ident, skew=True)
    assert len(skew.homogeneous) <= len(full.homogeneous)
    for v in skew.homogeneous:
        arr = v.coefficients
        assert (arr == -arr.transpose(0, 2, 1)).all()


def test_singular_f0_rejected():
    c = TwoTermComplex.zero(1, 1)
    e = build_end(c)
    f = DglaAutomorphism(LinearMap.zero(e.deg0, e.deg0), LinearMap.identity(e.deg1),
                         StructureTensor.zero((e.deg0, e.deg0), e.deg1))
    rep = check_dgla_automorphism(f, e)
    assert rep.check("invertible").failures[0].witness == ("f0",)

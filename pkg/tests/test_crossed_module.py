import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from leibniz2 import io
from leibniz2.algebra_core import FinSpace, PreconditionError, StructureTensor
from leibniz2.crossed_module import (
    LeibnizAlgebra, LeibnizRep, check_crossed_module, check_leibniz, check_representation,
    crossed_to_dg, dg_to_crossed, e2, e3, e4, quadruple_to_skeletal, random_crossed_module,
    skeletal_to_quadruple,
)
from leibniz2.sh_leibniz import check_sh_leibniz
import oracles


def test_e2_is_leibniz_not_lie():
    a = e2()
    assert check_leibniz(a).passed and not oracles.leibniz_failures(a)
    P = a.bracket.coefficients
    assert not np.array_equal(P, -np.swapaxes(P, 1, 2))


def test_non_leibniz_bracket_is_witnessed():
    a = LeibnizAlgebra.from_entries(2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {0: 1}})
    want = oracles.leibniz_failures(a)
    rep = check_leibniz(a)
    assert rep.check("leibniz").failure_count == len(want) > 0


@pytest.mark.parametrize("alg", [e2(), e3(), LeibnizAlgebra.abelian(2)])
def test_trivial_and_adjoint_representations(alg):
    for r in (LeibnizRep.trivial(alg, FinSpace(2)), alg.adjoint()):
        assert not any(oracles.representation_failures(r).values())
        assert check_representation(r).passed


def test_e2_left_bracket_right_zero_outcome():
    a = e2()
    r = LeibnizRep(a, a.space, a.bracket, StructureTensor.zero((a.space, a.space), a.space))
    # the exhaustive check decides; the oracle and the verifier must agree
    assert not any(oracles.representation_failures(r).values())
    assert check_representation(r).passed


def test_bad_representation_is_witnessed():
    a = e3()
    left = a.bracket
    right = StructureTensor.from_entries((a.space, a.space), a.space, {(1, 1, 1): 1})
    r = LeibnizRep(a, a.space, left, right)
    want = oracles.representation_failures(r)
    rep = check_representation(r)
    for key, name in (("left", "rep left"), ("right", "rep right"), ("mixed", "rep mixed")):
        assert rep.check(name).failure_count == len(want[key])
    assert not rep.passed


def test_e4_round_trip(fixtures_dir):
    c = io.load(fixtures_dir / "e4.alg").obj
    assert check_crossed_module(c).passed
    a = crossed_to_dg(c)
    assert not any(oracles.sh_leibniz_failures(a).values())
    back = dg_to_crossed(a)
    assert back == c


@given(st.integers(0, 100_000))
def test_random_crossed_modules_round_trip(seed):
    c = random_crossed_module(random.Random(seed))
    a = crossed_to_dg(c)
    assert check_sh_leibniz(a).passed
    assert not any(oracles.sh_leibniz_failures(a).values())
    assert dg_to_crossed(a) == c
    assert crossed_to_dg(dg_to_crossed(a)) == a


def test_dg_to_crossed_rejects_nonzero_l3(fixtures_dir):
    a = io.load(fixtures_dir / "skeletal.alg").obj
    with pytest.raises(PreconditionError, match="l3 nonzero"):
        dg_to_crossed(a)


def test_crossed_to_dg_rejects_invalid():
    c = e4()
    bad = type(c)(c.g, c.h, c.mu.scaled(2), c.action)
    assert not check_crossed_module(bad).passed
    with pytest.raises(PreconditionError):
        crossed_to_dg(bad)


def test_quadruple_round_trip(fixtures_dir):
    for name in ("quadruple.alg", "quadruple-zero.alg"):
        q = io.load(fixtures_dir / name).obj
        a = quadruple_to_skeletal(q)
        assert not any(oracles.sh_leibniz_failures(a).values())
        assert skeletal_to_quadruple(a) == q


def test_non_cocycle_quadruple_is_rejected(fixtures_dir):
    q = io.load(fixtures_dir / "quadruple-bad.alg").obj
    with pytest.raises(PreconditionError, match="cocycle"):
        quadruple_to_skeletal(q)

import random
from fractions import Fraction

import numpy as np
from hypothesis import given, strategies as st

from leibniz2 import io
from leibniz2.algebra_core import FinSpace, StructureTensor
from leibniz2.crossed_module import LeibnizRep, algebra_catalogue, e2, random_crossed_module
from leibniz2.leibniz_cohomology import Cochain, coboundary, is_cocycle
import oracles


def random_pair(rng):
    """A verified (algebra, representation) pair of dims <= 3."""
    kind = rng.choice(("adjoint", "trivial", "crossed"))
    if kind == "crossed":
        c = random_crossed_module(rng)
        return c.action
    alg = rng.choice(algebra_catalogue(rng))
    if kind == "adjoint":
        return alg.adjoint()
    return LeibnizRep.trivial(alg, FinSpace(rng.randint(1, 3)))


def random_cochain(rng, rep, k):
    g, V = rep.algebra.space, rep.module
    if k == 0:
        return Cochain(0, rep, [rng.randint(-2, 2) for _ in range(V.dim)])
    arr = np.zeros((V.dim,) + (g.dim,) * k, dtype=object)
    for idx in np.ndindex(*arr.shape):
        if rng.random() < 0.5:
            arr[idx] = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
    return Cochain(k, rep, StructureTensor((g,) * k, V, arr))


def _as_fn(c):
    arr = c.array()
    if c.degree == 0:
        return lambda idx: list(arr)
    return lambda idx: list(arr[(slice(None),) + tuple(idx)])


@given(st.integers(0, 100_000), st.integers(0, 2))
def test_coboundary_matches_naive_formula(seed, k):
    rng = random.Random(seed)
    rep = random_pair(rng)
    c = random_cochain(rng, rep, k)
    want = oracles.coboundary_naive(rep, k, _as_fn(c))
    got = coboundary(c).array()
    for idx, vec in want.items():
        assert list(got[(slice(None),) + idx]) == vec


@given(st.integers(0, 100_000), st.integers(0, 3))
def test_coboundary_squares_to_zero(seed, k):
    rng = random.Random(seed)
    rep = random_pair(rng)
    c = random_cochain(rng, rep, k)
    assert coboundary(coboundary(c)).is_zero()


def test_degree0_coboundary_on_e2():
    # (dv)(g) = -r_g v under the naive formula
    a = e2()
    rep = a.adjoint()
    v = Cochain(0, rep, [1, 0])
    got = coboundary(v).array()
    want = oracles.coboundary_naive(rep, 0, _as_fn(v))
    for idx, vec in want.items():
        assert list(got[(slice(None),) + idx]) == vec


def test_quadruple_bad_residual_matches_oracle(fixtures_dir):
    q = io.load(fixtures_dir / "quadruple-bad.alg").obj
    ok, rep = is_cocycle(Cochain(3, q.rho, q.phi))
    assert not ok
    want = oracles.coboundary_naive(q.rho, 3, _as_fn(Cochain(3, q.rho, q.phi)))
    bad = [idx for idx, v in want.items() if any(v)]
    c = rep.check("cocycle")
    assert c.failure_count == len(bad)
    first = tuple(f"e{i + 1}" for i in bad[0])
    assert c.failures[0].witness == first
    assert [Fraction(x) for x in c.failures[0].residual] == want[bad[0]]


def test_zero_cochain_is_cocycle():
    rep = e2().adjoint()
    for k in range(4):
        assert is_cocycle(Cochain.zero(k, rep))[0]

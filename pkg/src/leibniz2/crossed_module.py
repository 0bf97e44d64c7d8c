"""Leibniz algebras, representations and crossed modules.

Also the two correspondences: dg 2-term algebras <-> crossed modules, and
skeletal 2-term algebras <-> quadruples (algebra, module, representation, 3-cocycle).
"""
from __future__ import annotations

import random
from fractions import Fraction
from dataclasses import dataclass

import numpy as np

from .algebra_core import (FinSpace, InternalInconsistencyError, LinearMap, PreconditionError,
                           ScaledTensor, ShapeError, StructureTensor, inverse, is_invertible,
                           nullspace, rref, scaled_einsum, zeros)
from .report import VerifyReport
from .sh_leibniz import ShLeibniz2, TwoTermComplex, _record_tensor, check_sh_leibniz, classify


def _labels(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


@dataclass(frozen=True)
class LeibnizAlgebra:
    space: FinSpace
    bracket: StructureTensor

    def __post_init__(self):
        if self.bracket.sources != (self.space, self.space) or self.bracket.target != self.space:
            raise ShapeError("bracket must be a map g x g -> g")

    @classmethod
    def from_entries(cls, dim: int, entries) -> "LeibnizAlgebra":
        """``entries``: ``{(i, j): {k: c}}`` meaning ``[e_i, e_j] = sum c e_k`` (0-based)."""
        s = FinSpace(dim)
        flat = {}
        for (i, j), out in entries.items():
            for k, c in out.items():
                flat[(k, i, j)] = c
        return cls(s, StructureTensor.from_entries((s, s), s, flat))

    @classmethod
    def abelian(cls, dim: int) -> "LeibnizAlgebra":
        s = FinSpace(dim)
        return cls(s, StructureTensor.zero((s, s), s))

    @property
    def dim(self) -> int:
        return self.space.dim

    def adjoint(self) -> "LeibnizRep":
        """``l_x y = [x, y]``, ``r_x y = [y, x]``."""
        return LeibnizRep(self, self.space, self.bracket, self.bracket)


@dataclass(frozen=True)
class LeibnizRep:
    """``left: g x V -> V`` is ``l_g v``; ``right: V x g -> V`` is ``r_g v``."""

    algebra: LeibnizAlgebra
    module: FinSpace
    left: StructureTensor
    right: StructureTensor

    def __post_init__(self):
        g, V = self.algebra.space, self.module
        if self.left.sources != (g, V) or self.left.target != V:
            raise ShapeError("left action must be g x V -> V")
        if self.right.sources != (V, g) or self.right.target != V:
            raise ShapeError("right action must be V x g -> V")

    @classmethod
    def trivial(cls, algebra: LeibnizAlgebra, module: FinSpace) -> "LeibnizRep":
        g = algebra.space
        return cls(algebra, module, StructureTensor.zero((g, module), module),
                   StructureTensor.zero((module, g), module))


@dataclass(frozen=True)
class CrossedModule:
    g: LeibnizAlgebra
    h: LeibnizAlgebra
    mu: LinearMap
    action: LeibnizRep

    def __post_init__(self):
        if self.mu.source != self.g.space or self.mu.target != self.h.space:
            raise ShapeError("mu must map g to h")
        if self.action.algebra != self.h or self.action.module != self.g.space:
            raise ShapeError("the action must be a representation of h on g")


@dataclass(frozen=True)
class SkeletalQuadruple:
    g: LeibnizAlgebra
    v: FinSpace
    rho: LeibnizRep
    phi: StructureTensor

    def __post_init__(self):
        if self.rho.algebra != self.g or self.rho.module != self.v:
            raise ShapeError("rho must represent g on v")
        gs = self.g.space
        if self.phi.sources != (gs, gs, gs) or self.phi.target != self.v:
            raise ShapeError("phi must be a map g^3 -> V")


# ---------------------------------------------------------------------------
# checks

def leibniz_residual(a: LeibnizAlgebra) -> ScaledTensor:
    """``[g1,[g2,g3]] - [[g1,g2],g3] - [g2,[g1,g3]]`` on basis triples."""
    P = ScaledTensor.of(a.bracket)
    e = scaled_einsum
    return e("aic,cjk->aijk", P, P) - e("ack,cij->aijk", P, P) - e("ajc,cik->aijk", P, P)


def check_leibniz(a: LeibnizAlgebra, labels: list[str] | None = None) -> VerifyReport:
    rep = VerifyReport("Leibniz algebra")
    L = labels or _labels("e", a.dim)
    _record_tensor(rep, "leibniz", "[x,[y,z]] = [[x,y],z] + [y,[x,z]]", leibniz_residual(a), (L, L, L))
    return rep


def check_representation(r: LeibnizRep, alg_prefix: str = "e", mod_prefix: str = "v") -> VerifyReport:
    rep = VerifyReport("Leibniz representation")
    G = _labels(alg_prefix, r.algebra.dim)
    V = _labels(mod_prefix, r.module.dim)
    P, L, R = (ScaledTensor.of(t) for t in (r.algebra.bracket, r.left, r.right))
    e = scaled_einsum
    _record_tensor(rep, "rep left", "l[g1,g2] = [l g1, l g2]",
                   e("acv,cij->aijv", L, P) - e("aic,cjv->aijv", L, L) + e("ajc,civ->aijv", L, L),
                   (G, G, V))
    _record_tensor(rep, "rep right", "r[g1,g2] = [l g1, r g2]",
                   e("avc,cij->aijv", R, P) - e("aic,cvj->aijv", L, R) + e("acj,civ->aijv", R, L),
                   (G, G, V))
    _record_tensor(rep, "rep mixed", "r g2 o l g1 = - r g2 o r g1",
                   e("acj,civ->aijv", R, L) + e("acj,cvi->aijv", R, R), (G, G, V))
    return rep


def check_crossed_module(c: CrossedModule) -> VerifyReport:
    rep = VerifyReport("crossed module of Leibniz algebras")
    rep.extend(check_leibniz(c.g), "g ")
    rep.extend(check_leibniz(c.h, _labels("u", c.h.dim)), "h ")
    rep.extend(check_representation(c.action, "u", "e"), "action ")
    G, H = _labels("e", c.g.dim), _labels("u", c.h.dim)
    Pg, Ph = ScaledTensor.of(c.g.bracket), ScaledTensor.of(c.h.bracket)
    M = ScaledTensor.of(c.mu)
    L, R = ScaledTensor.of(c.action.left), ScaledTensor.of(c.action.right)
    e = scaled_einsum
    _record_tensor(rep, "mu morphism", "mu[g,g'] = [mu g, mu g']",
                   e("ab,bij->aij", M, Pg) - e("abc,bi,cj->aij", Ph, M, M), (G, G))
    _record_tensor(rep, "(1) left", "mu(l_h g) = [h, mu g]",
                   e("ab,bhg->ahg", M, L) - e("ahc,cg->ahg", Ph, M), (H, G))
    _record_tensor(rep, "(1) right", "mu(r_h g) = [mu g, h]",
                   e("ab,bgh->ahg", M, R) - e("ach,cg->ahg", Ph, M), (H, G))
    _record_tensor(rep, "(2) left", "l_{mu g} g' = [g, g']",
                   e("acj,ci->aij", L, M) - Pg, (G, G))
    _record_tensor(rep, "(2) right", "r_{mu g'} g = [g, g']",
                   e("aic,cj->aij", R, M) - Pg, (G, G))
    _record_tensor(rep, "(3)", "l_h[g,g'] = [l_h g, g'] + [g, l_h g']",
                   e("ahc,cij->ahij", L, Pg) - e("acj,chi->ahij", Pg, L) - e("aic,chj->ahij", Pg, L),
                   (H, G, G))
    _record_tensor(rep, "(4)", "r_h[g,g'] = [g, r_h g'] - [g', r_h g]",
                   e("ach,cij->ahij", R, Pg) - e("aic,cjh->ahij", Pg, R) + e("ajc,cih->ahij", Pg, R),
                   (H, G, G))
    _record_tensor(rep, "(5)", "[l_h g + r_h g, g'] = 0",
                   e("acj,chi->ahij", Pg, L) + e("acj,cih->ahij", Pg, R), (H, G, G))
    return rep


# ---------------------------------------------------------------------------
# dg algebras <-> crossed modules

def dg_to_crossed(a: ShLeibniz2) -> CrossedModule:
    if not classify(a).dg:
        raise PreconditionError("l3 nonzero: not a dg algebra")
    report = check_sh_leibniz(a)
    if not report.passed:
        raise PreconditionError(f"not a 2-term sh Leibniz algebra: fails {report.failed_names()}")
    V1, V0 = a.v1, a.v0
    D = ScaledTensor.of(a.d)
    via_right = scaled_einsum("amc,cn->amn", ScaledTensor.of(a.l2_10), D)
    via_left = scaled_einsum("acn,cm->amn", ScaledTensor.of(a.l2_01), D)
    if not (via_right - via_left).is_zero():
        raise InternalInconsistencyError("l2(dm,n) != l2(m,dn) after condition (c) passed")
    g = LeibnizAlgebra(V1, StructureTensor((V1, V1), V1, via_right.to_fractions()))
    h = LeibnizAlgebra(V0, a.l2_00)
    return CrossedModule(g, h, a.d, LeibnizRep(h, V1, a.l2_01, a.l2_10))


def crossed_to_dg(c: CrossedModule) -> ShLeibniz2:
    report = check_crossed_module(c)
    if not report.passed:
        raise PreconditionError(f"not a crossed module: fails {report.failed_names()}")
    cx = TwoTermComplex(c.g.space, c.h.space, c.mu)
    return ShLeibniz2(cx, c.h.bracket, c.action.left, c.action.right)


# ---------------------------------------------------------------------------
# skeletal algebras <-> quadruples

def skeletal_to_quadruple(a: ShLeibniz2) -> SkeletalQuadruple:
    from .leibniz_cohomology import Cochain, is_cocycle

    if not classify(a).skeletal:
        raise PreconditionError("d nonzero: not skeletal")
    report = check_sh_leibniz(a)
    if not report.passed:
        raise PreconditionError(f"not a 2-term sh Leibniz algebra: fails {report.failed_names()}")
    g = LeibnizAlgebra(a.v0, a.l2_00)
    rho = LeibnizRep(g, a.v1, a.l2_01, a.l2_10)
    ok, cocycle_report = is_cocycle(Cochain(3, rho, a.l3))
    if not ok:
        raise InternalInconsistencyError(
            f"l3 is not a 3-cocycle although (f) passed: {cocycle_report.failed_names()}")
    return SkeletalQuadruple(g, a.v1, rho, a.l3)


def quadruple_to_skeletal(q: SkeletalQuadruple) -> ShLeibniz2:
    from .leibniz_cohomology import Cochain, is_cocycle

    for sub in (check_leibniz(q.g), check_representation(q.rho)):
        if not sub.passed:
            raise PreconditionError(f"invalid quadruple: fails {sub.failed_names()}")
    ok, _ = is_cocycle(Cochain(3, q.rho, q.phi))
    if not ok:
        raise PreconditionError("phi is not a 3-cocycle")
    cx = TwoTermComplex(q.v, q.g.space, LinearMap.zero(q.v, q.g.space))
    return ShLeibniz2(cx, q.g.bracket, q.rho.left, q.rho.right, q.phi)


# ---------------------------------------------------------------------------
# standard examples and random instances

def e2() -> LeibnizAlgebra:
    """Q^2 with [e1,e1] = e2: Leibniz, not Lie."""
    return LeibnizAlgebra.from_entries(2, {(0, 0): {1: 1}})


def e3() -> LeibnizAlgebra:
    """Q^2 with [e1,e2] = e2 = -[e2,e1]: a Lie algebra."""
    return LeibnizAlgebra.from_entries(2, {(0, 1): {1: 1}, (1, 0): {1: -1}})


def adjoint_crossed_module(h: LeibnizAlgebra) -> CrossedModule:
    """``mu = id: h -> h`` with adjoint actions."""
    return CrossedModule(h, h, LinearMap.identity(h.space), h.adjoint())


def e4() -> CrossedModule:
    return adjoint_crossed_module(e2())


def _rand_q(rng: random.Random, lo: int = -2, hi: int = 2):
    return rng.randint(lo, hi)


def random_invertible(rng: random.Random, n: int) -> LinearMap:
    s = FinSpace(n)
    while True:
        m = LinearMap(s, s, [[_rand_q(rng) for _ in range(n)] for _ in range(n)])
        if is_invertible(m):
            return m


def transport_algebra(a: LeibnizAlgebra, P: LinearMap) -> LeibnizAlgebra:
    """New coordinates ``x = P x'``: ``[x', y']' = P^-1 [P x', P y']``."""
    Pi = inverse(P)
    t = scaled_einsum("ab,bcd,ci,dj->aij", Pi, a.bracket, P, P)
    return LeibnizAlgebra(a.space, StructureTensor((a.space, a.space), a.space, t.to_fractions()))


def transport_crossed(c: CrossedModule, Pg: LinearMap, Ph: LinearMap) -> CrossedModule:
    g2, h2 = transport_algebra(c.g, Pg), transport_algebra(c.h, Ph)
    Pgi, Phi = inverse(Pg), inverse(Ph)
    e = scaled_einsum
    mu = LinearMap(c.g.space, c.h.space, e("ab,bc,cd->ad", Phi, c.mu, Pg).to_fractions())
    left = e("ab,bcd,ci,dj->aij", Pgi, c.action.left, Ph, Pg).to_fractions()
    right = e("ab,bcd,ci,dj->aij", Pgi, c.action.right, Pg, Ph).to_fractions()
    G, H = c.g.space, c.h.space
    return CrossedModule(g2, h2, mu, LeibnizRep(h2, G, StructureTensor((H, G), G, left),
                                                  StructureTensor((G, H), G, right)))


def _nilpotent_leibniz(rng: random.Random) -> LeibnizAlgebra:
    """Q^3 with brackets of e1, e2 landing in the centre spanned by e3."""
    entries = {(i, j): {2: _rand_q(rng)} for i in range(2) for j in range(2)}
    return LeibnizAlgebra.from_entries(3, entries)


def _direct_sum(a: LeibnizAlgebra, b: LeibnizAlgebra) -> LeibnizAlgebra:
    n = a.dim + b.dim
    arr = zeros(n, n, n)
    arr[:a.dim, :a.dim, :a.dim] = a.bracket.coefficients
    arr[a.dim:, a.dim:, a.dim:] = b.bracket.coefficients
    s = FinSpace(n)
    return LeibnizAlgebra(s, StructureTensor((s, s), s, arr))


def algebra_catalogue(rng: random.Random, max_dim: int = 3) -> list[LeibnizAlgebra]:
    cat = [LeibnizAlgebra.abelian(1), LeibnizAlgebra.abelian(2), e2(), e3()]
    if max_dim >= 3:
        cat += [LeibnizAlgebra.abelian(3), _direct_sum(e2(), LeibnizAlgebra.abelian(1)),
                _direct_sum(e3(), LeibnizAlgebra.abelian(1)), _nilpotent_leibniz(rng)]
    return cat


def _module_homomorphism(rng: random.Random, h: LeibnizAlgebra, n: int) -> list[np.ndarray] | None:
    """Matrices ``L_i`` with ``L_{[e_i,e_j]} = [L_i, L_j]``, for the catalogue shapes.

    The quadratic system is made linear by fixing a random ``L`` on generators
    and solving for the rest exactly.
    """
    k = h.dim
    P = h.bracket.coefficients
    Ls = None
    if not P.any():
        # abelian: commuting matrices, polynomials in one random matrix
        base = np.array([[_rand_q(rng) for _ in range(n)] for _ in range(n)], dtype=object)
        Ls, power = [], np.identity(n, dtype=object)
        for _ in range(k):
            power = power.dot(base) if Ls else base
            Ls.append(power * _rand_q(rng, -1, 1))
    elif k == 2 and P[1, 0, 0] == 1 and not P[:, 1, :].any() and not P[:, :, 1].any():
        # E2: L_{e2} = [L1, L1] = 0
        Ls = [np.array([[_rand_q(rng) for _ in range(n)] for _ in range(n)], dtype=object),
              zeros(n, n)]
    elif k == 2 and P[1, 0, 1] == 1 and P[1, 1, 0] == -1 and not P[0].any():
        # E3: [L1, L2] = L2, solved linearly for L2 given a diagonal L1
        L1 = np.diag([Fraction(rng.choice([0, 1, 2])) for _ in range(n)]).astype(object)
        rows = []
        for r in range(n):
            for c in range(n):
                row = {}
                # ([L1, X] - X)[r, c] = L1[r,r] X[r,c] - X[r,c] L1[c,c] - X[r,c]
                coeff = L1[r, r] - L1[c, c] - 1
                if coeff:
                    row[r * n + c] = coeff
                if row:
                    rows.append(row)
        basis = nullspace(rows, n * n)
        X = zeros(n * n)
        for b in basis:
            X = X + b * _rand_q(rng)
        Ls = [L1, X.reshape(n, n)]
    if Ls is None:
        return None
    for i in range(k):
        for j in range(k):
            lhs = sum((P[c, i, j] * Ls[c] for c in range(k)), zeros(n, n))
            if not np.array_equal(lhs, Ls[i].dot(Ls[j]) - Ls[j].dot(Ls[i])):
                raise InternalInconsistencyError("generated matrices are not a homomorphism")
    return Ls


def _abelian_module_crossed(rng: random.Random, h: LeibnizAlgebra, n: int) -> CrossedModule | None:
    Ls = _module_homomorphism(rng, h, n)
    if Ls is None:
        return None
    g = LeibnizAlgebra.abelian(n)
    G, H = g.space, h.space
    left = zeros(n, h.dim, n)
    for i, Li in enumerate(Ls):
        left[:, i, :] = Li
    right = zeros(n, n, h.dim)
    if rng.random() < 0.5:
        right = -np.transpose(left, (0, 2, 1))
    act = LeibnizRep(h, G, StructureTensor((H, G), G, left), StructureTensor((G, H), G, right))
    return CrossedModule(g, h, LinearMap.zero(G, H), act)


def _ideal_crossed(h: LeibnizAlgebra) -> CrossedModule | None:
    """``g = [h, h]`` with ``mu`` the inclusion and adjoint actions."""
    P = h.bracket.coefficients
    vecs = [P[:, i, j] for i in range(h.dim) for j in range(h.dim)]
    R, piv = rref(vecs, h.dim)
    k = len(piv)
    if k == 0 or k == h.dim:
        return None
    B = np.array(R[:k], dtype=object).T  # columns span the ideal, reduced at pivot rows
    G, H = FinSpace(k), h.space

    def coords(v):
        # B is the identity on pivot rows
        return np.array([v[p] for p in piv], dtype=object)

    br = zeros(k, k, k)
    left = zeros(k, h.dim, k)
    right = zeros(k, k, h.dim)
    for i in range(k):
        for j in range(k):
            br[:, i, j] = coords(np.einsum("abc,b,c->a", P, B[:, i], B[:, j]))
        for u in range(h.dim):
            eu = np.zeros(h.dim, dtype=object)
            eu[u] = 1
            left[:, u, i] = coords(np.einsum("abc,b,c->a", P, eu, B[:, i]))
            right[:, i, u] = coords(np.einsum("abc,b,c->a", P, B[:, i], eu))
    g = LeibnizAlgebra(G, StructureTensor((G, G), G, br))
    act = LeibnizRep(h, G, StructureTensor((H, G), G, left), StructureTensor((G, H), G, right))
    return CrossedModule(g, h, LinearMap(G, H, B), act)


def random_crossed_module(rng: random.Random, max_dim: int = 3) -> CrossedModule:
    """A crossed module with dims <= ``max_dim``, verified before returning."""
    cat = algebra_catalogue(rng, max_dim)
    while True:
        h = rng.choice(cat)
        kind = rng.choice(("adjoint", "module", "ideal"))
        if kind == "adjoint":
            c = adjoint_crossed_module(h)
        elif kind == "module":
            c = _abelian_module_crossed(rng, h, rng.randint(1, max_dim))
        else:
            c = _ideal_crossed(h)
        if c is None:
            continue
        c = transport_crossed(c, random_invertible(rng, c.g.dim), random_invertible(rng, c.h.dim))
        report = check_crossed_module(c)
        if not report.passed:
            raise InternalInconsistencyError(f"generator produced an invalid crossed module: "
                                             f"{report.failed_names()}")
        return c

"""The 2-term DGLA End(V) of a 2-term complex and the omni construction.

``End^0_d(V) = {(A0, A1) : A0 d = d A1}`` is found as an exact kernel. Its
basis is the kernel basis with one unit free column per vector, so an
element's coordinates are its entries at the free columns.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra_core import (FinSpace, LinearMap, PreconditionError, ScaledTensor, ShapeError,
                           StructureTensor, free_columns, inverse, is_invertible, nullspace,
                           scaled_einsum, solve_particular, vector, zeros)
from .report import VerifyReport
from .sh_leibniz import (ShLeibniz2, ShMorphism, TwoTermComplex, _record_tensor, check_morphism,
                         check_sh_leibniz, morphism_residuals)


@dataclass(frozen=True)
class EndDgla:
    base: TwoTermComplex
    deg0: FinSpace
    deg1: FinSpace
    basis0: tuple  # pairs (A0, A1) of matrices
    free: tuple    # free columns of the constraint system, one per basis element
    delta: LinearMap
    bracket00: StructureTensor
    bracket01: StructureTensor

    @property
    def n0(self) -> int:
        return self.base.v0.dim

    @property
    def n1(self) -> int:
        return self.base.v1.dim

    def deg1_matrix(self, coords) -> np.ndarray:
        """``Hom(V0, V1)`` element (shape ``n1 x n0``) from coordinates."""
        return np.array(list(coords), dtype=object).reshape(self.n1, self.n0)

    def deg1_coords(self, phi: np.ndarray) -> np.ndarray:
        return vector(np.asarray(phi, dtype=object).reshape(-1))

    def deg0_pair(self, coords) -> tuple[np.ndarray, np.ndarray]:
        A0, A1 = zeros(self.n0, self.n0), zeros(self.n1, self.n1)
        for c, (B0, B1) in zip(coords, self.basis0):
            if c:
                A0 = A0 + c * B0
                A1 = A1 + c * B1
        return A0, A1

    def deg0_coords(self, A0, A1) -> np.ndarray:
        flat = list(np.asarray(A0, dtype=object).reshape(-1)) + list(np.asarray(A1, dtype=object).reshape(-1))
        coords = vector(flat[f] for f in self.free)
        B0, B1 = self.deg0_pair(coords)
        if not (np.array_equal(B0, A0) and np.array_equal(B1, A1)):
            raise PreconditionError("pair does not satisfy A0 d = d A1")
        return coords

    @cached_property
    def algebra(self) -> ShLeibniz2:
        """End(V) as a dg algebra: d = delta, l2_10(phi, A) = -[A, phi], l3 = 0."""
        cx = TwoTermComplex(self.deg1, self.deg0, self.delta)
        b10 = self.bracket01.permuted((1, 0)).scaled(-1)
        return ShLeibniz2(cx, self.bracket00, self.bracket01, b10)


def build_end(c: TwoTermComplex) -> EndDgla:
    n0, n1 = c.v0.dim, c.v1.dim
    d = c.d.coefficients
    nvar = n0 * n0 + n1 * n1

    def a0(r, t):
        return r * n0 + t

    def a1(t, s):
        return n0 * n0 + t * n1 + s

    rows = []
    for r in range(n0):
        for s in range(n1):
            row = {}
            for t in range(n0):
                if d[t, s]:
                    row[a0(r, t)] = row.get(a0(r, t), 0) + d[t, s]
            for t in range(n1):
                if d[r, t]:
                    row[a1(t, s)] = row.get(a1(t, s), 0) - d[r, t]
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    kernel = nullspace(rows, nvar)
    free = tuple(free_columns(rows, nvar))
    basis0 = tuple((v[:n0 * n0].reshape(n0, n0), v[n0 * n0:].reshape(n1, n1)) for v in kernel)
    k0, k1 = len(basis0), n1 * n0
    deg0, deg1 = FinSpace(k0, "End0"), FinSpace(k1, "End1")

    proto = EndDgla(c, deg0, deg1, basis0, free, LinearMap.zero(deg1, deg0),
                    StructureTensor.zero((deg0, deg0), deg0),
                    StructureTensor.zero((deg0, deg1), deg1))

    def coords0(A0, A1):
        return proto.deg0_coords(A0, A1)

    delta = zeros(k0, k1)
    for j in range(k1):
        phi = zeros(n1, n0).reshape(-1)
        phi[j] = 1
        phi = phi.reshape(n1, n0)
        delta[:, j] = coords0(d.dot(phi), phi.dot(d))
    b00 = zeros(k0, k0, k0)
    for i, (A0, A1) in enumerate(basis0):
        for j, (B0, B1) in enumerate(basis0):
            b00[:, i, j] = coords0(A0.dot(B0) - B0.dot(A0), A1.dot(B1) - B1.dot(A1))
    b01 = zeros(k1, k0, k1)
    for i, (A0, A1) in enumerate(basis0):
        for j in range(k1):
            phi = zeros(k1)
            phi[j] = 1
            phi = phi.reshape(n1, n0)
            b01[:, i, j] = (A1.dot(phi) - phi.dot(A0)).reshape(-1)
    return EndDgla(c, deg0, deg1, basis0, free, LinearMap(deg1, deg0, delta),
                   StructureTensor((deg0, deg0), deg0, b00),
                   StructureTensor((deg0, deg1), deg1, b01))


def check_end_identities(e: EndDgla) -> VerifyReport:
    """Jacobi on degree 0, ``[delta phi, psi] = [phi, delta psi]`` and
    ``delta[A, phi] = [A, delta phi]``."""
    rep = check_sh_leibniz(e.algebra)
    A = ScaledTensor.of(e.bracket00)
    Bk = ScaledTensor.of(e.bracket01)
    D = ScaledTensor.of(e.delta)
    L0 = [f"A{i + 1}" for i in range(e.deg0.dim)]
    L1 = [f"phi{i + 1}" for i in range(e.deg1.dim)]
    jac = (scaled_einsum("axc,cyz->axyz", A, A) - scaled_einsum("acz,cxy->axyz", A, A)
           - scaled_einsum("ayc,cxz->axyz", A, A))
    _record_tensor(rep, "jacobi", "Jacobi identity on End0", jac, (L0, L0, L0))
    sym = scaled_einsum("acq,cp->apq", Bk, D) + scaled_einsum("acp,cq->apq", Bk, D)
    _record_tensor(rep, "delta symmetric", "[delta phi, psi] = [phi, delta psi]", sym, (L1, L1))
    equiv = scaled_einsum("ab,bxp->axp", D, Bk) - scaled_einsum("axc,cp->axp", A, D)
    _record_tensor(rep, "delta equivariant", "delta[A, phi] = [A, delta phi]", equiv, (L0, L1))
    return rep


@dataclass(frozen=True)
class DglaAutomorphism:
    f0: LinearMap
    f1: LinearMap
    f2: StructureTensor

    @classmethod
    def identity(cls, e: EndDgla) -> "DglaAutomorphism":
        return cls(LinearMap.identity(e.deg0), LinearMap.identity(e.deg1),
                   StructureTensor.zero((e.deg0, e.deg0), e.deg1))

    def morphism(self) -> ShMorphism:
        return ShMorphism(self.f0, self.f1, self.f2)


def check_dgla_automorphism(f: DglaAutomorphism, e: EndDgla) -> VerifyReport:
    if (f.f0.source != e.deg0 or f.f0.target != e.deg0 or f.f1.source != e.deg1
            or f.f1.target != e.deg1):
        raise ShapeError("automorphism does not match End(V)")
    rep = VerifyReport("automorphism of End(V)")
    inv = rep.add("invertible", "f0 and f1 are invertible")
    inv.checked = 2
    for name, m in (("f0", f.f0), ("f1", f.f1)):
        if not is_invertible(m):
            inv.record((name,), "singular")
    rep.extend(check_morphism(f.morphism(), e.algebra, e.algebra))
    return rep


def build_omni(f: DglaAutomorphism, c: TwoTermComplex, e: EndDgla | None = None,
               check: bool = True) -> ShLeibniz2:
    """The algebra on ``End^1 + V1 -> End^0_d + V0`` twisted by ``f``."""
    e = e or build_end(c)
    if check:
        rep = check_dgla_automorphism(f, e)
        if not rep.passed:
            raise PreconditionError(f"not an automorphism of End(V): fails {rep.failed_names()}")
    n0, n1, k0, k1 = e.n0, e.n1, e.deg0.dim, e.deg1.dim
    W1, W0 = FinSpace(k1 + n1), FinSpace(k0 + n0)
    dmat = zeros(k0 + n0, k1 + n1)
    dmat[:k0, :k1] = e.delta.coefficients
    dmat[k0:, k1:] = c.d.coefficients
    cx = TwoTermComplex(W1, W0, LinearMap(W1, W0, dmat))

    # f0(A) as a pair of matrices, for each basis A
    f0_pairs = [e.deg0_pair(f.f0.coefficients[:, i]) for i in range(k0)]
    f1_mats = [e.deg1_matrix(f.f1.coefficients[:, j]) for j in range(k1)]

    b00 = e.bracket00.coefficients
    b01 = e.bracket01.coefficients
    l00 = zeros(k0 + n0, k0 + n0, k0 + n0)
    l00[:k0, :k0, :k0] = b00
    for i in range(k0):
        l00[k0:, i, k0:] = f0_pairs[i][0]      # f0(A)_0 acting on v
    l01 = zeros(k1 + n1, k0 + n0, k1 + n1)
    l01[:k1, :k0, :k1] = b01
    for i in range(k0):
        l01[k1:, i, k1:] = f0_pairs[i][1]      # f0(A)_1 acting on m
    l10 = zeros(k1 + n1, k1 + n1, k0 + n0)
    l10[:k1, :k1, :k0] = -np.transpose(b01, (0, 2, 1))
    for j in range(k1):
        l10[k1:, j, k0:] = f1_mats[j]          # f1(phi) acting on u
    l3 = zeros(k1 + n1, k0 + n0, k0 + n0, k0 + n0)
    f2 = f.f2.coefficients
    for i in range(k0):
        for j in range(k0):
            l3[k1:, i, j, k0:] = e.deg1_matrix(f2[:, i, j])
    return ShLeibniz2(cx, StructureTensor((W0, W0), W0, l00), StructureTensor((W0, W1), W1, l01),
                      StructureTensor((W1, W0), W1, l10), StructureTensor((W0, W0, W0), W1, l3))


# ---------------------------------------------------------------------------
# automorphism generators

def inner_automorphism(e: EndDgla, P0, P1) -> DglaAutomorphism:
    """Conjugation by an invertible chain map ``(P0, P1)``."""
    P0 = np.asarray(P0, dtype=object)
    P1 = np.asarray(P1, dtype=object)
    e.deg0_coords(P0, P1)
    P0i = inverse(LinearMap(e.base.v0, e.base.v0, P0)).coefficients
    P1i = inverse(LinearMap(e.base.v1, e.base.v1, P1)).coefficients
    k0, k1 = e.deg0.dim, e.deg1.dim
    f0 = zeros(k0, k0)
    for i, (A0, A1) in enumerate(e.basis0):
        f0[:, i] = e.deg0_coords(P0.dot(A0).dot(P0i), P1.dot(A1).dot(P1i))
    f1 = zeros(k1, k1)
    for j in range(k1):
        phi = e.deg1_matrix(np.eye(k1, dtype=int)[j].astype(object))
        f1[:, j] = e.deg1_coords(P1.dot(phi).dot(P0i))
    return DglaAutomorphism(LinearMap(e.deg0, e.deg0, f0), LinearMap(e.deg1, e.deg1, f1),
                            StructureTensor.zero((e.deg0, e.deg0), e.deg1))


def random_chain_automorphism(e: EndDgla, rng: random.Random, tries: int = 50):
    """A random invertible ``(P0, P1)`` in ``End^0_d``, or ``None``."""
    k0 = e.deg0.dim
    for _ in range(tries):
        coords = [rng.randint(-2, 2) for _ in range(k0)]
        P0, P1 = e.deg0_pair(coords)
        if (is_invertible(LinearMap(e.base.v0, e.base.v0, P0))
                and is_invertible(LinearMap(e.base.v1, e.base.v1, P1))):
            return P0, P1
    return None


@dataclass
class F2Solutions:
    """Solutions of the f2 constraints for fixed ``(f0, f1)``: an affine space."""

    particular: StructureTensor | None
    homogeneous: list[StructureTensor]

    @property
    def exists(self) -> bool:
        return self.particular is not None


def search_f2(e: EndDgla, f0: LinearMap, f1: LinearMap, skew: bool = False) -> F2Solutions:
    """Solve the morphism conditions for ``f2`` exactly, with ``(f0, f1)`` fixed.

    The conditions are affine in ``f2``; the system is read off by evaluating
    the residual tensors on all unit tensors at once.
    """
    alg = e.algebra
    k0, k1 = e.deg0.dim, e.deg1.dim
    U = k1 * k0 * k0
    onehot = np.zeros((U, k1, k0, k0), dtype=object)
    for u, idx in enumerate(itertools.product(range(k1), range(k0), range(k0))):
        onehot[(u,) + idx] = 1
    zero_f2 = np.zeros((k1, k0, k0), dtype=object)
    const = morphism_residuals(f0, f1, ScaledTensor(zero_f2, 1), alg, alg)
    if U == 0:
        if all(K.is_zero() for K in const.values()):
            return F2Solutions(StructureTensor((e.deg0, e.deg0), e.deg1, zero_f2), [])
        return F2Solutions(None, [])
    batched = morphism_residuals(f0, f1, ScaledTensor(onehot, 1), alg, alg)
    rows, rhs = [], []
    for name, K in const.items():
        R = batched[name]
        if R.num.ndim == K.num.ndim:  # condition does not involve f2
            if not K.is_zero():
                return F2Solutions(None, [])
            continue
        lin = R - K
        # rows and right-hand sides share the denominator of lin
        kflat = (K.num * (lin.den // K.den)).reshape(-1)
        mat = lin.num.reshape(U, -1)
        by_col: dict[int, dict[int, int]] = {}
        for u, col in zip(*np.nonzero(mat)):
            by_col.setdefault(int(col), {})[int(u)] = mat[u, col]
        for col in range(mat.shape[1]):
            row = by_col.get(col)
            if row:
                rows.append(row)
                rhs.append(-kflat[col])
            elif kflat[col]:
                return F2Solutions(None, [])
    if skew:
        for a in range(k1):
            for x in range(k0):
                for y in range(x, k0):
                    u1 = (a * k0 + x) * k0 + y
                    u2 = (a * k0 + y) * k0 + x
                    row = {u1: 1} if u1 == u2 else {u1: 1, u2: 1}
                    rows.append(row)
                    rhs.append(0)

    def tensor(v):
        return StructureTensor((e.deg0, e.deg0), e.deg1, np.asarray(v, dtype=object).reshape(k1, k0, k0))

    part = solve_particular(rows, rhs, U)
    if part is None:
        return F2Solutions(None, [])
    return F2Solutions(tensor(part), [tensor(v) for v in nullspace(rows, U)])


def standard_complexes() -> list[TwoTermComplex]:
    """Complexes with dims <= 2 used to exercise the omni construction."""
    out = []
    for n1, n0 in ((0, 1), (1, 0), (1, 1), (0, 2), (2, 1), (1, 2), (2, 2)):
        out.append(TwoTermComplex.zero(n1, n0))
    out.append(TwoTermComplex.of([[1]]))
    out.append(TwoTermComplex.of([[1], [0]]))
    out.append(TwoTermComplex.of([[1, 0]]))
    out.append(TwoTermComplex.of([[1, 0], [0, 0]]))
    out.append(TwoTermComplex.of([[1, 0], [0, 1]]))
    return out


def scalar_automorphism(e: EndDgla, c) -> DglaAutomorphism:
    """``(id, c id, 0)``; an automorphism when the differential vanishes."""
    return DglaAutomorphism(LinearMap.identity(e.deg0), LinearMap.identity(e.deg1).scaled(c),
                            StructureTensor.zero((e.deg0, e.deg0), e.deg1))

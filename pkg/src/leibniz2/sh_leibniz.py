"""2-term sh Leibniz algebras: data, axiom verification, morphisms.

Conditions are checked in two independent ways:

* ``check_sh_leibniz`` / ``check_morphism`` contract whole structure tensors at
  once (exact integer einsum) and read witnesses off the nonzero entries;
* ``check_family`` / ``check_morphism_family`` evaluate the same identities
  element by element through callables, so they also work for the symbolic
  models (polynomial sections, 1-forms) where no finite basis exists.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Protocol, Sequence

import numpy as np

from .algebra_core import (FinSpace, LinearMap, PreconditionError, ScaledTensor, ShapeError,
                           StructureTensor, apply_linear, apply_multi, as_rational, compose_linear,
                           is_zero, postcompose, precompose_slot, scaled_einsum, zeros)
from .report import VerifyReport

CONDITION_LABELS = {
    "(a)": "d l2(x,m) = l2(x,dm)",
    "(b)": "d l2(m,x) = l2(dm,x)",
    "(c)": "l2(dm,n) = l2(m,dn)",
    "(d)": "d l3(x,y,z) = Leibniz defect of l2 on V0",
    "(e1)": "l3(x,y,dm) = defect on (x,y,m)",
    "(e2)": "l3(x,dm,y) = defect on (x,m,y)",
    "(e3)": "l3(dm,x,y) = defect on (m,x,y)",
    "(f)": "Jacobiator identity for l3",
}
CONDITIONS = tuple(CONDITION_LABELS)

MORPHISM_LABELS = {
    "chain": "f0 d = d' f1",
    "(c1) objects": "l2'(f0x,f0y) - f0 l2(x,y) = d' f2(x,y)",
    "(c1) left": "l2'(f0x,f1m) - f1 l2(x,m) = f2(x,dm)",
    "(c1) right": "l2'(f1m,f0x) - f1 l2(m,x) = f2(dm,x)",
    "(c2)": "coherence of f2 with l3",
}


class ConditionViolation(PreconditionError):
    """Raised when an operation relies on a condition the input violates."""

    def __init__(self, condition: str, witness, residual):
        self.condition = condition
        self.witness = tuple(witness)
        self.residual = residual
        super().__init__(f"condition {condition} fails at {self.witness}")


# ---------------------------------------------------------------------------
# data

@dataclass(frozen=True)
class TwoTermComplex:
    v1: FinSpace
    v0: FinSpace
    d: LinearMap

    def __post_init__(self):
        if self.d.source != self.v1 or self.d.target != self.v0:
            raise ShapeError("differential must map V1 to V0")

    @classmethod
    def of(cls, d) -> "TwoTermComplex":
        arr = np.array(d, dtype=object)
        if arr.ndim != 2:
            raise ShapeError("differential must be a matrix")
        v1, v0 = FinSpace(arr.shape[1]), FinSpace(arr.shape[0])
        return cls(v1, v0, LinearMap(v1, v0, arr))

    @classmethod
    def zero(cls, dim1: int, dim0: int) -> "TwoTermComplex":
        v1, v0 = FinSpace(dim1), FinSpace(dim0)
        return cls(v1, v0, LinearMap.zero(v1, v0))


class ShLeibniz2:
    """A 2-term sh Leibniz algebra given by structure constants.

    ``l2_00: V0 x V0 -> V0``, ``l2_01: V0 x V1 -> V1``, ``l2_10: V1 x V0 -> V1``
    and ``l3: V0^3 -> V1``; the bracket on V1 x V1 is zero. Omitted tensors
    default to zero.
    """

    def __init__(self, complex: TwoTermComplex, l2_00: StructureTensor | None = None,
                 l2_01: StructureTensor | None = None, l2_10: StructureTensor | None = None,
                 l3: StructureTensor | None = None):
        v0, v1 = complex.v0, complex.v1
        self.complex = complex
        self.l2_00 = _checked(l2_00, (v0, v0), v0, "l2_00")
        self.l2_01 = _checked(l2_01, (v0, v1), v1, "l2_01")
        self.l2_10 = _checked(l2_10, (v1, v0), v1, "l2_10")
        self.l3 = _checked(l3, (v0, v0, v0), v1, "l3")

    @property
    def v0(self) -> FinSpace:
        return self.complex.v0

    @property
    def v1(self) -> FinSpace:
        return self.complex.v1

    @property
    def d(self) -> LinearMap:
        return self.complex.d

    def __eq__(self, other):
        if not isinstance(other, ShLeibniz2):
            return NotImplemented
        return (self.complex.d == other.complex.d and self.l2_00 == other.l2_00
                and self.l2_01 == other.l2_01 and self.l2_10 == other.l2_10 and self.l3 == other.l3)

    def __hash__(self):
        return hash((self.complex.d, self.l2_00, self.l3))

    def __repr__(self):
        return f"ShLeibniz2(V1={self.v1.dim}, V0={self.v0.dim}, l3 nnz={len(self.l3.nonzero_entries())})"

    def replace(self, **kw) -> "ShLeibniz2":
        args = dict(complex=self.complex, l2_00=self.l2_00, l2_01=self.l2_01,
                    l2_10=self.l2_10, l3=self.l3)
        args.update(kw)
        return ShLeibniz2(**args)

    def ops(self) -> "FiniteOps":
        return FiniteOps(self)

    def labels0(self) -> list[str]:
        return [f"e{i + 1}" for i in range(self.v0.dim)]

    def labels1(self) -> list[str]:
        return [f"m{i + 1}" for i in range(self.v1.dim)]


def _checked(t, sources, target, name) -> StructureTensor:
    if t is None:
        return StructureTensor.zero(sources, target)
    if tuple(t.sources) != tuple(sources) or t.target != target:
        raise ShapeError(f"{name} has signature {[s.dim for s in t.sources]}->{t.target.dim}, "
                         f"expected {[s.dim for s in sources]}->{target.dim}")
    return t


@dataclass(frozen=True)
class ShMorphism:
    f0: LinearMap
    f1: LinearMap
    f2: StructureTensor

    def __post_init__(self):
        if self.f2.arity != 2 or self.f2.sources != (self.f0.source, self.f0.source):
            raise ShapeError("f2 must be bilinear on the source V0")
        if self.f2.target != self.f1.target:
            raise ShapeError("f2 must land in the target V1")

    @classmethod
    def identity(cls, a: ShLeibniz2) -> "ShMorphism":
        return cls(LinearMap.identity(a.v0), LinearMap.identity(a.v1),
                   StructureTensor.zero((a.v0, a.v0), a.v1))

    @classmethod
    def strict(cls, f0: LinearMap, f1: LinearMap) -> "ShMorphism":
        return cls(f0, f1, StructureTensor.zero((f0.source, f0.source), f1.target))


@dataclass
class TwoVectorElement:
    """An arrow ``v + m`` with source ``v`` and target ``v + dm``."""

    object_part: np.ndarray
    morphism_part: np.ndarray

    def source(self) -> np.ndarray:
        return self.object_part

    def target(self, d: LinearMap) -> np.ndarray:
        return self.object_part + apply_linear(d, self.morphism_part)

    def __eq__(self, other):
        return (isinstance(other, TwoVectorElement)
                and np.array_equal(self.object_part, other.object_part)
                and np.array_equal(self.morphism_part, other.morphism_part))


# ---------------------------------------------------------------------------
# generic, element-wise engine

class ShOps(Protocol):
    def d(self, m): ...
    def l2_00(self, x, y): ...
    def l2_01(self, x, m): ...
    def l2_10(self, m, x): ...
    def l3(self, x, y, z): ...


class FiniteOps:
    """Element-wise evaluation of a finite algebra (used as an oracle)."""

    def __init__(self, a: ShLeibniz2):
        self.a = a

    def d(self, m):
        return apply_linear(self.a.d, m)

    def l2_00(self, x, y):
        return apply_multi(self.a.l2_00, (x, y))

    def l2_01(self, x, m):
        return apply_multi(self.a.l2_01, (x, m))

    def l2_10(self, m, x):
        return apply_multi(self.a.l2_10, (m, x))

    def l3(self, x, y, z):
        return apply_multi(self.a.l3, (x, y, z))


class _Memo:
    def __init__(self, fn, args):
        self.fn = fn
        self.args = args
        self.cache = {}

    def __call__(self, *idx):
        v = self.cache.get(idx)
        if v is None:
            v = self.fn(*(self.args[k][i] for k, i in enumerate(idx)))
            self.cache[idx] = v
        return v


Labelled = Sequence[tuple[str, object]]


def check_family(ops: ShOps, xs: Labelled, ms: Labelled, *, l3_vanishes: bool = False,
                 subject: str = "", conditions: Sequence[str] = CONDITIONS) -> VerifyReport:
    """Check conditions (a)-(f) on all tuples drawn from the degree-0 family
    ``xs`` and the degree-1 family ``ms`` (pairs ``(label, value)``).

    ``l3_vanishes`` declares that l3 is identically zero; (f) is then vacuous.
    """
    rep = VerifyReport(subject or "sh Leibniz conditions")
    xl, xv = [p[0] for p in xs], [p[1] for p in xs]
    ml, mv = [p[0] for p in ms], [p[1] for p in ms]
    X, M = range(len(xv)), range(len(mv))
    A = _Memo(ops.l2_00, (xv, xv))
    Bm = _Memo(ops.l2_01, (xv, mv))
    Cm = _Memo(ops.l2_10, (mv, xv))
    T = _Memo(ops.l3, (xv, xv, xv))
    dm = [ops.d(m) for m in mv]

    def run(name, index_ranges, labels, fn):
        c = rep.add(name, CONDITION_LABELS[name])
        for idx in itertools.product(*index_ranges):
            c.checked += 1
            r = fn(*idx)
            if not is_zero(r):
                c.record(tuple(labels[k][i] for k, i in enumerate(idx)), r)

    if "(a)" in conditions:
        run("(a)", (X, M), (xl, ml), lambda x, m: ops.d(Bm(x, m)) - ops.l2_00(xv[x], dm[m]))
    if "(b)" in conditions:
        run("(b)", (M, X), (ml, xl), lambda m, x: ops.d(Cm(m, x)) - ops.l2_00(dm[m], xv[x]))
    if "(c)" in conditions:
        run("(c)", (M, M), (ml, ml),
            lambda m, n: ops.l2_01(dm[m], mv[n]) - ops.l2_10(mv[m], dm[n]))
    if "(d)" in conditions:
        def cond_d(x, y, z):
            defect = (ops.l2_00(xv[x], A(y, z)) - ops.l2_00(A(x, y), xv[z])
                      - ops.l2_00(xv[y], A(x, z)))
            return defect - ops.d(T(x, y, z))
        run("(d)", (X, X, X), (xl, xl, xl), cond_d)
    if "(e1)" in conditions:
        def cond_e1(x, y, m):
            defect = (ops.l2_01(xv[x], Bm(y, m)) - ops.l2_01(A(x, y), mv[m])
                      - ops.l2_01(xv[y], Bm(x, m)))
            return defect - ops.l3(xv[x], xv[y], dm[m])
        run("(e1)", (X, X, M), (xl, xl, ml), cond_e1)
    if "(e2)" in conditions:
        def cond_e2(x, m, y):
            defect = (ops.l2_01(xv[x], Cm(m, y)) - ops.l2_10(Bm(x, m), xv[y])
                      - ops.l2_10(mv[m], A(x, y)))
            return defect - ops.l3(xv[x], dm[m], xv[y])
        run("(e2)", (X, M, X), (xl, ml, xl), cond_e2)
    if "(e3)" in conditions:
        def cond_e3(m, x, y):
            defect = (ops.l2_10(mv[m], A(x, y)) - ops.l2_10(Cm(m, x), xv[y])
                      - ops.l2_01(xv[x], Cm(m, y)))
            return defect - ops.l3(dm[m], xv[x], xv[y])
        run("(e3)", (M, X, X), (ml, xl, xl), cond_e3)
    if "(f)" in conditions:
        if l3_vanishes:
            c = rep.add("(f)", CONDITION_LABELS["(f)"])
            c.note = "l3 vanishes identically; every term contains l3"
        else:
            def cond_f(w, x, y, z):
                W, Xx, Y, Z = xv[w], xv[x], xv[y], xv[z]
                return (ops.l2_01(W, T(x, y, z)) - ops.l2_01(Xx, T(w, y, z))
                        + ops.l2_01(Y, T(w, x, z)) + ops.l2_10(T(w, x, y), Z)
                        - ops.l3(A(w, x), Y, Z) - ops.l3(Xx, A(w, y), Z)
                        - ops.l3(Xx, Y, A(w, z)) + ops.l3(W, A(x, y), Z)
                        + ops.l3(W, Y, A(x, z)) - ops.l3(W, Xx, A(y, z)))
            run("(f)", (X, X, X, X), (xl, xl, xl, xl), cond_f)
    return rep


@dataclass
class MorphismOps:
    """Callables for ``(f0, f1, f2)`` acting on elements."""

    f0: Callable
    f1: Callable
    f2: Callable


def check_morphism_family(mor: MorphismOps, src: ShOps, dst: ShOps, xs: Labelled, ms: Labelled,
                          subject: str = "") -> VerifyReport:
    """Element-wise check of ``f0 d = d' f1``, the (c1) triple and (c2)."""
    rep = VerifyReport(subject or "morphism conditions")
    xl, xv = [p[0] for p in xs], [p[1] for p in xs]
    ml, mv = [p[0] for p in ms], [p[1] for p in ms]
    X, M = range(len(xv)), range(len(mv))
    F0 = [mor.f0(x) for x in xv]
    F1 = [mor.f1(m) for m in mv]
    dm = [src.d(m) for m in mv]
    A = _Memo(src.l2_00, (xv, xv))
    F2 = _Memo(mor.f2, (xv, xv))

    def run(name, index_ranges, labels, fn):
        c = rep.add(name, MORPHISM_LABELS[name])
        for idx in itertools.product(*index_ranges):
            c.checked += 1
            r = fn(*idx)
            if not is_zero(r):
                c.record(tuple(labels[k][i] for k, i in enumerate(idx)), r)

    run("chain", (M,), (ml,), lambda m: mor.f0(dm[m]) - dst.d(F1[m]))
    run("(c1) objects", (X, X), (xl, xl),
        lambda x, y: dst.l2_00(F0[x], F0[y]) - mor.f0(A(x, y)) - dst.d(F2(x, y)))
    run("(c1) left", (X, M), (xl, ml),
        lambda x, m: dst.l2_01(F0[x], F1[m]) - mor.f1(src.l2_01(xv[x], mv[m]))
        - mor.f2(xv[x], dm[m]))
    run("(c1) right", (M, X), (ml, xl),
        lambda m, x: dst.l2_10(F1[m], F0[x]) - mor.f1(src.l2_10(mv[m], xv[x]))
        - mor.f2(dm[m], xv[x]))

    def cond_c2(x, y, z):
        return (mor.f1(src.l3(xv[x], xv[y], xv[z])) + dst.l2_01(F0[x], F2(y, z))
                - dst.l2_01(F0[y], F2(x, z)) - dst.l2_10(F2(x, y), F0[z])
                - mor.f2(A(x, y), xv[z]) + mor.f2(xv[x], A(y, z)) - mor.f2(xv[y], A(x, z))
                - dst.l3(F0[x], F0[y], F0[z]))
    run("(c2)", (X, X, X), (xl, xl, xl), cond_c2)
    return rep


# ---------------------------------------------------------------------------
# finite algebras: whole-tensor verification

def _record_tensor(rep: VerifyReport, name: str, label: str, r: ScaledTensor,
                   labels: Sequence[Sequence[str]]) -> None:
    """Turn a residual tensor ``r[out, i1, .., ik]`` into a check result."""
    c = rep.add(name, label)
    c.checked = int(np.prod(r.shape[1:])) if len(r.shape) > 1 else 1
    tails = sorted({idx[1:] for idx in r.nonzero_indices()})
    for tail in tails:
        c.record(tuple(labels[k][i] for k, i in enumerate(tail)), r.at((slice(None),) + tail))


def condition_residuals(a: ShLeibniz2) -> dict[str, ScaledTensor]:
    """Residual tensors of (a)-(f); all vanish iff ``a`` is a 2-term sh Leibniz algebra.

    Axes are ``(out, arguments in the order of the condition)``.
    """
    D = ScaledTensor.of(a.d)
    A = ScaledTensor.of(a.l2_00)
    B = ScaledTensor.of(a.l2_01)
    C = ScaledTensor.of(a.l2_10)
    T = ScaledTensor.of(a.l3)
    e = scaled_einsum
    res = {}
    res["(a)"] = e("ab,bxm->axm", D, B) - e("axc,cm->axm", A, D)
    res["(b)"] = e("ab,bmx->amx", D, C) - e("acx,cm->amx", A, D)
    res["(c)"] = e("acn,cm->amn", B, D) - e("amc,cn->amn", C, D)
    res["(d)"] = (e("axc,cyz->axyz", A, A) - e("acz,cxy->axyz", A, A)
                  - e("ayc,cxz->axyz", A, A) - e("ab,bxyz->axyz", D, T))
    res["(e1)"] = (e("axc,cym->axym", B, B) - e("acm,cxy->axym", B, A)
                   - e("ayc,cxm->axym", B, B) - e("axyc,cm->axym", T, D))
    res["(e2)"] = (e("axc,cmy->axmy", B, C) - e("acy,cxm->axmy", C, B)
                   - e("amc,cxy->axmy", C, A) - e("axcy,cm->axmy", T, D))
    res["(e3)"] = (e("amc,cxy->amxy", C, A) - e("acy,cmx->amxy", C, C)
                   - e("axc,cmy->amxy", B, C) - e("acxy,cm->amxy", T, D))
    res["(f)"] = (e("awc,cxyz->awxyz", B, T) - e("axc,cwyz->awxyz", B, T)
                  + e("ayc,cwxz->awxyz", B, T) + e("acz,cwxy->awxyz", C, T)
                  - e("acyz,cwx->awxyz", T, A) - e("axcz,cwy->awxyz", T, A)
                  - e("axyc,cwz->awxyz", T, A) + e("awcz,cxy->awxyz", T, A)
                  + e("awyc,cxz->awxyz", T, A) - e("awxc,cyz->awxyz", T, A))
    return res


def check_sh_leibniz(a: ShLeibniz2) -> VerifyReport:
    """Verify conditions (a)-(f) on all basis tuples."""
    if not isinstance(a, ShLeibniz2):
        raise ShapeError("expected a ShLeibniz2")
    rep = VerifyReport("2-term sh Leibniz algebra")
    L0, L1 = a.labels0(), a.labels1()
    arg_labels = {"(a)": (L0, L1), "(b)": (L1, L0), "(c)": (L1, L1), "(d)": (L0, L0, L0),
                  "(e1)": (L0, L0, L1), "(e2)": (L0, L1, L0), "(e3)": (L1, L0, L0),
                  "(f)": (L0, L0, L0, L0)}
    for name, r in condition_residuals(a).items():
        _record_tensor(rep, name, CONDITION_LABELS[name], r, arg_labels[name])
    return rep


@dataclass(frozen=True)
class Classification:
    dg: bool
    skeletal: bool
    l_infinity: bool

    def as_dict(self) -> dict:
        return {"dg": self.dg, "skeletal": self.skeletal, "l_infinity": self.l_infinity}


def classify(a: ShLeibniz2) -> Classification:
    dg = a.l3.is_zero()
    skeletal = a.d.is_zero()
    A, B, C, T = (t.coefficients for t in (a.l2_00, a.l2_01, a.l2_10, a.l3))
    skew = (np.array_equal(A, -np.swapaxes(A, 1, 2))
            and np.array_equal(B, -np.swapaxes(C, 1, 2)))
    if skew:
        for perm in ((0, 2, 1, 3), (0, 1, 3, 2)):
            if not np.array_equal(T, -np.transpose(T, perm)):
                skew = False
                break
    return Classification(dg, skeletal, skew)


def morphism_residuals(F0, F1, F2, src: ShLeibniz2, dst: ShLeibniz2) -> dict[str, ScaledTensor]:
    """Residual tensors of the morphism conditions.

    ``F2`` may carry leading batch axes (``[..., out, x, y]``); residuals then
    carry the same leading axes, which turns the conditions into a linear
    system for ``f2``.
    """
    F0, F1, F2 = (t if isinstance(t, ScaledTensor) else ScaledTensor.of(t) for t in (F0, F1, F2))
    D, D2 = ScaledTensor.of(src.d), ScaledTensor.of(dst.d)
    A, B, C, T = (ScaledTensor.of(t) for t in (src.l2_00, src.l2_01, src.l2_10, src.l3))
    A2, B2, C2, T2 = (ScaledTensor.of(t) for t in (dst.l2_00, dst.l2_01, dst.l2_10, dst.l3))
    e = scaled_einsum
    res = {}
    res["chain"] = e("ab,bm->am", F0, D) - e("ab,bm->am", D2, F1)
    res["(c1) objects"] = (e("abc,bx,cy->axy", A2, F0, F0) - e("ab,bxy->axy", F0, A)
                           - e("ab,...bxy->...axy", D2, F2))
    res["(c1) left"] = (e("abc,bx,cm->axm", B2, F0, F1) - e("ab,bxm->axm", F1, B)
                        - e("...axc,cm->...axm", F2, D))
    res["(c1) right"] = (e("abc,bm,cx->amx", C2, F1, F0) - e("ab,bmx->amx", F1, C)
                         - e("...acx,cm->...amx", F2, D))
    res["(c2)"] = (e("ab,bxyz->axyz", F1, T) + e("abc,bx,...cyz->...axyz", B2, F0, F2)
                   - e("abc,by,...cxz->...axyz", B2, F0, F2)
                   - e("abc,...bxy,cz->...axyz", C2, F2, F0)
                   - e("...acz,cxy->...axyz", F2, A) + e("...axc,cyz->...axyz", F2, A)
                   - e("...ayc,cxz->...axyz", F2, A)
                   - e("abcd,bx,cy,dz->axyz", T2, F0, F0, F0))
    return res


def check_morphism(f: ShMorphism, src: ShLeibniz2, dst: ShLeibniz2) -> VerifyReport:
    """Verify ``f0 d = d' f1``, the three equations (c1) and (c2) on basis tuples."""
    if (f.f0.source != src.v0 or f.f0.target != dst.v0 or f.f1.source != src.v1
            or f.f1.target != dst.v1):
        raise ShapeError("morphism does not match the given algebras")
    rep = VerifyReport("sh Leibniz morphism")
    L0, L1 = src.labels0(), src.labels1()
    labels = {"chain": (L1,), "(c1) objects": (L0, L0), "(c1) left": (L0, L1),
              "(c1) right": (L1, L0), "(c2)": (L0, L0, L0)}
    for name, r in morphism_residuals(f.f0, f.f1, f.f2, src, dst).items():
        _record_tensor(rep, name, MORPHISM_LABELS[name], r, labels[name])
    return rep


def compose_morphisms(g: ShMorphism, f: ShMorphism) -> ShMorphism:
    """``g o f`` with ``(g o f)_2(x, y) = g1 f2(x, y) + g2(f0 x, f0 y)``."""
    if f.f0.target != g.f0.source or f.f1.target != g.f1.source:
        raise ShapeError("morphisms are not composable")
    f2 = postcompose(g.f1, f.f2) + precompose_slot(precompose_slot(g.f2, 0, f.f0), 1, f.f0)
    return ShMorphism(compose_linear(g.f0, f.f0), compose_linear(g.f1, f.f1), f2)


# ---------------------------------------------------------------------------
# object-level constructions on the associated 2-vector space

def functor_bracket(a: ShLeibniz2, p: TwoVectorElement, q: TwoVectorElement) -> TwoVectorElement:
    """Bracket of arrows: ``[x+m, y+n] = l2(x,y) + l2(x,n) + l2(m,y) + l2(m,dn)``."""
    x, m, y, n = p.object_part, p.morphism_part, q.object_part, q.morphism_part
    for v, s in ((x, a.v0), (y, a.v0), (m, a.v1), (n, a.v1)):
        if len(v) != s.dim:
            raise ShapeError("element does not match the algebra")
    obj = apply_multi(a.l2_00, (x, y))
    mor = (apply_multi(a.l2_01, (x, n)) + apply_multi(a.l2_10, (m, y))
           + apply_multi(a.l2_10, (m, apply_linear(a.d, n))))
    return TwoVectorElement(obj, mor)


def jacobiator(a: ShLeibniz2, x, y, z) -> TwoVectorElement:
    """The arrow ``[[x,y],z] + l3(x,y,z)``; its target is checked against (d)."""
    xy = apply_multi(a.l2_00, (x, y))
    J = TwoVectorElement(apply_multi(a.l2_00, (xy, z)), apply_multi(a.l3, (x, y, z)))
    expected = (apply_multi(a.l2_00, (x, apply_multi(a.l2_00, (y, z))))
                - apply_multi(a.l2_00, (y, apply_multi(a.l2_00, (x, z)))))
    diff = expected - J.target(a.d)
    if not is_zero(diff):
        raise ConditionViolation("(d)", (_fmt(x), _fmt(y), _fmt(z)), diff)
    return J


def _fmt(v) -> str:
    return "(" + ", ".join(str(as_rational(c)) for c in v) + ")"


def lemma_rep1_residual(a: ShLeibniz2) -> ScaledTensor:
    """``l2(l2(x,m),y) + l2(l2(m,x),y)`` as a tensor on ``(x, m, y)``."""
    B, C = ScaledTensor.of(a.l2_01), ScaledTensor.of(a.l2_10)
    return scaled_einsum("acy,cxm->axmy", C, B) + scaled_einsum("acy,cmx->axmy", C, C)


def zero_vector(space: FinSpace) -> np.ndarray:
    return zeros(space.dim)

"""Leibniz cochains ``C^k(g, V) = Hom(g^{(x)k}, V)`` and the coboundary operator."""
from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

from .algebra_core import ScaledTensor, ShapeError, StructureTensor, scaled_einsum, vector
from .crossed_module import LeibnizRep, _labels
from .report import VerifyReport
from .sh_leibniz import _record_tensor


@dataclass(frozen=True)
class Cochain:
    """A k-cochain; for ``degree == 0`` the value is a module vector."""

    degree: int
    rep: LeibnizRep
    value: object

    def __post_init__(self):
        g, V = self.rep.algebra.space, self.rep.module
        if self.degree < 0:
            raise ShapeError("negative degree")
        if self.degree == 0:
            v = self.value
            if not isinstance(v, np.ndarray):
                v = vector(v)
                object.__setattr__(self, "value", v)
            if v.shape != (V.dim,):
                raise ShapeError("degree-0 cochain must be a module vector")
        else:
            t = self.value
            if not isinstance(t, StructureTensor) or t.sources != (g,) * self.degree or t.target != V:
                raise ShapeError(f"degree-{self.degree} cochain must be a map g^{self.degree} -> V")

    def array(self) -> np.ndarray:
        return self.value if self.degree == 0 else self.value.coefficients

    def is_zero(self) -> bool:
        return not self.array().any()

    @classmethod
    def zero(cls, degree: int, rep: LeibnizRep) -> "Cochain":
        g, V = rep.algebra.space, rep.module
        if degree == 0:
            return cls(0, rep, V.zero())
        return cls(degree, rep, StructureTensor.zero((g,) * degree, V))


def coboundary_tensor(c: Cochain) -> ScaledTensor:
    """``(dc)[a, g_1..g_{k+1}]`` as an exact tensor.

    Three sums: left actions of ``g_i`` for ``i <= k`` with sign ``(-1)^{i+1}``,
    the right action of ``g_{k+1}`` with sign ``(-1)^{k+1}``, and ``(-1)^i c``
    evaluated with ``g_i`` removed and ``[g_i, g_j]`` placed where ``g_j`` was.
    """
    k = c.degree
    L = ScaledTensor.of(c.rep.left)
    R = ScaledTensor.of(c.rep.right)
    P = ScaledTensor.of(c.rep.algebra.bracket)
    C = ScaledTensor.of(c.array())
    letters = string.ascii_lowercase[:k + 1]  # g_1..g_{k+1}
    out = "A" + letters
    g_dim, v_dim = c.rep.algebra.dim, c.rep.module.dim
    total = ScaledTensor(np.zeros((v_dim,) + (g_dim,) * (k + 1), dtype=object), 1)
    for i in range(1, k + 1):
        rest = letters[:i - 1] + letters[i:]
        term = scaled_einsum(f"A{letters[i - 1]}B,B{rest}->{out}", L, C)
        total = total + term if (i + 1) % 2 == 0 else total - term
    term = scaled_einsum(f"AB{letters[k]},B{letters[:k]}->{out}", R, C)
    total = total + term if (k + 1) % 2 == 0 else total - term
    for i in range(1, k + 2):
        for j in range(i + 1, k + 2):
            # delete g_i; slot j-1 (1-based) of the rest carries [g_i, g_j]
            args = [letters[p - 1] for p in range(1, k + 2) if p != i]
            args[j - 2] = "Z"
            term = scaled_einsum(f"A{''.join(args)},Z{letters[i - 1]}{letters[j - 1]}->{out}", C, P)
            total = total + term if i % 2 == 0 else total - term
    return total


def coboundary(c: Cochain) -> Cochain:
    g, V = c.rep.algebra.space, c.rep.module
    arr = coboundary_tensor(c).to_fractions()
    return Cochain(c.degree + 1, c.rep, StructureTensor((g,) * (c.degree + 1), V, arr))


def is_cocycle(c: Cochain) -> tuple[bool, VerifyReport]:
    rep = VerifyReport(f"{c.degree}-cocycle")
    labels = _labels("e", c.rep.algebra.dim)
    _record_tensor(rep, "cocycle", "coboundary vanishes", coboundary_tensor(c),
                   (labels,) * (c.degree + 1))
    return rep.passed, rep

"""Cartan calculus on R^n with polynomial coefficients.

Forms and multivector fields are flat sparse maps
``(strictly increasing index tuple, exponent tuple) -> coefficient`` with
0-based indices (``dx_{i+1}``, ``d_{i+1}`` in text).

Conventions: ``i_X`` contracts the first slot,
``i_X(dx_{i1} ^ .. ^ dx_{ik}) = sum_s (-1)^s X^{i_s} (.. without dx_{i_s} ..)``
with ``s`` counted from 0; iterated contraction ``i_{X^Y^Z} = i_Z i_Y i_X``;
for a 3-form ``h(X, Y) = i_Y i_X h``.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping

from .algebra_core import ShapeError
from .poly import ParseError, Poly, add_into, grlex_key, norm, parse_poly, poly_to_text


class DegreeError(ValueError):
    """A form or multivector of the wrong degree was supplied."""


def _insert_sorted(idx: tuple[int, ...], j: int) -> tuple[tuple[int, ...], int] | None:
    """``dx_j ^ dx_idx`` as ``sign * dx_(sorted)``; None when ``j`` repeats."""
    pos = 0
    for k in idx:
        if k == j:
            return None
        if k < j:
            pos += 1
        else:
            break
    return idx[:pos] + (j,) + idx[pos:], (-1 if pos % 2 else 1)


def _merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[int, ...], int] | None:
    """``dx_a ^ dx_b`` sorted, with the permutation sign; None if they overlap."""
    if set(a) & set(b):
        return None
    inversions = sum(1 for x in a for y in b if x > y)
    return tuple(sorted(a + b)), (-1 if inversions % 2 else 1)


def _add_exp(e1, e2):
    return tuple(a + b for a, b in zip(e1, e2))


class _Graded:
    """Shared sparse storage for forms and multivectors."""

    __slots__ = ("n", "degree", "terms", "_hash")
    prefix = "?"

    def __init__(self, n: int, degree: int, terms: Mapping | None = None):
        if not 0 <= degree <= n:
            raise DegreeError(f"degree {degree} not in 0..{n}")
        self.n, self.degree, self._hash = n, degree, None
        clean: dict = {}
        for (idx, exp), c in (terms or {}).items():
            idx, exp = tuple(idx), tuple(exp)
            if len(idx) != degree or len(exp) != n:
                raise ShapeError(f"term {(idx, exp)} does not fit degree {degree} on R^{n}")
            if any(not 0 <= i < n for i in idx):
                raise ShapeError(f"index out of range in {idx}")
            if len(set(idx)) != len(idx):
                continue
            order = sorted(range(degree), key=lambda k: idx[k])
            sidx = tuple(idx[k] for k in order)
            sign = _perm_sign(order)
            c = norm(c)
            if c:
                add_into(clean, (sidx, exp), sign * c)
        self.terms = clean

    @classmethod
    def _raw(cls, n, degree, terms):
        o = cls.__new__(cls)
        o.n, o.degree, o.terms, o._hash = n, degree, terms, None
        return o

    @classmethod
    def zero(cls, n: int, degree: int):
        return cls._raw(n, degree, {})

    @classmethod
    def from_components(cls, n: int, degree: int, comps: Mapping[tuple[int, ...], Poly]):
        """Build from ``{index tuple: Poly}`` (0-based, any order; antisymmetrized)."""
        terms: dict = {}
        for idx, p in comps.items():
            if not isinstance(p, Poly):
                p = Poly.const(n, p)
            for e, c in p.terms.items():
                terms[(tuple(idx), e)] = terms.get((tuple(idx), e), 0) + c
        # the constructor sorts indices and merges
        out = cls(n, degree, {})
        for (idx, e), c in terms.items():
            tmp = cls(n, degree, {(idx, e): c})
            for k, v in tmp.terms.items():
                add_into(out.terms, k, v)
        return out

    @classmethod
    def basis(cls, n: int, idx, coeff: Poly | int = 1):
        """``coeff * dx_idx`` (or ``coeff * d_idx``) with 0-based ``idx``."""
        idx = tuple(idx)
        return cls.from_components(n, len(idx), {idx: coeff})

    def components(self) -> dict[tuple[int, ...], Poly]:
        out: dict = {}
        for (idx, e), c in self.terms.items():
            out.setdefault(idx, {})[e] = c
        return {idx: Poly._raw(self.n, t) for idx, t in out.items()}

    def component(self, idx) -> Poly:
        idx = tuple(idx)
        return Poly._raw(self.n, {e: c for (i, e), c in self.terms.items() if i == idx})

    def _same(self, other) -> None:
        if type(self) is not type(other):
            raise ShapeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.n != other.n or self.degree != other.degree:
            raise ShapeError(f"shape mismatch: ({self.n}, {self.degree}) vs ({other.n}, {other.degree})")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            add_into(out, k, c)
        return type(self)._raw(self.n, self.degree, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.n, self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            add_into(out, k, -c)
        return type(self)._raw(self.n, self.degree, out)

    def scale(self, f) -> "_Graded":
        """Multiply by a polynomial or a scalar."""
        if not isinstance(f, Poly):
            c = norm(f)
            if not c:
                return type(self)._raw(self.n, self.degree, {})
            return type(self)._raw(self.n, self.degree, {k: norm(v * c) for k, v in self.terms.items()})
        if f.n != self.n:
            raise ShapeError("variable counts differ")
        out: dict = {}
        for (idx, e), c in self.terms.items():
            for e2, c2 in f.terms.items():
                add_into(out, (idx, _add_exp(e, e2)), c * c2)
        return type(self)._raw(self.n, self.degree, out)

    def __mul__(self, f):
        return self.scale(f)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if type(self) is not type(other):
            return NotImplemented
        return self.n == other.n and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.n, self.degree, frozenset(self.terms.items())))
        return self._hash

    def permute_variables(self, perm):
        """Relabel coordinates ``x_i -> x_{perm[i]}`` (indices and exponents alike)."""
        out: dict = {}
        for (idx, e), c in self.terms.items():
            e2 = [0] * self.n
            for i, k in enumerate(e):
                e2[perm[i]] = k
            new_idx = [perm[i] for i in idx]
            order = sorted(range(len(new_idx)), key=lambda k: new_idx[k])
            add_into(out, (tuple(new_idx[k] for k in order), tuple(e2)), _perm_sign(order) * c)
        return type(self)._raw(self.n, self.degree, out)

    def to_text(self) -> str:
        if not self.terms:
            return f"0 ({self.prefix}{self.degree})"
        parts = []
        for idx, p in sorted(self.components().items()):
            name = "^".join(f"{self.prefix}{i + 1}" for i in idx) if idx else "1"
            parts.append(f"({p.to_text()}) {name}")
        return " + ".join(parts)

    def to_pairs(self) -> list[list]:
        """Serializable ``[[1-based indices], "poly"]`` pairs in sorted order."""
        return [[[i + 1 for i in idx], p.to_text()] for idx, p in sorted(self.components().items())]

    @classmethod
    def from_pairs(cls, n: int, degree: int, pairs: Iterable) -> "_Graded":
        comps: dict = {}
        for k, pair in enumerate(pairs):
            try:
                idx, text = pair
                idx = tuple(int(i) - 1 for i in idx)
            except (TypeError, ValueError):
                raise ParseError(f"component {k} must be [indices, polynomial]") from None
            if len(idx) != degree:
                raise ParseError(f"component {k} has {len(idx)} indices, expected {degree}")
            if any(not 0 <= i < n for i in idx):
                raise ParseError(f"component {k} has an index outside 1..{n}")
            p = parse_poly(text, n)
            comps[idx] = comps[idx] + p if idx in comps else p
        return cls.from_components(n, degree, comps)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, {self.to_text()})"


def _perm_sign(order) -> int:
    inv = 0
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b]:
                inv += 1
    return -1 if inv % 2 else 1


class PolyForm(_Graded):
    __slots__ = ()
    prefix = "dx"


class PolyMultivector(_Graded):
    __slots__ = ()
    prefix = "d"


def function_form(p: Poly) -> PolyForm:
    return PolyForm._raw(p.n, 0, {((), e): c for e, c in p.terms.items()})


def as_function(w: PolyForm) -> Poly:
    if w.degree != 0:
        raise DegreeError("expected a 0-form")
    return Poly._raw(w.n, {e: c for (_, e), c in w.terms.items()})


def dx(n: int, *idx: int, coeff=1) -> PolyForm:
    """``coeff dx_{i1} ^ ...`` with 1-based indices (convenience)."""
    return PolyForm.basis(n, tuple(i - 1 for i in idx), coeff)


def partial(n: int, *idx: int, coeff=1) -> PolyMultivector:
    """``coeff d_{i1} ^ ...`` with 1-based indices (convenience)."""
    return PolyMultivector.basis(n, tuple(i - 1 for i in idx), coeff)


def var(n: int, i: int) -> Poly:
    """``x_i`` with a 1-based index."""
    return Poly.var(n, i - 1)


# ---------------------------------------------------------------------------
# operations

def d(w: PolyForm) -> PolyForm:
    """de Rham differential: ``d(f dx_I) = sum_j d_j f dx_j ^ dx_I``."""
    if w.degree >= w.n:
        raise DegreeError(f"d of a top-degree form on R^{w.n}")
    out: dict = {}
    for (idx, e), c in w.terms.items():
        for j, k in enumerate(e):
            if not k:
                continue
            ins = _insert_sorted(idx, j)
            if ins is None:
                continue
            new_idx, sign = ins
            add_into(out, (new_idx, e[:j] + (k - 1,) + e[j + 1:]), sign * c * k)
    return PolyForm._raw(w.n, w.degree + 1, out)


def d_function(p: Poly) -> PolyForm:
    return d(function_form(p))


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    if a.n != b.n:
        raise ShapeError("variable counts differ")
    if a.degree + b.degree > a.n:
        raise DegreeError(f"degree {a.degree + b.degree} exceeds dimension {a.n}")
    out: dict = {}
    for (i1, e1), c1 in a.terms.items():
        for (i2, e2), c2 in b.terms.items():
            m = _merge_sign(i1, i2)
            if m is None:
                continue
            idx, sign = m
            add_into(out, (idx, _add_exp(e1, e2)), sign * c1 * c2)
    return PolyForm._raw(a.n, a.degree + b.degree, out)


def _require_vf(X) -> None:
    if not isinstance(X, PolyMultivector) or X.degree != 1:
        raise DegreeError("expected a vector field (degree-1 multivector)")


def interior(X: PolyMultivector, w: PolyForm) -> PolyForm:
    """Contraction of ``X`` into the first slot of ``w``."""
    _require_vf(X)
    if w.degree < 1:
        raise DegreeError("cannot contract a 0-form")
    if X.n != w.n:
        raise ShapeError("variable counts differ")
    out: dict = {}
    xt = X.terms
    if not xt or not w.terms:
        return PolyForm._raw(w.n, w.degree - 1, out)
    by_index: dict = {}
    for ((i,), e), c in xt.items():
        by_index.setdefault(i, []).append((e, c))
    for (idx, e2), c2 in w.terms.items():
        for s, i in enumerate(idx):
            xs = by_index.get(i)
            if not xs:
                continue
            rest = idx[:s] + idx[s + 1:]
            sc = -c2 if s % 2 else c2
            for e1, c1 in xs:
                add_into(out, (rest, _add_exp(e1, e2)), c1 * sc)
    return PolyForm._raw(w.n, w.degree - 1, out)


def interior_multi(Xs, w: PolyForm) -> PolyForm:
    """``i_{X1 ^ .. ^ Xk} w = i_Xk .. i_X1 w`` (``X1`` contracted first)."""
    Xs = list(Xs)
    if w.degree < len(Xs):
        raise DegreeError(f"cannot contract {len(Xs)} fields into a {w.degree}-form")
    for X in Xs:
        w = interior(X, w)
    return w


def pair(w: PolyForm, X: PolyMultivector) -> Poly:
    """``w(X)`` for a 1-form ``w``."""
    return as_function(interior(X, w))


def apply_vf(X: PolyMultivector, f: Poly) -> Poly:
    """``X(f) = sum_i X^i d_i f``."""
    _require_vf(X)
    out: dict = {}
    derivs: dict = {}
    for ((i,), e1), c1 in X.terms.items():
        if i not in derivs:
            derivs[i] = f.diff(i).terms
        for e2, c2 in derivs[i].items():
            add_into(out, _add_exp(e1, e2), c1 * c2)
    return Poly._raw(f.n, out)


def lie_derivative(X: PolyMultivector, w: PolyForm) -> PolyForm:
    """Cartan's formula ``L_X = i_X d + d i_X``."""
    _require_vf(X)
    if w.degree == 0:
        return function_form(apply_vf(X, as_function(w)))
    first = interior(X, d(w)) if w.degree < w.n else PolyForm.zero(w.n, w.degree)
    return first + d(interior(X, w))


def vf_bracket(X: PolyMultivector, Y: PolyMultivector) -> PolyMultivector:
    """``[X, Y]^i = X^j d_j Y^i - Y^j d_j X^i``."""
    _require_vf(X)
    _require_vf(Y)
    if X.n != Y.n:
        raise ShapeError("variable counts differ")
    out: dict = {}
    for A, B, sign in ((X, Y, 1), (Y, X, -1)):
        for ((j,), e1), c1 in A.terms.items():
            for ((i,), e2), c2 in B.terms.items():
                k = e2[j]
                if k:
                    e = tuple(a + b for a, b in zip(e1, e2))
                    e = e[:j] + (e[j] - 1,) + e[j + 1:]
                    add_into(out, ((i,), e), sign * c1 * c2 * k)
    return PolyMultivector._raw(X.n, 1, out)


def _bivector_matrix(pi: PolyMultivector) -> dict[tuple[int, int], Poly]:
    """Antisymmetric entries ``pi^{ij}``."""
    if not isinstance(pi, PolyMultivector) or pi.degree != 2:
        raise DegreeError("expected a bivector")
    m: dict = {}
    for (i, j), p in pi.components().items():
        m[(i, j)] = p
        m[(j, i)] = -p
    return m


def schouten_sq(pi: PolyMultivector) -> PolyMultivector:
    """``[pi,pi]^{ijk} = 2 sum_l (pi^{li} d_l pi^{jk} + pi^{lj} d_l pi^{ki} + pi^{lk} d_l pi^{ij})``."""
    n = pi.n
    m = _bivector_matrix(pi)
    zero = Poly.const(n, 0)

    def P(a, b):
        return m.get((a, b), zero)

    comps = {}
    for i, j, k in itertools.combinations(range(n), 3):
        total = zero
        for l in range(n):
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                pla = P(l, a)
                if pla:
                    dbc = P(b, c).diff(l)
                    if dbc:
                        total = total + pla * dbc
        if total:
            comps[(i, j, k)] = total * 2
    return PolyMultivector.from_components(n, 3, comps) if comps else PolyMultivector.zero(n, 3)


def sharp(pi: PolyMultivector, xi: PolyForm) -> PolyMultivector:
    """``(pi# xi)^j = sum_i xi_i pi^{ij}``."""
    if not isinstance(xi, PolyForm) or xi.degree != 1:
        raise DegreeError("expected a 1-form")
    m = _bivector_matrix(pi)
    out: dict = {}
    for ((i,), e1), c1 in xi.terms.items():
        for (a, j), p in m.items():
            if a != i:
                continue
            for e2, c2 in p.terms.items():
                add_into(out, ((j,), _add_exp(e1, e2)), c1 * c2)
    return PolyMultivector._raw(pi.n, 1, out)


def triple_sharp(pi: PolyMultivector, h: PolyForm) -> PolyMultivector:
    """``(^3 pi# h)^{ijk} = sum h_{lmn} pi^{li} pi^{mj} pi^{nk}``."""
    if not isinstance(h, PolyForm) or h.degree != 3:
        raise DegreeError("expected a 3-form")
    n = pi.n
    m = _bivector_matrix(pi)
    zero = Poly.const(n, 0)
    hc = {}
    for (a, b, c), p in h.components().items():
        for perm in itertools.permutations(range(3)):
            idx = tuple((a, b, c)[q] for q in perm)
            hc[idx] = p if _perm_sign(perm) > 0 else -p
    comps = {}
    for i, j, k in itertools.combinations(range(n), 3):
        total = zero
        for (l, mm, nn), hp in hc.items():
            a, b, c = m.get((l, i)), m.get((mm, j)), m.get((nn, k))
            if a and b and c:
                total = total + hp * a * b * c
        if total:
            comps[(i, j, k)] = total
    return PolyMultivector.from_components(n, 3, comps) if comps else PolyMultivector.zero(n, 3)


def parse_form(n: int, degree: int, pairs) -> PolyForm:
    return PolyForm.from_pairs(n, degree, pairs)


def parse_multivector(n: int, degree: int, pairs) -> PolyMultivector:
    return PolyMultivector.from_pairs(n, degree, pairs)


__all__ = [
    "DegreeError", "ParseError", "Poly", "PolyForm", "PolyMultivector", "apply_vf", "as_function",
    "d", "d_function", "dx", "function_form", "interior", "interior_multi", "lie_derivative", "pair",
    "parse_form", "parse_multivector", "parse_poly", "partial", "poly_to_text", "schouten_sq",
    "sharp", "triple_sharp", "var", "vf_bracket", "wedge", "grlex_key",
]

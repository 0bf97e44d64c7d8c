"""Exact rational linear and multilinear algebra on based finite-dimensional spaces.

Vectors are 1-d numpy object arrays of :class:`fractions.Fraction`. Linear maps
and structure tensors keep dense coefficient arrays; a sparse column view is
cached on each tensor so that evaluation on basis vectors is cheap.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

Rational = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


class ShapeError(ValueError):
    """Dimension, arity or space mismatch."""


class PreconditionError(ValueError):
    """An operation was called on data that fails its documented gate."""


class InternalInconsistencyError(RuntimeError):
    """A fact that must hold mathematically did not; signals a bug."""


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings. Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (np.integer,)):
        return Fraction(int(x))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rational_str(q) -> str:
    q = as_rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def zeros(*shape: int) -> np.ndarray:
    a = np.empty(shape, dtype=object)
    a.fill(ZERO)
    return a


def vector(entries: Iterable) -> np.ndarray:
    entries = [as_rational(e) for e in entries]
    a = np.empty(len(entries), dtype=object)
    for i, e in enumerate(entries):
        a[i] = e
    return a


def basis_vector(dim: int, i: int) -> np.ndarray:
    v = zeros(dim)
    v[i] = ONE
    return v


def is_zero(v) -> bool:
    """Exact zero test for numpy vectors and for the symbolic value types."""
    if isinstance(v, np.ndarray):
        return not v.any()
    return not v


def _as_array(data, shape: tuple[int, ...]) -> np.ndarray:
    if isinstance(data, np.ndarray) and data.dtype == object:
        arr = data.copy()
    else:
        arr = np.array(data, dtype=object)
    if arr.shape != shape:
        if arr.size == 0 and int(np.prod(shape)) == 0:
            arr = zeros(*shape)
        else:
            raise ShapeError(f"coefficient array has shape {arr.shape}, expected {shape}")
    flat = arr.reshape(-1)
    for i, e in enumerate(flat):
        flat[i] = as_rational(e)
    arr = flat.reshape(shape)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class FinSpace:
    """A based space Q^dim. The label is cosmetic and ignored by equality."""

    dim: int
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 0:
            raise ShapeError(f"dimension must be a non-negative integer, got {self.dim!r}")

    def basis(self) -> list[np.ndarray]:
        return [basis_vector(self.dim, i) for i in range(self.dim)]

    def zero(self) -> np.ndarray:
        return zeros(self.dim)


def _check_vector(v, space: FinSpace) -> np.ndarray:
    if not isinstance(v, np.ndarray):
        v = vector(v)
    if v.shape != (space.dim,):
        raise ShapeError(f"vector of length {len(v)} does not live in a space of dimension {space.dim}")
    return v


class LinearMap:
    """A matrix with declared source and target spaces (shape target x source)."""

    __slots__ = ("source", "target", "coefficients", "__dict__")

    def __init__(self, source: FinSpace, target: FinSpace, coefficients):
        self.source = source
        self.target = target
        self.coefficients = _as_array(coefficients, (target.dim, source.dim))

    @classmethod
    def identity(cls, space: FinSpace) -> "LinearMap":
        m = zeros(space.dim, space.dim)
        for i in range(space.dim):
            m[i, i] = ONE
        return cls(space, space, m)

    @classmethod
    def zero(cls, source: FinSpace, target: FinSpace) -> "LinearMap":
        return cls(source, target, zeros(target.dim, source.dim))

    def __call__(self, v) -> np.ndarray:
        return apply_linear(self, v)

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return compose_linear(self, other)

    def scaled(self, c) -> "LinearMap":
        return LinearMap(self.source, self.target, self.coefficients * as_rational(c))

    def is_zero(self) -> bool:
        return not self.coefficients.any()

    @cached_property
    def _columns(self) -> list[list[tuple[int, Fraction]]]:
        cols = []
        for j in range(self.source.dim):
            cols.append([(i, c) for i, c in enumerate(self.coefficients[:, j]) if c])
        return cols

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and np.array_equal(self.coefficients, other.coefficients))

    def __hash__(self):
        return hash((self.source.dim, self.target.dim, tuple(self.coefficients.reshape(-1))))

    def __repr__(self):
        rows = [[rational_str(c) for c in row] for row in self.coefficients]
        return f"LinearMap({self.source.dim}->{self.target.dim}, {rows})"


class StructureTensor:
    """Multilinear map ``sources[0] x ... x sources[k-1] -> target``.

    ``coefficients[a, i1, ..., ik]`` is the ``a``-th coordinate of the value on
    basis vectors ``(e_i1, ..., e_ik)``.
    """

    __slots__ = ("sources", "target", "coefficients", "__dict__")

    def __init__(self, sources: Sequence[FinSpace], target: FinSpace, coefficients):
        self.sources = tuple(sources)
        self.target = target
        if not self.sources:
            raise ShapeError("a structure tensor needs at least one argument")
        shape = (target.dim,) + tuple(s.dim for s in self.sources)
        self.coefficients = _as_array(coefficients, shape)

    @property
    def arity(self) -> int:
        return len(self.sources)

    @classmethod
    def zero(cls, sources: Sequence[FinSpace], target: FinSpace) -> "StructureTensor":
        shape = (target.dim,) + tuple(s.dim for s in sources)
        return cls(sources, target, zeros(*shape))

    @classmethod
    def from_entries(cls, sources: Sequence[FinSpace], target: FinSpace,
                     entries: Mapping[tuple[int, ...], object]) -> "StructureTensor":
        """Build from ``{(out, i1, ..., ik): coefficient}`` with 0-based indices."""
        shape = (target.dim,) + tuple(s.dim for s in sources)
        arr = zeros(*shape)
        for idx, c in entries.items():
            if len(idx) != len(shape):
                raise ShapeError(f"index {idx} does not match arity {len(sources)}")
            arr[idx] = arr[idx] + as_rational(c)
        return cls(sources, target, arr)

    @classmethod
    def from_function(cls, sources: Sequence[FinSpace], target: FinSpace, fn) -> "StructureTensor":
        """Tabulate a multilinear ``fn`` on basis tuples."""
        shape = (target.dim,) + tuple(s.dim for s in sources)
        arr = zeros(*shape)
        for idx in itertools.product(*(range(s.dim) for s in sources)):
            args = [basis_vector(s.dim, i) for s, i in zip(sources, idx)]
            val = _check_vector(fn(*args), target)
            arr[(slice(None),) + idx] = val
        return cls(sources, target, arr)

    def __call__(self, *args) -> np.ndarray:
        return apply_multi(self, args)

    def is_zero(self) -> bool:
        return not self.coefficients.any()

    def nonzero_entries(self) -> dict[tuple[int, ...], Fraction]:
        return {tuple(int(i) for i in idx): self.coefficients[tuple(idx)]
                for idx in zip(*np.nonzero(self.coefficients))}

    @cached_property
    def _columns(self) -> dict[tuple[int, ...], list[tuple[int, Fraction]]]:
        cols: dict[tuple[int, ...], list[tuple[int, Fraction]]] = {}
        for idx, c in self.nonzero_entries().items():
            cols.setdefault(idx[1:], []).append((idx[0], c))
        return cols

    def permuted(self, order: Sequence[int]) -> "StructureTensor":
        """The tensor ``(y_0, ..., y_{k-1}) -> t(y_order[0], ..., y_order[k-1])``."""
        order = tuple(order)
        if sorted(order) != list(range(self.arity)):
            raise ShapeError(f"{order} is not a permutation of {self.arity} slots")
        slot_of = [order.index(r) for r in range(self.arity)]
        new_sources = [self.sources[i] for i in slot_of]
        arr = np.transpose(self.coefficients, [0] + [1 + i for i in slot_of])
        return StructureTensor(new_sources, self.target, arr)

    def __add__(self, other: "StructureTensor") -> "StructureTensor":
        _same_shape(self, other)
        return StructureTensor(self.sources, self.target, self.coefficients + other.coefficients)

    def __sub__(self, other: "StructureTensor") -> "StructureTensor":
        _same_shape(self, other)
        return StructureTensor(self.sources, self.target, self.coefficients - other.coefficients)

    def __neg__(self) -> "StructureTensor":
        return StructureTensor(self.sources, self.target, -self.coefficients)

    def scaled(self, c) -> "StructureTensor":
        return StructureTensor(self.sources, self.target, self.coefficients * as_rational(c))

    def __eq__(self, other):
        if not isinstance(other, StructureTensor):
            return NotImplemented
        return (self.sources == other.sources and self.target == other.target
                and np.array_equal(self.coefficients, other.coefficients))

    def __hash__(self):
        return hash((tuple(s.dim for s in self.sources), self.target.dim,
                     tuple(self.coefficients.reshape(-1))))

    def __repr__(self):
        dims = "x".join(str(s.dim) for s in self.sources)
        return f"StructureTensor({dims}->{self.target.dim}, nnz={len(self._columns)})"


def _same_shape(a: StructureTensor, b: StructureTensor) -> None:
    if a.sources != b.sources or a.target != b.target:
        raise ShapeError("structure tensors live on different spaces")


def apply_linear(m: LinearMap, v) -> np.ndarray:
    v = _check_vector(v, m.source)
    out = zeros(m.target.dim)
    cols = m._columns
    for j, vj in enumerate(v):
        if vj:
            for i, c in cols[j]:
                out[i] += c * vj
    return out


def apply_multi(t: StructureTensor, args: Sequence) -> np.ndarray:
    if len(args) != t.arity:
        raise ShapeError(f"tensor of arity {t.arity} applied to {len(args)} arguments")
    vecs = [_check_vector(a, s) for a, s in zip(args, t.sources)]
    supports = []
    for v in vecs:
        nz = [(i, c) for i, c in enumerate(v) if c]
        if not nz:
            return zeros(t.target.dim)
        supports.append(nz)
    out = zeros(t.target.dim)
    cols = t._columns
    for combo in itertools.product(*supports):
        col = cols.get(tuple(i for i, _ in combo))
        if not col:
            continue
        w = ONE
        for _, c in combo:
            w *= c
        for a, c in col:
            out[a] += c * w
    return out


def compose_linear(a: LinearMap, b: LinearMap) -> LinearMap:
    """``a o b`` (apply ``b`` first)."""
    if b.target != a.source:
        raise ShapeError(f"cannot compose: target of inner map has dim {b.target.dim}, "
                         f"source of outer map has dim {a.source.dim}")
    return LinearMap(b.source, a.target, a.coefficients.dot(b.coefficients))


def precompose_slot(t: StructureTensor, slot: int, m: LinearMap) -> StructureTensor:
    """``(.., x_slot, ..) -> t(.., m(x_slot), ..)``."""
    if m.target != t.sources[slot]:
        raise ShapeError("linear map does not land in the tensor slot")
    arr = np.tensordot(t.coefficients, m.coefficients, axes=([1 + slot], [0]))
    arr = np.moveaxis(arr, -1, 1 + slot)
    sources = list(t.sources)
    sources[slot] = m.source
    return StructureTensor(sources, t.target, arr)


def postcompose(m: LinearMap, t: StructureTensor) -> StructureTensor:
    """``m o t``."""
    if m.source != t.target:
        raise ShapeError("tensor target is not the source of the linear map")
    arr = np.tensordot(m.coefficients, t.coefficients, axes=([1], [0]))
    return StructureTensor(t.sources, m.target, arr)


# ---------------------------------------------------------------------------
# batched exact contraction

class ScaledTensor:
    """A rational array held as integer numerators over one common denominator.

    Contractions of Fraction arrays are slow; integer object arrays are about
    two orders of magnitude faster and stay exact.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: np.ndarray, den: int = 1):
        self.num = num
        self.den = den

    @classmethod
    def of(cls, arr) -> "ScaledTensor":
        if isinstance(arr, (LinearMap, StructureTensor)):
            arr = arr.coefficients
        flat = arr.reshape(-1)
        den = math.lcm(1, *(as_rational(e).denominator for e in flat))
        num = np.empty(arr.shape, dtype=object)
        nflat = num.reshape(-1)
        for i, e in enumerate(flat):
            e = as_rational(e)
            nflat[i] = e.numerator * (den // e.denominator)
        return cls(num, den)

    @property
    def shape(self):
        return self.num.shape

    def __neg__(self):
        return ScaledTensor(-self.num, self.den)

    def __add__(self, other: "ScaledTensor") -> "ScaledTensor":
        den = math.lcm(self.den, other.den)
        return ScaledTensor(self.num * (den // self.den) + other.num * (den // other.den), den)

    def __sub__(self, other: "ScaledTensor") -> "ScaledTensor":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.num.any()

    def nonzero_indices(self) -> list[tuple[int, ...]]:
        return [tuple(int(i) for i in idx) for idx in np.argwhere(self.num)]

    def at(self, idx) -> np.ndarray | Fraction:
        v = self.num[idx]
        if isinstance(v, np.ndarray):
            out = np.empty(v.shape, dtype=object)
            of, vf = out.reshape(-1), v.reshape(-1)
            for i, e in enumerate(vf):
                of[i] = Fraction(e, self.den)
            return out
        return Fraction(v, self.den)

    def to_fractions(self) -> np.ndarray:
        return self.at(...)


def scaled_einsum(spec: str, *ops) -> ScaledTensor:
    """Exact ``np.einsum`` over rational operands."""
    ops = [o if isinstance(o, ScaledTensor) else ScaledTensor.of(o) for o in ops]
    den = 1
    for o in ops:
        den *= o.den
    num = np.einsum(spec, *(o.num for o in ops), optimize=len(ops) > 2)
    if not isinstance(num, np.ndarray):
        num = np.array(num, dtype=object)
    return ScaledTensor(num.astype(object), den)


# ---------------------------------------------------------------------------
# exact elimination

def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form of a dense matrix.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped.
    """
    sparse = [{j: as_rational(c) for j, c in enumerate(r) if c} for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red, pivots = sparse_rref(sparse, ncols)
    dense = []
    for r in red:
        row = [ZERO] * ncols
        for j, c in r.items():
            row[j] = c
        dense.append(row)
    return dense, pivots


def sparse_rref(rows: Iterable[Mapping[int, Fraction]], ncols: int):
    """Incremental sparse Gauss-Jordan elimination.

    ``rows`` are ``{column: value}`` maps. Returns the nonzero reduced rows,
    ordered by pivot column, and the pivot columns.
    """
    pivot_rows: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        row = {j: as_rational(c) for j, c in raw.items() if c}
        # reduce against existing pivots until the leading entry is new
        while row:
            hits = [j for j in row if j in pivot_rows]
            if not hits:
                break
            for j in hits:
                c = row.get(j)
                if not c:
                    continue
                for k, v in pivot_rows[j].items():
                    nv = row.get(k, ZERO) - c * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        if not row:
            continue
        p = min(row)
        inv = ONE / row[p]
        row = {k: v * inv for k, v in row.items()}
        # keep pivot rows fully reduced with respect to each other
        for q, prow in pivot_rows.items():
            c = prow.get(p)
            if c:
                for k, v in row.items():
                    nv = prow.get(k, ZERO) - c * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        pivot_rows[p] = row
    order = sorted(pivot_rows)
    if any(j >= ncols for j in order):
        raise ShapeError("row entry beyond declared column count")
    return [pivot_rows[p] for p in order], order


def nullspace(rows: Sequence[Sequence] | Sequence[Mapping[int, Fraction]], ncols: int) -> list[np.ndarray]:
    """Basis of ``{v : A v = 0}``, one vector per free column in increasing order.

    The basis vector for free column ``f`` has ``v[f] = 1`` and zero at every
    other free column, so coordinates in this basis are read off at the free
    columns.
    """
    sparse = [r if isinstance(r, Mapping) else {j: c for j, c in enumerate(r) if c} for r in rows]
    red, pivots = sparse_rref(sparse, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = zeros(ncols)
        v[f] = ONE
        for p, r in zip(pivots, red):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def free_columns(rows, ncols: int) -> list[int]:
    sparse = [r if isinstance(r, Mapping) else {j: c for j, c in enumerate(r) if c} for r in rows]
    _, pivots = sparse_rref(sparse, ncols)
    pivset = set(pivots)
    return [j for j in range(ncols) if j not in pivset]


def rank(matrix) -> int:
    rows = [list(r) for r in (matrix.coefficients if isinstance(matrix, LinearMap) else matrix)]
    ncols = len(rows[0]) if rows else 0
    return len(sparse_rref([{j: c for j, c in enumerate(r) if c} for r in rows], ncols)[1])


def is_invertible(m: LinearMap) -> bool:
    return m.source.dim == m.target.dim and rank(m) == m.source.dim


def inverse(m: LinearMap) -> LinearMap:
    n = m.source.dim
    if not is_invertible(m):
        raise PreconditionError("matrix is singular")
    rows = [{**{j: c for j, c in enumerate(m.coefficients[i]) if c}, n + i: ONE} for i in range(n)]
    red, pivots = sparse_rref(rows, 2 * n)
    inv = zeros(n, n)
    for i, r in enumerate(red):
        for k, c in r.items():
            if k >= n:
                inv[i, k - n] = c
    return LinearMap(m.target, m.source, inv)


def solve_particular(rows: Sequence[Mapping[int, Fraction]], rhs: Sequence, ncols: int):
    """One solution of ``A v = b`` or ``None`` when inconsistent."""
    aug = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        b = as_rational(b)
        if b:
            row[ncols] = b
        aug.append(row)
    red, pivots = sparse_rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    v = zeros(ncols)
    for p, r in zip(pivots, red):
        v[p] = r.get(ncols, ZERO)
    return v

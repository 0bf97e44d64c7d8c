"""The exact twisted Courant algebroid ``TM + T*M`` on R^n twisted by a 3-form ``h``.

Sections are pairs ``X + xi``. The anchor is the projection to ``X``; the dual
map of the anchor is the inclusion of 1-forms. ``H = dh`` is never stored.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra_core import ShapeError
from .exterior_calculus import (
    DegreeError, PolyForm, PolyMultivector, apply_vf, d, function_form, interior, interior_multi,
    lie_derivative, pair, vf_bracket,
)
from .poly import Poly
from .report import VerifyReport
from .sh_leibniz import MorphismOps, check_family, check_morphism_family


@dataclass(frozen=True)
class GeneralizedSection:
    """``X + xi`` with ``X`` a vector field and ``xi`` a 1-form."""

    vf: PolyMultivector
    form: PolyForm

    def __post_init__(self):
        if self.vf.degree != 1 or self.form.degree != 1:
            raise DegreeError("a section is a vector field plus a 1-form")
        if self.vf.n != self.form.n:
            raise ShapeError("vector and form parts live on different R^n")

    @property
    def n(self) -> int:
        return self.vf.n

    @classmethod
    def zero(cls, n: int) -> "GeneralizedSection":
        return cls(PolyMultivector.zero(n, 1), PolyForm.zero(n, 1))

    @classmethod
    def of_vf(cls, X: PolyMultivector) -> "GeneralizedSection":
        return cls(X, PolyForm.zero(X.n, 1))

    @classmethod
    def of_form(cls, xi: PolyForm) -> "GeneralizedSection":
        return cls(PolyMultivector.zero(xi.n, 1), xi)

    def __add__(self, other: "GeneralizedSection") -> "GeneralizedSection":
        if isinstance(other, int) and other == 0:
            return self
        return GeneralizedSection(self.vf + other.vf, self.form + other.form)

    __radd__ = __add__

    def __sub__(self, other: "GeneralizedSection") -> "GeneralizedSection":
        return GeneralizedSection(self.vf - other.vf, self.form - other.form)

    def __neg__(self) -> "GeneralizedSection":
        return GeneralizedSection(-self.vf, -self.form)

    def scale(self, f) -> "GeneralizedSection":
        return GeneralizedSection(self.vf.scale(f), self.form.scale(f))

    def __bool__(self) -> bool:
        return bool(self.vf) or bool(self.form)

    def to_text(self) -> str:
        if not self:
            return "0"
        parts = []
        if self.vf:
            parts.append(f"vec{{{self.vf.to_text()}}}")
        if self.form:
            parts.append(f"form{{{self.form.to_text()}}}")
        return " + ".join(parts)

    def to_dict(self) -> dict:
        return {"vf": self.vf.to_pairs(), "form": self.form.to_pairs()}

    @classmethod
    def from_dict(cls, n: int, dct: dict) -> "GeneralizedSection":
        return cls(PolyMultivector.from_pairs(n, 1, dct.get("vf", [])),
                   PolyForm.from_pairs(n, 1, dct.get("form", [])))

    def __repr__(self):
        return f"GeneralizedSection({self.to_text()})"


Section = GeneralizedSection


@dataclass(frozen=True)
class ExactTcaData:
    """Twisting 3-form ``h`` on R^n (``None`` means zero)."""

    n: int
    h: PolyForm | None = None

    def __post_init__(self):
        if self.h is not None:
            if self.h.degree != 3 or self.h.n != self.n:
                raise ShapeError(f"h must be a 3-form on R^{self.n}")
            if not self.h:
                object.__setattr__(self, "h", None)

    @property
    def H(self) -> PolyForm | None:
        """``dh``; None when it vanishes for degree reasons or is zero."""
        if self.h is None or self.n < 4:
            return None
        H = d(self.h)
        return H if H else None

    def twisted_by(self, extra: PolyForm | None) -> "ExactTcaData":
        if extra is None or not extra:
            return self
        return ExactTcaData(self.n, extra if self.h is None else self.h + extra)


def pairing(e1: GeneralizedSection, e2: GeneralizedSection) -> Poly:
    """``<X + xi, Y + eta> = xi(Y) + eta(X)``."""
    if e1.n != e2.n:
        raise ShapeError("sections live on different R^n")
    return pair(e1.form, e2.vf) + pair(e2.form, e1.vf)


def h_term(h: PolyForm | None, X: PolyMultivector, Y: PolyMultivector) -> PolyForm:
    """``h(X, Y) = i_Y i_X h``."""
    if h is None or not X or not Y:
        return PolyForm.zero(X.n, 1)
    return interior(Y, interior(X, h))


def dorfman(t: ExactTcaData, e1: GeneralizedSection, e2: GeneralizedSection,
            *, drop: str | None = None) -> GeneralizedSection:
    """``[X,Y] + L_X eta - i_Y d xi + h(X,Y)``.

    ``drop`` removes one term (``"lie"``, ``"interior"``, ``"h"``) to build
    mutated brackets for negative tests.
    """
    if e1.n != e2.n or e1.n != t.n:
        raise ShapeError("sections and twisting live on different R^n")
    X, xi, Y, eta = e1.vf, e1.form, e2.vf, e2.form
    form = PolyForm.zero(t.n, 1)
    if drop != "lie" and X and eta:
        form = form + lie_derivative(X, eta)
    if drop != "interior" and Y and xi:
        form = form - interior(Y, d(xi))
    if drop != "h":
        form = form + h_term(t.h, X, Y)
    vf = vf_bracket(X, Y) if X and Y else PolyMultivector.zero(t.n, 1)
    return GeneralizedSection(vf, form)


def l3_exact(t: ExactTcaData, e1, e2, e3) -> PolyForm:
    """``i_{X ^ Y ^ Z} dh``."""
    H = t.H
    if H is None:
        return PolyForm.zero(t.n, 1)
    Xs = [e1.vf, e2.vf, e3.vf]
    if not all(Xs):
        return PolyForm.zero(t.n, 1)
    return interior_multi(Xs, H)


# ---------------------------------------------------------------------------
# families

def coordinate_sections(n: int) -> list[tuple[str, GeneralizedSection]]:
    """``d_i`` and ``dx_i``."""
    out = []
    for i in range(n):
        out.append((f"d{i + 1}", GeneralizedSection.of_vf(PolyMultivector.basis(n, (i,)))))
    for i in range(n):
        out.append((f"dx{i + 1}", GeneralizedSection.of_form(PolyForm.basis(n, (i,)))))
    return out


def coordinate_forms(n: int) -> list[tuple[str, PolyForm]]:
    return [(f"dx{i + 1}", PolyForm.basis(n, (i,))) for i in range(n)]


def default_sections(n: int) -> list[tuple[str, GeneralizedSection]]:
    """Coordinate sections plus ``x_j d_i`` and ``x_j dx_i``."""
    out = coordinate_sections(n)
    for j in range(n):
        xj = Poly.var(n, j)
        for i in range(n):
            out.append((f"x{j + 1} d{i + 1}",
                        GeneralizedSection.of_vf(PolyMultivector.basis(n, (i,), xj))))
    for j in range(n):
        xj = Poly.var(n, j)
        for i in range(n):
            out.append((f"x{j + 1} dx{i + 1}",
                        GeneralizedSection.of_form(PolyForm.basis(n, (i,), xj))))
    return out


def default_forms(n: int) -> list[tuple[str, PolyForm]]:
    out = coordinate_forms(n)
    for j in range(n):
        xj = Poly.var(n, j)
        for i in range(n):
            out.append((f"x{j + 1} dx{i + 1}", PolyForm.basis(n, (i,), xj)))
    return out


def mixed_sections(n: int) -> list[tuple[str, GeneralizedSection]]:
    """``d_i + x_i dx_{i+1}`` and ``d_i + x_{i+1} dx_{i+2}`` (indices mod n)."""
    out = []
    for i in range(n):
        X = PolyMultivector.basis(n, (i,))
        j, k = (i + 1) % n, (i + 2) % n
        out.append((f"d{i + 1} + x{i + 1} dx{j + 1}",
                    GeneralizedSection(X, PolyForm.basis(n, (j,), Poly.var(n, i)))))
        out.append((f"d{i + 1} + x{j + 1} dx{k + 1}",
                    GeneralizedSection(X, PolyForm.basis(n, (k,), Poly.var(n, j)))))
    return out


def axiom_sections(n: int) -> list[tuple[str, GeneralizedSection]]:
    """Default family plus mixed sections, used for the algebroid axioms."""
    return default_sections(n) + mixed_sections(n)


def _labelled(fam) -> list[tuple[str, object]]:
    out = []
    for k, item in enumerate(fam):
        if isinstance(item, tuple):
            out.append(item)
        else:
            out.append((f"s{k + 1}", item))
    return out


# ---------------------------------------------------------------------------
# checks

def check_tca_axioms(t: ExactTcaData, fam, *, bracket: Callable | None = None) -> VerifyReport:
    """Non-skewness, invariance of the pairing and the twisted Jacobi identity
    on every tuple drawn from ``fam``. ``bracket`` replaces the Dorfman bracket
    (used to run the checker on mutated brackets)."""
    fam = _labelled(fam)
    if not fam:
        raise ValueError("section family must be nonempty")
    br = bracket or (lambda a, b: dorfman(t, a, b))
    rep = VerifyReport(f"twisted Courant axioms on R^{t.n}")
    labels = [p[0] for p in fam]
    secs = [p[1] for p in fam]
    N = range(len(secs))
    cache: dict = {}

    def B(i, j):
        v = cache.get((i, j))
        if v is None:
            v = cache[(i, j)] = br(secs[i], secs[j])
        return v

    c = rep.add("nonskew", "[e,e] = 1/2 d<e,e>")
    for i in N:
        c.checked += 1
        e = secs[i]
        r = B(i, i) - GeneralizedSection.of_form(d(function_form(pairing(e, e))).scale(Fraction(1, 2)))
        if r:
            c.record((labels[i],), r)

    c = rep.add("invariant", "rho(e1)<e2,e3> = <[e1,e2],e3> + <e2,[e1,e3]>")
    for i in N:
        for j in N:
            for k in N:
                c.checked += 1
                r = (apply_vf(secs[i].vf, pairing(secs[j], secs[k]))
                     - pairing(B(i, j), secs[k]) - pairing(secs[j], B(i, k)))
                if r:
                    c.record((labels[i], labels[j], labels[k]), r)

    c = rep.add("jacobi", "i_{rho e1 ^ rho e2 ^ rho e3} H = Jacobiator")
    for i in N:
        for j in N:
            for k in N:
                c.checked += 1
                jac = br(secs[i], B(j, k)) - br(B(i, j), secs[k]) - br(secs[j], B(i, k))
                r = GeneralizedSection.of_form(l3_exact(t, secs[i], secs[j], secs[k])) - jac
                if r:
                    c.record((labels[i], labels[j], labels[k]), r)
    rep.notes["H"] = t.H.to_text() if t.H is not None else "0"
    return rep


class TcaOps:
    """The Leibniz 2-algebra of an exact twisted Courant algebroid, element-wise.

    Degree 0: sections; degree 1: 1-forms; the differential is the inclusion.
    """

    def __init__(self, t: ExactTcaData):
        self.t = t

    def d(self, m: PolyForm) -> GeneralizedSection:
        return GeneralizedSection.of_form(m)

    def l2_00(self, x, y):
        return dorfman(self.t, x, y)

    def l2_01(self, x: GeneralizedSection, m: PolyForm) -> PolyForm:
        return lie_derivative(x.vf, m) if x.vf and m else PolyForm.zero(self.t.n, 1)

    def l2_10(self, m: PolyForm, x: GeneralizedSection) -> PolyForm:
        if not x.vf or not m:
            return PolyForm.zero(self.t.n, 1)
        return -interior(x.vf, d(m))

    def l3(self, x, y, z) -> PolyForm:
        return l3_exact(self.t, x, y, z)


def build_leibniz2(t: ExactTcaData, fam=None, forms=None) -> VerifyReport:
    """Check conditions (a)-(f) for the derived Leibniz 2-algebra over the
    section family ``fam`` and 1-form family ``forms`` (defaults: coordinate
    and linear-coefficient families)."""
    xs = _labelled(fam) if fam is not None else default_sections(t.n)
    ms = _labelled(forms) if forms is not None else default_forms(t.n)
    if not xs:
        raise ValueError("section family must be nonempty")
    ops = TcaOps(t)
    rep = check_family(ops, xs, ms, l3_vanishes=t.H is None,
                       subject=f"Leibniz 2-algebra of the exact twisted Courant algebroid on R^{t.n}")
    rep.notes["H"] = t.H.to_text() if t.H is not None else "0"
    if t.n >= 3:
        coords = [GeneralizedSection.of_vf(PolyMultivector.basis(t.n, (i,))) for i in range(3)]
        rep.notes["l3(d1,d2,d3)"] = l3_exact(t, *coords).to_text()
    return rep


def b_transform(B: PolyForm | None, e: GeneralizedSection) -> GeneralizedSection:
    """``e^B(X + xi) = X + xi + i_X B``."""
    if B is None or not B or not e.vf:
        return e
    if B.degree != 2 or B.n != e.n:
        raise ShapeError("B must be a 2-form on the same R^n")
    return GeneralizedSection(e.vf, e.form + interior(e.vf, B))


def b_f2(B: PolyForm | None, e1: GeneralizedSection, e2: GeneralizedSection) -> PolyForm:
    """``i_{X ^ Y} dB = i_Y i_X dB``."""
    n = e1.n
    if B is None or not B or n < 3 or not e1.vf or not e2.vf:
        return PolyForm.zero(n, 1)
    return interior(e2.vf, interior(e1.vf, d(B)))


def _dB(B: PolyForm | None, n: int) -> PolyForm | None:
    if B is None or n < 3:
        return None
    dB = d(B)
    return dB if dB else None


def check_b_intertwine(B: PolyForm | None, h: PolyForm | None, fam, n: int | None = None) -> VerifyReport:
    """``e^B [e1,e2]_{h+dB} = [e^B e1, e^B e2]_h`` on all pairs from ``fam``."""
    fam = _labelled(fam)
    if not fam:
        raise ValueError("section family must be nonempty")
    n = n if n is not None else fam[0][1].n
    t = ExactTcaData(n, h)
    t_shift = t.twisted_by(_dB(B, n))
    rep = VerifyReport(f"B-field intertwining on R^{n}")
    c = rep.add("intertwine", "e^B [e1,e2]_{h+dB} = [e^B e1, e^B e2]_h")
    images = [b_transform(B, e) for _, e in fam]
    for i, (li, ei) in enumerate(fam):
        for j, (lj, ej) in enumerate(fam):
            c.checked += 1
            r = b_transform(B, dorfman(t_shift, ei, ej)) - dorfman(t, images[i], images[j])
            if r:
                c.record((li, lj), r)
    rep.notes["closed B"] = _dB(B, n) is None
    return rep


def check_b_morphism(B: PolyForm | None, h: PolyForm | None, fam, forms=None,
                     n: int | None = None) -> VerifyReport:
    """Check that ``(e^B, Id, i_{X^Y} dB)`` is a morphism of the derived
    Leibniz 2-algebra to itself."""
    xs = _labelled(fam)
    if not xs:
        raise ValueError("section family must be nonempty")
    n = n if n is not None else xs[0][1].n
    ms = _labelled(forms) if forms is not None else coordinate_forms(n)
    ops = TcaOps(ExactTcaData(n, h))
    mor = MorphismOps(
        f0=lambda e: b_transform(B, e) if isinstance(e, GeneralizedSection) else e,
        f1=lambda m: m,
        f2=lambda a, b: b_f2(B, a, b),
    )
    return check_morphism_family(mor, ops, ops, xs, ms, subject=f"B-field morphism on R^{n}")


__all__ = [
    "ExactTcaData", "GeneralizedSection", "Section", "TcaOps", "b_f2", "b_transform",
    "build_leibniz2", "check_b_intertwine", "check_b_morphism", "check_tca_axioms",
    "axiom_sections", "coordinate_forms", "coordinate_sections", "mixed_sections", "default_forms", "default_sections", "dorfman",
    "h_term", "l3_exact", "pairing",
]

"""Graphs of bivectors in the exact twisted Courant algebroid, twisted Poisson
structures, the bracket on 1-forms and the associated Lie 2-algebra."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra_core import ShapeError, nullspace, solve_particular
from .exterior_calculus import (
    DegreeError, PolyForm, PolyMultivector, apply_vf, d, function_form, interior_multi,
    lie_derivative, pair, schouten_sq, sharp, triple_sharp, vf_bracket,
)
from .poly import Poly
from .report import VerifyReport
from .sh_leibniz import check_family
from .twisted_courant import ExactTcaData, GeneralizedSection, _labelled, dorfman, pairing

#: ``[pi, pi] = TWIST_COEFFICIENT * (^3 pi#) h`` is the condition under which
#: the graph of ``pi#`` closes under the h-twisted Dorfman bracket, with the
#: coordinate formulas used by ``schouten_sq`` and ``triple_sharp``.
TWIST_COEFFICIENT = Fraction(-2)


@dataclass(frozen=True)
class TwistedPoissonData:
    n: int
    pi: PolyMultivector
    h: PolyForm | None = None

    def __post_init__(self):
        if self.pi.degree != 2 or self.pi.n != self.n:
            raise ShapeError(f"pi must be a bivector on R^{self.n}")
        if self.h is not None:
            if self.h.degree != 3 or self.h.n != self.n:
                raise ShapeError(f"h must be a 3-form on R^{self.n}")
            if not self.h:
                object.__setattr__(self, "h", None)

    @property
    def tca(self) -> ExactTcaData:
        return ExactTcaData(self.n, self.h)

    def sharp(self, xi: PolyForm) -> PolyMultivector:
        return sharp(self.pi, xi)

    def graph(self, xi: PolyForm) -> GeneralizedSection:
        return GeneralizedSection(sharp(self.pi, xi), xi)


def twisted_poisson_residual(p: TwistedPoissonData) -> PolyMultivector:
    lhs = schouten_sq(p.pi) if p.n >= 3 else PolyMultivector.zero(p.n, min(3, p.n))
    if p.h is None:
        return lhs
    return lhs - triple_sharp(p.pi, p.h).scale(TWIST_COEFFICIENT)


def check_twisted_poisson(p: TwistedPoissonData) -> VerifyReport:
    rep = VerifyReport(f"twisted Poisson condition on R^{p.n}")
    c = rep.add("twisted Poisson", "[pi,pi] = c (^3 pi#) h")
    c.checked = 1
    if p.n >= 3:
        r = twisted_poisson_residual(p)
        if r:
            c.record(("pi", "h"), r)
    rep.notes["coefficient"] = TWIST_COEFFICIENT
    return rep


def pi_pairing(pi: PolyMultivector, a: PolyForm, b: PolyForm) -> Poly:
    """``pi(a, b) = b(pi# a)``."""
    return pair(b, sharp(pi, a))


def pi_bracket(p: TwistedPoissonData, xi: PolyForm, eta: PolyForm) -> PolyForm:
    """``L_{pi# xi} eta - L_{pi# eta} xi + d pi(eta, xi) + i_{pi# xi ^ pi# eta} h``."""
    if xi.n != p.n or eta.n != p.n or xi.degree != 1 or eta.degree != 1:
        raise DegreeError("pi_bracket takes two 1-forms on the same R^n")
    X, Y = sharp(p.pi, xi), sharp(p.pi, eta)
    out = PolyForm.zero(p.n, 1)
    if X and eta:
        out = out + lie_derivative(X, eta)
    if Y and xi:
        out = out - lie_derivative(Y, xi)
    f = pair(xi, Y)
    if f:
        out = out + d(function_form(f))
    if p.h is not None and X and Y:
        out = out + interior_multi([X, Y], p.h)
    return out


def l3_twisted(p: TwistedPoissonData, xi: PolyForm, eta: PolyForm, gamma: PolyForm) -> PolyForm:
    """``i_{pi# xi ^ pi# eta ^ pi# gamma} dh``."""
    if p.h is None or p.n < 4:
        return PolyForm.zero(p.n, 1)
    Xs = [sharp(p.pi, a) for a in (xi, eta, gamma)]
    if not all(Xs):
        return PolyForm.zero(p.n, 1)
    H = d(p.h)
    if not H:
        return PolyForm.zero(p.n, 1)
    return interior_multi(Xs, H)


def check_anchor_morphism(p: TwistedPoissonData, xi: PolyForm, eta: PolyForm,
                          labels=("xi", "eta")) -> VerifyReport:
    rep = VerifyReport("anchor is a morphism")
    _anchor_check(rep.add("anchor", "pi#[xi,eta] = [pi# xi, pi# eta]"), p, [(labels[0], xi)],
                  [(labels[1], eta)])
    return rep


def _anchor_check(c, p, left, right) -> None:
    for la, a in left:
        for lb, b in right:
            c.checked += 1
            r = sharp(p.pi, pi_bracket(p, a, b)) - vf_bracket(sharp(p.pi, a), sharp(p.pi, b))
            if r:
                c.record((la, lb), r)


class TwistedPoissonOps:
    """Lie 2-algebra of a twisted Poisson structure: degree 0 all 1-forms,
    degree 1 the forms killed by ``pi#``, differential the inclusion."""

    def __init__(self, p: TwistedPoissonData):
        self.p = p

    def d(self, m):
        return m

    def l2_00(self, x, y):
        return pi_bracket(self.p, x, y)

    l2_01 = l2_00
    l2_10 = l2_00

    def l3(self, x, y, z):
        return l3_twisted(self.p, x, y, z)


def kernel_members(p: TwistedPoissonData, fam) -> list[tuple[str, PolyForm]]:
    return [(l, f) for l, f in _labelled(fam) if not sharp(p.pi, f)]


def check_lie2(p: TwistedPoissonData, fam) -> VerifyReport:
    """Conditions (a)-(f) plus antisymmetry, the Jacobi anomaly and
    kernel-valuedness of ``l3`` over ``fam``."""
    xs = _labelled(fam)
    ms = kernel_members(p, xs)
    ops = TwistedPoissonOps(p)
    l3_zero = all(not l3_twisted(p, a, b, c) for (_, a), (_, b), (_, c)
                  in itertools.combinations(xs, 3))
    rep = VerifyReport(f"Lie 2-algebra of a twisted Poisson structure on R^{p.n}")
    rep.extend(check_family(ops, xs, ms, l3_vanishes=l3_zero and _l3_identically_zero(p)))
    c = rep.add("antisymmetry", "[xi,eta] + [eta,xi] = 0")
    for (la, a), (lb, b) in itertools.product(xs, repeat=2):
        c.checked += 1
        r = pi_bracket(p, a, b) + pi_bracket(p, b, a)
        if r:
            c.record((la, lb), r)
    c = rep.add("l3 antisymmetry", "l3 changes sign under a transposition")
    for (la, a), (lb, b), (lc, cc) in itertools.product(xs, repeat=3):
        c.checked += 1
        base = l3_twisted(p, a, b, cc)
        r = base + l3_twisted(p, b, a, cc)
        r2 = base + l3_twisted(p, a, cc, b)
        if r or r2:
            c.record((la, lb, lc), r if r else r2)
    c = rep.add("jacobi anomaly", "[xi,[eta,g]] - [[xi,eta],g] - [eta,[xi,g]] = l3")
    _anomaly_check(c, p, xs)
    c = rep.add("kernel", "pi# l3 = 0")
    for (la, a), (lb, b), (lc, cc) in itertools.combinations(xs, 3):
        c.checked += 1
        r = sharp(p.pi, l3_twisted(p, a, b, cc))
        if r:
            c.record((la, lb, lc), r)
    c = rep.add("anchor", "pi#[xi,eta] = [pi# xi, pi# eta]")
    _anchor_check(c, p, xs, xs)
    rep.notes["kernel members"] = [l for l, _ in ms]
    rep.notes["l3 vanishes on family"] = l3_zero
    return rep


def _l3_identically_zero(p: TwistedPoissonData) -> bool:
    """Sufficient test: ``dh = 0`` or ``pi#`` has rank below 3 everywhere."""
    if p.h is None or p.n < 4 or not d(p.h):
        return True
    return not triple_sharp_any(p.pi)


def triple_sharp_any(pi: PolyMultivector) -> bool:
    """Whether ``^3 pi#`` is not identically zero (rank of pi# can reach 3)."""
    n = pi.n
    for idx in itertools.combinations(range(n), 3):
        probe = PolyForm.basis(n, idx)
        if triple_sharp(pi, probe):
            return True
    return False


def _anomaly_check(c, p, xs) -> None:
    cache: dict = {}

    def br(i, j):
        v = cache.get((i, j))
        if v is None:
            v = cache[(i, j)] = pi_bracket(p, xs[i][1], xs[j][1])
        return v

    N = range(len(xs))
    for i, j, k in itertools.product(N, repeat=3):
        c.checked += 1
        a, b, g = xs[i][1], xs[j][1], xs[k][1]
        jac = pi_bracket(p, a, br(j, k)) - pi_bracket(p, br(i, j), g) - pi_bracket(p, b, br(i, k))
        r = jac - l3_twisted(p, a, b, g)
        if r:
            c.record((xs[i][0], xs[j][0], xs[k][0]), r)


def check_graph_dirac(p: TwistedPoissonData, fam) -> VerifyReport:
    """Isotropy, closure under the Dorfman bracket and the identification of
    the restricted bracket with ``pi_bracket``, on graph sections.

    ``fam`` holds 1-forms (mapped to ``pi# xi + xi``) or graph sections."""
    items = []
    rep = VerifyReport(f"graph of pi# on R^{p.n}")
    member = rep.add("graph member", "section has the form pi# xi + xi")
    for label, v in _labelled(fam):
        member.checked += 1
        if isinstance(v, GeneralizedSection):
            r = v.vf - sharp(p.pi, v.form)
            if r:
                member.record((label,), r)
            items.append((label, v.form))
        else:
            items.append((label, v))
    t = p.tca
    graph = [(l, p.graph(f)) for l, f in items]
    iso = rep.add("isotropic", "<pi# xi + xi, pi# eta + eta> = 0")
    closed = rep.add("closure", "[graph, graph] lies in the graph")
    inter = rep.add("intertwine", "f0[pi# xi + xi, pi# eta + eta] = [xi,eta]_{pi,h}")
    for (la, a), (lb, b) in itertools.product(graph, repeat=2):
        iso.checked += 1
        r = pairing(a, b)
        if r:
            iso.record((la, lb), r)
        br = dorfman(t, a, b)
        closed.checked += 1
        r = br.vf - sharp(p.pi, br.form)
        if r:
            closed.record((la, lb), r)
        inter.checked += 1
        r = br.form - pi_bracket(p, a.form, b.form)
        if r:
            inter.record((la, lb), r)
    return rep


def check_h_twisted_lie_algebroid(p: TwistedPoissonData, fam, functions=None) -> VerifyReport:
    """Axioms of an H-twisted Lie algebroid for ``(T*M, pi_bracket, pi#, l3_twisted)``."""
    xs = _labelled(fam)
    n = p.n
    fs = functions if functions is not None else (
        [(f"x{i + 1}", Poly.var(n, i)) for i in range(n)]
        + [("x1^2", Poly.var(n, 0) * Poly.var(n, 0))])
    rep = VerifyReport(f"H-twisted Lie algebroid on R^{n}")
    c = rep.add("jacobi", "[e1,[e2,e3]] + c.p. = H(e1,e2,e3)")
    N = range(len(xs))
    cache: dict = {}

    def br(i, j):
        v = cache.get((i, j))
        if v is None:
            v = cache[(i, j)] = pi_bracket(p, xs[i][1], xs[j][1])
        return v

    Hc: dict = {}

    def H(*ijk):
        v = Hc.get(ijk)
        if v is None:
            v = Hc[ijk] = l3_twisted(p, *(xs[q][1] for q in ijk))
        return v

    for i, j, k in itertools.product(N, repeat=3):
        c.checked += 1
        a, b, g = (xs[q][1] for q in (i, j, k))
        cyc = pi_bracket(p, a, br(j, k)) + pi_bracket(p, b, br(k, i)) + pi_bracket(p, g, br(i, j))
        r = cyc - H(i, j, k)
        if r:
            c.record((xs[i][0], xs[j][0], xs[k][0]), r)
    c = rep.add("kernel", "H takes values in Ker(pi#)")
    for i, j, k in itertools.combinations(N, 3):
        c.checked += 1
        r = sharp(p.pi, H(i, j, k))
        if r:
            c.record((xs[i][0], xs[j][0], xs[k][0]), r)
    c = rep.add("anchored Leibniz", "[e1, f e2] = f[e1,e2] + rho(e1)(f) e2")
    for (i, j), (lf, f) in itertools.product(itertools.product(N, repeat=2), fs):
        c.checked += 1
        a, b = xs[i][1], xs[j][1]
        r = (pi_bracket(p, a, b.scale(f)) - br(i, j).scale(f)
             - b.scale(apply_vf(sharp(p.pi, a), f)))
        if r:
            c.record((xs[i][0], xs[j][0], lf), r)
    c = rep.add("DH", "DH = 0")
    for idx in itertools.product(N, repeat=4):
        c.checked += 1
        total = PolyForm.zero(n, 1)
        for s in range(4):
            rest = idx[:s] + idx[s + 1:]
            term = pi_bracket(p, xs[idx[s]][1], H(*rest))
            total = total + term if s % 2 == 0 else total - term
        for s, t in itertools.combinations(range(4), 2):
            rest = [xs[idx[q]][1] for q in range(4) if q not in (s, t)]
            term = l3_twisted(p, br(idx[s], idx[t]), *rest)
            # (-1)^{i+j} with 1-based i, j equals (-1)^{s+t}
            total = total + term if (s + t) % 2 == 0 else total - term
        if total:
            c.record(tuple(xs[q][0] for q in idx), total)
    return rep


# ---------------------------------------------------------------------------
# search for twisting forms

@dataclass
class TwistSearch:
    """Affine solution set ``particular + span(homogeneous)`` of 3-forms ``h``
    with polynomial coefficients of bounded degree solving the twisted
    Poisson condition for a fixed ``pi``."""

    particular: PolyForm | None
    homogeneous: list[PolyForm]

    @property
    def exists(self) -> bool:
        return self.particular is not None

    def with_nonzero_l3(self) -> list[PolyForm]:
        """Solutions (particular, or particular plus one homogeneous vector)
        whose ``dh`` is nonzero."""
        if self.particular is None:
            return []
        cands = [self.particular] + [self.particular + v for v in self.homogeneous]
        return [h for h in cands if h.n >= 4 and d(h)]


def _monomials(n: int, max_degree: int):
    for deg in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), deg):
            e = [0] * n
            for i in combo:
                e[i] += 1
            yield tuple(e)


def search_twisting_form(pi: PolyMultivector, max_degree: int = 1) -> TwistSearch:
    """Solve ``[pi,pi] = c (^3 pi#) h`` for ``h`` with coefficients of degree
    at most ``max_degree``, exactly."""
    n = pi.n
    if n < 3:
        return TwistSearch(PolyForm.zero(n, min(3, n)) if n >= 3 else None, [])
    unknowns = [(idx, e) for idx in itertools.combinations(range(n), 3)
                for e in _monomials(n, max_degree)]
    images = [triple_sharp(pi, PolyForm(n, 3, {(idx, e): 1})).scale(TWIST_COEFFICIENT)
              for idx, e in unknowns]
    target = schouten_sq(pi)
    keys = sorted({k for im in images for k in im.terms} | set(target.terms))
    pos = {k: r for r, k in enumerate(keys)}
    rows: list[dict] = [{} for _ in keys]
    for col, im in enumerate(images):
        for k, c in im.terms.items():
            rows[pos[k]][col] = Fraction(c)
    rhs = [Fraction(target.terms.get(k, 0)) for k in keys]
    if not keys:
        rows, rhs = [], []
    sol = solve_particular(rows, rhs, len(unknowns)) if rows else [Fraction(0)] * len(unknowns)

    def to_form(vec) -> PolyForm:
        return PolyForm(n, 3, {unknowns[q]: v for q, v in enumerate(vec) if v})

    if sol is None:
        return TwistSearch(None, [])
    basis = nullspace(rows, len(unknowns)) if rows else [
        [Fraction(int(q == r)) for q in range(len(unknowns))] for r in range(len(unknowns))]
    return TwistSearch(to_form(sol), [to_form(v) for v in basis])


__all__ = [
    "TWIST_COEFFICIENT", "TwistSearch", "TwistedPoissonData", "TwistedPoissonOps",
    "check_anchor_morphism", "check_graph_dirac", "check_h_twisted_lie_algebroid", "check_lie2",
    "check_twisted_poisson", "kernel_members", "l3_twisted", "pi_bracket", "pi_pairing",
    "search_twisting_form", "triple_sharp_any", "twisted_poisson_residual",
]

"""Sparse multivariate polynomials over the rationals.

A polynomial is a map ``exponent tuple -> coefficient``; zero coefficients are
never stored. Coefficients are ints when integral and Fractions otherwise.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator, Mapping

from .algebra_core import ShapeError, as_rational


class ParseError(ValueError):
    """Malformed text input; ``position`` is a 0-based character offset when known."""

    def __init__(self, message: str, position: int | None = None, context: str = ""):
        self.position = position
        self.context = context
        where = f" at position {position}" if position is not None else ""
        ctx = f" in {context!r}" if context else ""
        super().__init__(f"{message}{where}{ctx}")


def norm(c):
    """Canonical coefficient: int if integral, else a reduced Fraction."""
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int) and not isinstance(c, bool):
        return c
    return norm(as_rational(c))


def add_into(acc: dict, key, c) -> None:
    v = acc.get(key, 0) + c
    if v:
        acc[key] = norm(v)
    else:
        acc.pop(key, None)


def grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class Poly:
    """A polynomial in ``x1..xn``."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], object] | None = None):
        if n < 0:
            raise ShapeError("variable count must be non-negative")
        self.n = n
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n or any(k < 0 for k in e):
                raise ShapeError(f"exponent {e} does not fit {n} variables")
            c = norm(c)
            if c:
                add_into(clean, e, c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.n, p.terms, p._hash = n, terms, None
        return p

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        c = norm(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        """The coordinate ``x_{i+1}`` (0-based ``i``)."""
        e = [0] * n
        e[i] = 1
        return cls._raw(n, {tuple(e): 1})

    @classmethod
    def monomial(cls, n: int, exp, c=1) -> "Poly":
        return cls(n, {tuple(exp): c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Poly") -> None:
        if self.n != other.n:
            raise ShapeError(f"variable counts differ: {self.n} vs {other.n}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.n, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            add_into(out, e, c)
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = norm(other)
            if not c:
                return Poly._raw(self.n, {})
            return Poly._raw(self.n, {e: norm(v * c) for e, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                add_into(out, tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return Poly._raw(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, i: int) -> "Poly":
        """Partial derivative in ``x_{i+1}``."""
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = norm(c * k)
        return Poly._raw(self.n, out)

    def substitute_permutation(self, perm) -> "Poly":
        """Relabel ``x_i -> x_{perm[i]}``."""
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * self.n
            for i, k in enumerate(e):
                e2[perm[i]] = k
            out[tuple(e2)] = c
        return Poly._raw(self.n, out)

    def evaluate(self, point) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = Fraction(c)
            for x, k in zip(point, e):
                if k:
                    t *= as_rational(x) ** k
            total += t
        return total

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], object]]:
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            yield e, self.terms[e]

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.n, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def to_text(self) -> str:
        return poly_to_text(self.terms)

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"

    __str__ = to_text


def coeff_text(c) -> str:
    c = norm(c)
    return str(c) if isinstance(c, int) else f"{c.numerator}/{c.denominator}"


def monomial_text(e) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"x{i + 1}")
        elif k > 1:
            parts.append(f"x{i + 1}^{k}")
    return " ".join(parts)


def poly_to_text(terms: Mapping) -> str:
    """``3/2 x1^2 x3 - x2 + 1`` style, graded-lex descending."""
    if not terms:
        return "0"
    out = []
    for e in sorted(terms, key=grlex_key, reverse=True):
        c = norm(terms[e])
        mono = monomial_text(e)
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{coeff_text(a)} {mono}"
        else:
            body = coeff_text(a)
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x(?P<idx>\d+)(?:\^(?P<pow>\d+))?)|(?P<op>[+\-*]))")


def parse_poly(text: str, n: int) -> Poly:
    """Parse sums of terms like ``3/2 x1^2 x3``; ``*`` between factors is optional."""
    if not isinstance(text, str):
        if isinstance(text, (int, Fraction)):
            return Poly.const(n, text)
        raise ParseError(f"polynomial must be a string, got {type(text).__name__}")
    pos, terms = 0, {}
    sign, coeff, exp, have_factor = 1, Fraction(1), [0] * n, False
    expect_term = True
    stripped = text.strip()
    if stripped == "":
        raise ParseError("empty polynomial", 0, text)

    def flush():
        nonlocal sign, coeff, exp, have_factor
        if not have_factor:
            raise ParseError("missing term", pos, text)
        add_into(terms, tuple(exp), norm(sign * coeff))
        sign, coeff, exp, have_factor = 1, Fraction(1), [0] * n, False

    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                             pos + len(text[pos:]) - len(text[pos:].lstrip()), text)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group("num") is not None:
            try:
                coeff *= Fraction(m.group("num"))
            except ZeroDivisionError:
                raise ParseError("zero denominator", start, text) from None
            have_factor = True
            expect_term = False
        elif m.group("var") is not None:
            i = int(m.group("idx"))
            if not 1 <= i <= n:
                raise ParseError(f"variable x{i} outside x1..x{n}", start, text)
            exp[i - 1] += int(m.group("pow") or 1)
            have_factor = True
            expect_term = False
        else:
            op = m.group("op")
            if op == "*":
                if not have_factor:
                    raise ParseError("'*' without a left factor", start, text)
            elif expect_term and not have_factor:
                if op == "-":
                    sign = -sign
            else:
                flush()
                sign = -1 if op == "-" else 1
                expect_term = True
        pos = m.end()
    flush()
    return Poly._raw(n, terms)

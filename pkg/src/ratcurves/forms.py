"""Sparse homogeneous polynomials with coefficients in a prime field F_p."""
from __future__ import annotations

import itertools
from collections import Counter
from typing import Mapping

import numpy as np

from .gf import FiniteField

__all__ = ["Form", "monomials", "NotHomogeneous"]


class NotHomogeneous(ValueError):
    pass


def monomials(nvars: int, degree: int) -> list[tuple]:
    """Exponent vectors of all degree-``degree`` monomials, in a fixed order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        c = Counter(combo)
        out.append(tuple(c[i] for i in range(nvars)))
    return out


class Form:
    """A homogeneous polynomial ``sum c_a x^a`` over F_p.

    ``terms`` maps exponent tuples to coefficients; zero coefficients are
    dropped.  The zero form keeps its nominal degree.
    """

    __slots__ = ("nvars", "degree", "p", "terms")

    def __init__(self, nvars: int, degree: int, p: int, terms: Mapping | None = None):
        self.nvars, self.degree, self.p = nvars, degree, p
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != nvars or min(exp, default=0) < 0:
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            if sum(exp) != degree:
                raise NotHomogeneous(f"monomial {exp} has degree {sum(exp)}, expected {degree}")
            c = int(c) % p
            if c:
                clean[exp] = (clean.get(exp, 0) + c) % p
        self.terms = {e: c for e, c in clean.items() if c}

    # -- constructors --------------------------------------------------------

    @classmethod
    def variable(cls, i: int, nvars: int, p: int) -> "Form":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, 1, p, {tuple(exp): 1})

    @classmethod
    def zero(cls, nvars: int, degree: int, p: int) -> "Form":
        return cls(nvars, degree, p)

    @classmethod
    def linear(cls, coeffs, p: int) -> "Form":
        n = len(coeffs)
        return cls(n, 1, p, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})

    @classmethod
    def random(cls, nvars: int, degree: int, p: int, rng: np.random.Generator,
               nonzero: bool = True) -> "Form":
        mons = monomials(nvars, degree)
        while True:
            coeffs = rng.integers(0, p, size=len(mons))
            if not nonzero or coeffs.any():
                return cls(nvars, degree, p, dict(zip(mons, coeffs.tolist())))

    @classmethod
    def parse(cls, text: str, nvars: int, p: int) -> "Form":
        """Parse ``"x0*x3 - x1*x2"``-style input (integer coefficients, ``^`` or
        ``**`` powers)."""
        import re
        text = text.replace(" ", "").replace("**", "^")
        if not text:
            raise ValueError("empty polynomial")
        if text[0] not in "+-":
            text = "+" + text
        terms, degree = {}, None
        for sign, body in re.findall(r"([+-])([^+-]+)", text):
            coef, exp = 1, [0] * nvars
            for factor in body.split("*"):
                m = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor)
                if m:
                    exp[int(m.group(1))] += int(m.group(2) or 1)
                else:
                    coef *= int(factor)
            coef = -coef if sign == "-" else coef
            exp = tuple(exp)
            terms[exp] = terms.get(exp, 0) + coef
            degree = sum(exp) if degree is None else degree
        return cls(nvars, degree, p, terms)

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {"nvars": self.nvars, "degree": self.degree,
                "terms": [{"exp": list(e), "coef": c} for e, c in sorted(self.terms.items(), reverse=True)]}

    @classmethod
    def from_json(cls, raw: Mapping, p: int) -> "Form":
        return cls(raw["nvars"], raw["degree"], p, {tuple(t["exp"]): t["coef"] for t in raw["terms"]})

    # -- arithmetic ------------------------------------------------------------

    def _same_ring(self, other):
        if (self.nvars, self.p) != (other.nvars, other.p):
            raise ValueError("forms live in different rings")

    def __add__(self, other: "Form") -> "Form":
        self._same_ring(other)
        if self.degree != other.degree and self.terms and other.terms:
            raise NotHomogeneous("sum of forms of different degrees")
        degree = self.degree if self.terms else other.degree
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Form(self.nvars, degree, self.p, terms)

    def __neg__(self) -> "Form":
        return Form(self.nvars, self.degree, self.p, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, other) -> "Form":
        if isinstance(other, int):
            return Form(self.nvars, self.degree, self.p, {e: c * other for e, c in self.terms.items()})
        self._same_ring(other)
        terms = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            terms[e] = terms.get(e, 0) + c1 * c2
        return Form(self.nvars, self.degree + other.degree, self.p, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Form":
        out = Form(self.nvars, 0, self.p, {(0,) * self.nvars: 1})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, Form) and (self.nvars, self.degree, self.p) == (other.nvars, other.degree, other.p)
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, self.degree, self.p, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def substitute(self, images: list["Form"]) -> "Form":
        """``self(images[0], ..., images[n-1])`` for linear forms ``images``."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        m = images[0].nvars
        out = Form(m, self.degree, self.p)
        powers = {}
        for exp, c in self.terms.items():
            term = Form(m, 0, self.p, {(0,) * m: c})
            for i, k in enumerate(exp):
                if k:
                    if (i, k) not in powers:
                        powers[i, k] = images[i] ** k
                    term = term * powers[i, k]
            out = out + term
        return out

    def split_last(self) -> list["Form"]:
        """``[G_0, ..., G_d]`` with ``self = sum_i G_i * x_last^i``; each ``G_i``
        is a form of degree ``d - i`` in the first ``nvars - 1`` variables."""
        parts = [dict() for _ in range(self.degree + 1)]
        for exp, c in self.terms.items():
            parts[exp[-1]][exp[:-1]] = c
        return [Form(self.nvars - 1, self.degree - i, self.p, t) for i, t in enumerate(parts)]

    def partial(self, i: int) -> "Form":
        terms = {}
        for exp, c in self.terms.items():
            if exp[i]:
                e = list(exp)
                e[i] -= 1
                terms[tuple(e)] = terms.get(tuple(e), 0) + c * exp[i]
        return Form(self.nvars, max(self.degree - 1, 0), self.p, terms)

    # -- evaluation --------------------------------------------------------------

    def evaluate(self, points, field: FiniteField | None = None) -> np.ndarray:
        """Values at the rows of ``points`` (field elements as integers)."""
        if field is None:
            from .gf import gf
            field = gf(self.p)
        if field.p != self.p:
            raise ValueError("field characteristic differs from the form's")
        pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
        out = np.zeros(len(pts), dtype=np.int64)
        for exp, c in self.terms.items():
            val = np.full(len(pts), c, dtype=np.int64)
            for i, k in enumerate(exp):
                if k:
                    val = field.mul(val, field.power(pts[:, i], k))
            out = field.add(out, val)
        return out

    def __call__(self, point, field: FiniteField | None = None) -> int:
        return int(self.evaluate([point], field)[0])

    def __repr__(self):
        if not self.terms:
            return f"Form(0, deg={self.degree})"
        parts = []
        for exp, c in sorted(self.terms.items(), reverse=True):
            mon = "*".join(f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(exp) if k)
            parts.append(f"{c}*{mon}" if mon else str(c))
        return f"Form({' + '.join(parts)} mod {self.p})"

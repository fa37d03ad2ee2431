"""Complex polynomials in (x, y, z) and small time-jets of their coefficients.

The analytic solutions all have the shape P(r, t) * carrier(r, t) where P is
a polynomial in the spatial coordinates whose coefficients are smooth complex
functions of time.  Coefficients are carried around as second-order jets
(value plus first and second time derivative) so that exact d/dt and d2/dt2
of the full wave function come out of plain product-rule algebra.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import SpecValidationError

Exponents = tuple[int, int, int]


@dataclass(frozen=True)
class Jet:
    """A complex scalar together with its first two time derivatives."""

    f: complex
    df: complex = 0.0
    d2f: complex = 0.0

    @staticmethod
    def const(value) -> "Jet":
        return Jet(complex(value))

    @staticmethod
    def time(t: float) -> "Jet":
        return Jet(complex(t), 1.0, 0.0)

    @staticmethod
    def exp_i(rate: complex, t: float) -> "Jet":
        """exp(rate * t) with its derivatives."""
        value = cmath.exp(rate * t)
        return Jet(value, rate * value, rate * rate * value)

    def __add__(self, other):
        if isinstance(other, JetPoly):
            return NotImplemented
        other = _as_jet(other)
        return Jet(self.f + other.f, self.df + other.df, self.d2f + other.d2f)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, JetPoly):
            return NotImplemented
        other = _as_jet(other)
        return Jet(self.f - other.f, self.df - other.df, self.d2f - other.d2f)

    def __rsub__(self, other):
        return _as_jet(other) - self

    def __neg__(self):
        return Jet(-self.f, -self.df, -self.d2f)

    def __mul__(self, other):
        if isinstance(other, JetPoly):
            return NotImplemented
        other = _as_jet(other)
        return Jet(
            self.f * other.f,
            self.df * other.f + self.f * other.df,
            self.d2f * other.f + 2.0 * self.df * other.df + self.f * other.d2f,
        )

    __rmul__ = __mul__

    def inv(self) -> "Jet":
        g = 1.0 / self.f
        return Jet(g, -self.df * g * g, (2.0 * self.df**2 / self.f - self.d2f) * g * g)

    def log(self) -> "Jet":
        d1 = self.df / self.f
        return Jet(cmath.log(self.f), d1, self.d2f / self.f - d1 * d1)

    def exp(self) -> "Jet":
        value = cmath.exp(self.f)
        return Jet(value, self.df * value, (self.d2f + self.df**2) * value)

    def pow(self, exponent: float) -> "Jet":
        return (float(exponent) * self.log()).exp()


def _as_jet(value) -> Jet:
    if isinstance(value, Jet):
        return value
    return Jet(complex(value))


class Poly3:
    """Polynomial in (x, y, z) with plain complex coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs: dict[Exponents, complex] = {}
        if coeffs:
            for exps, c in coeffs.items():
                if c != 0:
                    self.coeffs[exps] = self.coeffs.get(exps, 0.0) + complex(c)

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def diff(self, axis: int) -> "Poly3":
        out: dict[Exponents, complex] = {}
        for exps, c in self.coeffs.items():
            p = exps[axis]
            if p > 0:
                new = list(exps)
                new[axis] = p - 1
                key = tuple(new)
                out[key] = out.get(key, 0.0) + p * c
        return Poly3(out)

    def laplacian(self) -> "Poly3":
        result = Poly3()
        for axis in range(3):
            result = result + self.diff(axis).diff(axis)
        return result

    def __add__(self, other: "Poly3") -> "Poly3":
        out = dict(self.coeffs)
        for exps, c in other.coeffs.items():
            out[exps] = out.get(exps, 0.0) + c
        return Poly3(out)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at positions of shape (..., 3)."""
        points = np.asarray(points, dtype=float)
        x, y, z = points[..., 0], points[..., 1], points[..., 2]
        max_exp = [max((e[a] for e in self.coeffs), default=0) for a in range(3)]
        pows = []
        for axis, (coord, top) in enumerate(zip((x, y, z), max_exp)):
            table = [np.ones_like(coord)]
            for _ in range(top):
                table.append(table[-1] * coord)
            pows.append(table)
        result = np.zeros(np.broadcast(x, y, z).shape, dtype=complex)
        for (px, py, pz), c in self.coeffs.items():
            result += c * (pows[0][px] * pows[1][py] * pows[2][pz])
        return result


class JetPoly:
    """Polynomial in (x, y, z) with Jet coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[Exponents, Jet] = dict(terms) if terms else {}

    @staticmethod
    def constant(value) -> "JetPoly":
        return JetPoly({(0, 0, 0): _as_jet(value)})

    @staticmethod
    def coordinate(axis: int) -> "JetPoly":
        exps = [0, 0, 0]
        exps[axis] = 1
        return JetPoly({tuple(exps): Jet.const(1.0)})

    @staticmethod
    def linear(coeff_x, coeff_y, coeff_z, const=0.0) -> "JetPoly":
        terms = {}
        for axis, c in enumerate((coeff_x, coeff_y, coeff_z)):
            c = _as_jet(c)
            if c.f != 0 or c.df != 0 or c.d2f != 0:
                exps = [0, 0, 0]
                exps[axis] = 1
                terms[tuple(exps)] = c
        const = _as_jet(const)
        if const.f != 0 or const.df != 0 or const.d2f != 0:
            terms[(0, 0, 0)] = const
        return JetPoly(terms)

    def __add__(self, other):
        if not isinstance(other, JetPoly):
            other = JetPoly.constant(other)
        out = dict(self.terms)
        for exps, jet in other.terms.items():
            out[exps] = out[exps] + jet if exps in out else jet
        return JetPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, JetPoly):
            other = JetPoly.constant(other)
        return self + JetPoly({e: -j for e, j in other.terms.items()})

    def __mul__(self, other):
        if isinstance(other, JetPoly):
            out: dict[Exponents, Jet] = {}
            for e1, j1 in self.terms.items():
                for e2, j2 in other.terms.items():
                    key = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                    prod = j1 * j2
                    out[key] = out[key] + prod if key in out else prod
            return JetPoly(out)
        jet = _as_jet(other)
        return JetPoly({e: j * jet for e, j in self.terms.items()})

    __rmul__ = __mul__

    def order(self, n: int) -> Poly3:
        """Plain polynomial holding the n-th time derivative of every coefficient."""
        attr = ("f", "df", "d2f")[n]
        return Poly3({e: getattr(j, attr) for e, j in self.terms.items()})


@dataclass(frozen=True)
class Monomial:
    """One term of a vortex prefactor: cx * x**px * y**py * z**pz."""

    cx: complex
    px: int
    py: int
    pz: int


class PolynomialPrefactor:
    """The complex polynomial W_R + i*W_I whose zero set is the vortex locus."""

    DEFAULT_MAX_DEGREE = 4

    def __init__(self, monomials, max_degree: int = DEFAULT_MAX_DEGREE):
        merged: dict[Exponents, complex] = {}
        for mono in monomials:
            if isinstance(mono, Monomial):
                cx, exps = mono.cx, (mono.px, mono.py, mono.pz)
            else:
                cx, *rest = mono
                exps = tuple(int(p) for p in rest)
            if any(p < 0 for p in exps):
                raise SpecValidationError(f"negative exponent in monomial {exps}")
            merged[exps] = merged.get(exps, 0.0) + complex(cx)
        self.monomials = tuple(
            Monomial(c, *e) for e, c in sorted(merged.items()) if c != 0
        )
        self.max_degree = int(max_degree)
        if self.degree() > self.max_degree:
            raise SpecValidationError(
                f"prefactor degree {self.degree()} exceeds maximum {self.max_degree}"
            )

    def degree(self) -> int:
        return max((m.px + m.py + m.pz for m in self.monomials), default=0)

    def as_poly(self) -> Poly3:
        return Poly3({(m.px, m.py, m.pz): m.cx for m in self.monomials})

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return self.as_poly().evaluate(points)

    def __iter__(self):
        return iter(self.monomials)

    def __len__(self):
        return len(self.monomials)

    def __repr__(self):
        return f"PolynomialPrefactor({list(self.monomials)!r})"


def magnitude(vec) -> float:
    return math.sqrt(sum(abs(c) ** 2 for c in vec))

"""Multivariate homogeneous polynomial algebra in exact and floating modes.

Exact mode works over Gaussian rationals (:class:`QI`), floating mode over
python ``complex``.  A polynomial's mode is inferred from its coefficients;
mixing exact and float operands demotes the result to float.
"""

from __future__ import annotations

import itertools
import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateFamilyError,
    DimensionMismatchError,
    MacaulayDegenerateError,
    NotSquareFreeError,
    SizeCapError,
    ZeroPolynomialError,
)

# Desk-scale caps for exact resultants (Macaulay matrix stays <= ~10^4 rows).
MAX_VARS = 5
MAX_FORM_DEGREE = 6
MAX_MACAULAY_ROWS = 10_000

FLOAT_ZERO_RTOL = 1e-10


class QI:
    """Gaussian rational ``re + im*i`` with exact :class:`Fraction` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "QI":
        if isinstance(value, QI):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value, 0)
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, float):
            return cls(Fraction(value), 0)
        raise TypeError(f"cannot coerce {type(value).__name__} to QI")

    def __add__(self, other):
        other = QI.coerce(other)
        return QI(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-QI.coerce(other))

    def __rsub__(self, other):
        return QI.coerce(other) + (-self)

    def __mul__(self, other):
        other = QI.coerce(other)
        return QI(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QI.coerce(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QI(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        return QI.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return QI(1) / self ** (-k)
        out = QI(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "QI":
        return QI(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other) -> bool:
        try:
            other = QI.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"QI({self.re!r}, {self.im!r})"

    def __str__(self):
        return f"{self.re}+{self.im}*i"


def _is_exact(value) -> bool:
    return isinstance(value, (QI, int, Fraction))


def _coerce_coeff(value, exact: bool):
    return QI.coerce(value) if exact else complex(value)


class HomogeneousPolynomial:
    """Sparse homogeneous form ``sum c_alpha * z^alpha`` in ``num_vars`` variables.

    The zero polynomial is a distinct sentinel (``degree == -1``, no terms),
    produced by :meth:`zero`; hypersurface constructors reject it.
    """

    __slots__ = ("num_vars", "degree", "_terms", "mode")

    def __init__(self, num_vars: int, terms: dict, degree: int | None = None):
        if num_vars < 1:
            raise DimensionMismatchError("need at least one variable")
        cleaned = {}
        exact = all(_is_exact(c) for c in terms.values())
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars:
                raise DimensionMismatchError(
                    f"exponent vector {exps} has length {len(exps)}, expected {num_vars}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            coeff = _coerce_coeff(coeff, exact)
            if not coeff:
                continue
            cleaned[exps] = cleaned.get(exps, _coerce_coeff(0, exact)) + coeff
        cleaned = {e: c for e, c in cleaned.items() if c}
        if cleaned:
            degrees = {sum(e) for e in cleaned}
            if len(degrees) != 1:
                raise ValueError(f"inhomogeneous term degrees {sorted(degrees)}")
            inferred = degrees.pop()
            if degree is not None and degree != inferred:
                raise ValueError(f"declared degree {degree} != term degree {inferred}")
            self.degree = inferred
        else:
            # zero sentinel
            self.degree = -1
        self.num_vars = num_vars
        self._terms = dict(sorted(cleaned.items()))
        self.mode = "exact" if exact else "float"

    @classmethod
    def zero(cls, num_vars: int) -> "HomogeneousPolynomial":
        return cls(num_vars, {})

    @classmethod
    def monomial(cls, num_vars: int, exps, coeff=1) -> "HomogeneousPolynomial":
        return cls(num_vars, {tuple(exps): coeff})

    @classmethod
    def linear(cls, coeffs) -> "HomogeneousPolynomial":
        coeffs = list(coeffs)
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms)

    # -- basic structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        """Terms as (exponent tuple, coefficient), in sorted exponent order."""
        return list(self._terms.items())

    def coeff(self, exps):
        return self._terms.get(tuple(exps), QI(0) if self.mode == "exact" else 0j)

    def coeff_scale(self) -> float:
        """Largest coefficient magnitude (0.0 for the zero sentinel)."""
        if self.is_zero:
            return 0.0
        return max(abs(complex(c)) for c in self._terms.values())

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return (
            self.num_vars == other.num_vars
            and self.degree == other.degree
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.num_vars, self.degree, tuple(self._terms.items())))

    def __repr__(self):
        if self.is_zero:
            return f"HomogeneousPolynomial.zero({self.num_vars})"
        parts = [f"{c}*z^{e}" for e, c in self.items()]
        return f"<{' + '.join(parts)}>"

    # -- conversions ---------------------------------------------------------

    def to_float(self) -> "HomogeneousPolynomial":
        if self.mode == "float":
            return self
        return HomogeneousPolynomial(
            self.num_vars, {e: complex(c) for e, c in self._terms.items()}
        )

    def to_exact(self) -> "HomogeneousPolynomial":
        if self.mode == "exact":
            return self
        return HomogeneousPolynomial(
            self.num_vars, {e: QI.coerce(c) for e, c in self._terms.items()}
        )

    def normalized(self) -> "HomogeneousPolynomial":
        """Divide by the max coefficient magnitude (float mode scaling)."""
        s = self.coeff_scale()
        if s == 0 or s == 1.0:
            return self
        return HomogeneousPolynomial(
            self.num_vars, {e: complex(c) / s for e, c in self._terms.items()}
        )

    # -- arithmetic ----------------------------------------------------------

    def _check_compatible(self, other: "HomogeneousPolynomial"):
        if self.num_vars != other.num_vars:
            raise DimensionMismatchError(
                f"variable counts differ: {self.num_vars} vs {other.num_vars}"
            )

    def __add__(self, other: "HomogeneousPolynomial"):
        self._check_compatible(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degrees")
        exact = self.mode == "exact" and other.mode == "exact"
        terms: dict = {}
        for e, c in itertools.chain(self._terms.items(), other._terms.items()):
            c = c if exact else complex(c)
            terms[e] = terms.get(e, QI(0) if exact else 0j) + c
        return HomogeneousPolynomial(self.num_vars, terms)

    def __neg__(self):
        return HomogeneousPolynomial(
            self.num_vars, {e: -c for e, c in self._terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HomogeneousPolynomial):
            self._check_compatible(other)
            if self.is_zero or other.is_zero:
                return HomogeneousPolynomial.zero(self.num_vars)
            exact = self.mode == "exact" and other.mode == "exact"
            terms: dict = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    c1c = c1 if exact else complex(c1)
                    c2c = c2 if exact else complex(c2)
                    terms[e] = terms.get(e, QI(0) if exact else 0j) + c1c * c2c
            return HomogeneousPolynomial(self.num_vars, terms)
        # scalar
        if self.is_zero:
            return self
        return HomogeneousPolynomial(
            self.num_vars, {e: c * other for e, c in self._terms.items()}
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = HomogeneousPolynomial.monomial(self.num_vars, (0,) * self.num_vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, point):
        """Evaluate at a point; compensated summation in floating mode."""
        point = list(point)
        if len(point) != self.num_vars:
            raise DimensionMismatchError(
                f"point length {len(point)} != num_vars {self.num_vars}"
            )
        if self.is_zero:
            return QI(0) if self.mode == "exact" else 0j
        exact = self.mode == "exact" and all(_is_exact(x) for x in point)
        if exact:
            pt = [QI.coerce(x) for x in point]
            total = QI(0)
            for exps, coeff in self._terms.items():
                term = coeff
                for x, e in zip(pt, exps):
                    if e:
                        term = term * x**e
                total = total + term
            return total
        pt = [complex(x) for x in point]
        reals, imags = [], []
        for exps, coeff in self._terms.items():
            term = complex(coeff)
            for x, e in zip(pt, exps):
                if e:
                    term *= x**e
            reals.append(term.real)
            imags.append(term.imag)
        return complex(math.fsum(reals), math.fsum(imags))

    def __call__(self, point):
        return self.evaluate(point)

    # -- calculus ------------------------------------------------------------

    def partial_derivative(self, var: int) -> "HomogeneousPolynomial":
        if not 0 <= var < self.num_vars:
            raise IndexError(f"variable index {var} out of range")
        terms = {}
        for exps, coeff in self._terms.items():
            e = exps[var]
            if e == 0:
                continue
            new = list(exps)
            new[var] = e - 1
            terms[tuple(new)] = coeff * e
        return HomogeneousPolynomial(self.num_vars, terms)

    def gradient(self):
        return [self.partial_derivative(j) for j in range(self.num_vars)]

    # -- serialization -------------------------------------------------------

    def _coeff_parts(self, coeff):
        if self.mode == "exact":
            return str(coeff.re), str(coeff.im)
        c = complex(coeff)
        return repr(c.real), repr(c.imag)

    def to_text(self) -> str:
        head = f"{self.num_vars}; {self.degree}"
        parts = []
        for exps, coeff in self.items():
            re_s, im_s = self._coeff_parts(coeff)
            parts.append(f"[{','.join(map(str, exps))}]:{re_s}+{im_s}*i")
        return "; ".join([head] + parts) if parts else head

    @classmethod
    def from_text(cls, text: str) -> "HomogeneousPolynomial":
        chunks = [c.strip() for c in text.split(";")]
        if len(chunks) < 2:
            raise ValueError(f"malformed polynomial text: {text!r}")
        num_vars = int(chunks[0])
        degree = int(chunks[1])
        terms = {}
        for chunk in chunks[2:]:
            if not chunk:
                continue
            m = _re.match(r"\[([^\]]*)\]:(.*)\*i$", chunk)
            if not m:
                raise ValueError(f"malformed term: {chunk!r}")
            exps = tuple(int(e) for e in m.group(1).split(","))
            body = m.group(2)
            # split re+im on the last '+' that does not follow an exponent marker
            plus = [p.start() for p in _re.finditer(r"(?<![eE])\+", body)]
            if not plus:
                raise ValueError(f"malformed coefficient: {body!r}")
            cut = plus[-1]
            re_s, im_s = body[:cut], body[cut + 1 :]
            terms[exps] = _parse_scalar(re_s, im_s)
        if not terms:
            return cls.zero(num_vars)
        poly = cls(num_vars, terms)
        if poly.degree != degree and not poly.is_zero:
            raise ValueError(f"declared degree {degree} != parsed degree {poly.degree}")
        return poly

    def to_json_dict(self) -> dict:
        out = {"vars": self.num_vars, "degree": self.degree, "terms": []}
        for exps, coeff in self.items():
            if self.mode == "exact":
                re_v, im_v = str(coeff.re), str(coeff.im)
            else:
                re_v, im_v = complex(coeff).real, complex(coeff).imag
            out["terms"].append({"exp": list(exps), "re": re_v, "im": im_v})
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "HomogeneousPolynomial":
        num_vars = int(data["vars"])
        terms = {}
        for t in data.get("terms", []):
            exps = tuple(int(e) for e in t["exp"])
            terms[exps] = _parse_scalar(t.get("re", 0), t.get("im", 0))
        if not terms:
            return cls.zero(num_vars)
        return cls(num_vars, terms)


def _parse_scalar(re_part, im_part):
    """Parse re/im given as numbers or strings; 'p/q' and integer strings are exact."""

    def one(v):
        if isinstance(v, str):
            s = v.strip()
            if "/" in s or _re.fullmatch(r"[+-]?\d+", s):
                return Fraction(s)
            return float(s)
        return v

    re_v, im_v = one(re_part), one(im_part)
    exact = all(isinstance(v, (int, Fraction)) for v in (re_v, im_v))
    if exact:
        return QI(re_v, im_v)
    return complex(float(re_v), float(im_v))


@dataclass(frozen=True)
class Hypersurface:
    """Projective hypersurface cut out by a nonzero homogeneous form.

    Exact-mode forms must be square-free (checked against a seeded random
    directional derivative); take :func:`square_free_part` first if needed.
    """

    poly: HomogeneousPolynomial
    degree: int

    def __init__(self, poly: HomogeneousPolynomial, check_square_free: bool = True):
        if poly.is_zero:
            raise ZeroPolynomialError("hypersurface needs a nonzero form")
        if poly.degree < 1:
            raise ValueError("hypersurface form must have degree >= 1")
        if poly.mode == "exact" and check_square_free and poly.degree > 1:
            if not is_square_free(poly):
                raise NotSquareFreeError(
                    "exact-mode hypersurface form has a repeated factor"
                )
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "degree", poly.degree)

    @property
    def num_vars(self) -> int:
        return self.poly.num_vars

    @property
    def ambient_dim(self) -> int:
        return self.poly.num_vars - 1


# -- sympy bridge (exact gcd / square-free machinery) --------------------------

_SYMPY_GENS: dict[int, tuple] = {}


def _gens(num_vars: int):
    import sympy

    if num_vars not in _SYMPY_GENS:
        _SYMPY_GENS[num_vars] = sympy.symbols(f"z0:{num_vars}")
    return _SYMPY_GENS[num_vars]


def to_sympy(poly: HomogeneousPolynomial):
    import sympy

    gens = _gens(poly.num_vars)
    expr = sympy.Integer(0)
    for exps, coeff in poly.items():
        if poly.mode == "exact":
            c = sympy.Rational(coeff.re) + sympy.I * sympy.Rational(coeff.im)
        else:
            c = sympy.Float(complex(coeff).real) + sympy.I * sympy.Float(
                complex(coeff).imag
            )
        mono = sympy.Integer(1)
        for g, e in zip(gens, exps):
            mono *= g**e
        expr += c * mono
    return expr


def from_sympy(expr, num_vars: int) -> HomogeneousPolynomial:
    import sympy

    gens = _gens(num_vars)
    p = sympy.Poly(sympy.expand(expr), *gens)
    terms = {}
    for exps, coeff in p.terms():
        re_part, im_part = coeff.as_real_imag()
        terms[tuple(exps)] = QI(
            Fraction(sympy.Rational(re_part)), Fraction(sympy.Rational(im_part))
        )
    if not terms:
        return HomogeneousPolynomial.zero(num_vars)
    return HomogeneousPolynomial(num_vars, terms)


def exact_gcd(
    p: HomogeneousPolynomial, q: HomogeneousPolynomial
) -> HomogeneousPolynomial:
    import sympy

    if p.mode != "exact" or q.mode != "exact":
        raise ValueError("exact_gcd needs exact-mode polynomials")
    g = sympy.gcd(to_sympy(p), to_sympy(q), *_gens(p.num_vars))
    return from_sympy(g, p.num_vars)


def square_free_part(poly: HomogeneousPolynomial) -> HomogeneousPolynomial:
    """Product of the distinct irreducible factors (exact mode only)."""
    import sympy

    if poly.mode != "exact":
        raise ValueError("square_free_part needs an exact-mode polynomial")
    if poly.is_zero or poly.degree == 0:
        return poly
    expr = sympy.sqf_part(sympy.Poly(to_sympy(poly), *_gens(poly.num_vars)))
    return from_sympy(expr.as_expr(), poly.num_vars)


def is_square_free(poly: HomogeneousPolynomial, seed: int = 20240) -> bool:
    """Check gcd(p, D_v p) is constant for a seeded random direction v."""
    import random

    if poly.degree <= 1:
        return True
    rng = random.Random(seed)
    for _ in range(3):
        direction = [rng.randint(1, 7) for _ in range(poly.num_vars)]
        dv = HomogeneousPolynomial.zero(poly.num_vars)
        for j, w in enumerate(direction):
            dj = poly.partial_derivative(j)
            if not dj.is_zero:
                dv = dj * QI(w) if dv.is_zero else dv + dj * QI(w)
        if dv.is_zero:
            continue
        g = exact_gcd(poly, dv)
        return g.degree <= 0
    return True


# -- Euler identity -------------------------------------------------------------


def euler_residual(p: HomogeneousPolynomial, point):
    """``<grad p(x), x> - deg(p) * p(x)``; exactly zero for homogeneous p."""
    if p.is_zero:
        raise ZeroPolynomialError("euler_residual needs a nonzero polynomial")
    point = list(point)
    exact = p.mode == "exact" and all(_is_exact(x) for x in point)
    total = QI(0) if exact else 0j
    for j in range(p.num_vars):
        dj = p.partial_derivative(j)
        if dj.is_zero:
            continue
        xj = QI.coerce(point[j]) if exact else complex(point[j])
        total = total + dj.evaluate(point) * xj
    return total - p.evaluate(point) * (QI(p.degree) if exact else p.degree)


# -- Jacobian determinant --------------------------------------------------------


def _poly_det(rows: list[list[HomogeneousPolynomial]]) -> HomogeneousPolynomial:
    """Cofactor expansion of a matrix of polynomials."""
    k = len(rows)
    num_vars = rows[0][0].num_vars
    if k == 1:
        return rows[0][0]
    det = HomogeneousPolynomial.zero(num_vars)
    for j, head in enumerate(rows[0]):
        if head.is_zero:
            continue
        minor = [[row[m] for m in range(k) if m != j] for row in rows[1:]]
        term = head * _poly_det(minor)
        if term.is_zero:
            continue
        if j % 2:
            term = -term
        det = term if det.is_zero else det + term
    return det


def monomials_of_degree(num_vars: int, degree: int) -> list[tuple]:
    """All exponent tuples of the given total degree, sorted."""
    if degree < 0:
        return []

    def rec(k, rem):
        if k == 1:
            yield (rem,)
            return
        for e in range(rem + 1):
            for tail in rec(k - 1, rem - e):
                yield (e,) + tail

    return sorted(rec(num_vars, degree))


def jacobian_determinant(
    ps: list[HomogeneousPolynomial], rng_seed: int = 7
) -> HomogeneousPolynomial:
    """Determinant of the matrix of partials of n+1 forms in n+1 variables.

    Cofactor expansion in exact mode; monomial interpolation of point
    determinants in floating mode.  Degree is ``sum(d_i) - (n+1)`` unless the
    determinant vanishes identically, in which case the zero sentinel is
    returned.
    """
    if not ps:
        raise DimensionMismatchError("empty polynomial list")
    n_plus_1 = len(ps)
    if any(p.num_vars != n_plus_1 for p in ps):
        raise DimensionMismatchError(
            "need n+1 forms in n+1 variables for a square Jacobian"
        )
    if any(p.is_zero or p.degree < 1 for p in ps):
        raise ValueError("all forms must have degree >= 1")
    target_degree = sum(p.degree for p in ps) - n_plus_1
    exact = all(p.mode == "exact" for p in ps)
    if exact:
        rows = [[p.partial_derivative(j) for j in range(n_plus_1)] for p in ps]
        det = _poly_det(rows)
        return det

    grads = [[p.partial_derivative(j).to_float() for j in range(n_plus_1)] for p in ps]

    def det_at(point):
        m = np.array(
            [[complex(g.evaluate(point)) for g in row] for row in grads],
            dtype=complex,
        )
        scale = 1.0
        for row in m:
            scale *= max(np.max(np.abs(row)), 1e-300)
        return np.linalg.det(m), scale

    basis = monomials_of_degree(n_plus_1, target_degree)
    rng = np.random.default_rng(rng_seed)
    n_samples = 2 * len(basis)
    pts = rng.normal(size=(n_samples, n_plus_1)) + 1j * rng.normal(
        size=(n_samples, n_plus_1)
    )
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    vals, scales = [], []
    for pt in pts:
        v, s = det_at(list(pt))
        vals.append(v)
        scales.append(s)
    vals = np.array(vals)
    scales = np.array(scales)
    # probabilistic identical-vanishing test, scale-relative
    if np.max(np.abs(vals) / scales) < FLOAT_ZERO_RTOL:
        return HomogeneousPolynomial.zero(n_plus_1)
    if target_degree == 0:
        return HomogeneousPolynomial.monomial(
            n_plus_1, (0,) * n_plus_1, complex(np.mean(vals))
        )
    design = np.array(
        [[np.prod(np.power(pt, mono)) for mono in basis] for pt in pts],
        dtype=complex,
    )
    coeffs, *_ = np.linalg.lstsq(design, vals, rcond=None)
    top = np.max(np.abs(coeffs))
    terms = {
        mono: c for mono, c in zip(basis, coeffs) if abs(c) > FLOAT_ZERO_RTOL * top
    }
    return HomogeneousPolynomial(n_plus_1, terms)


# -- Macaulay resultant ------------------------------------------------------------


@dataclass(frozen=True)
class ResultantResult:
    """Outcome of a resultant computation.

    ``value`` is the exact Gaussian-rational resultant when available (exact
    mode).  ``min_singular``/``max_singular`` describe the floating Macaulay
    matrix.  ``nonzero`` is the certified verdict in exact mode and the
    thresholded verdict in floating mode.
    """

    mode: str
    nonzero: bool
    value: QI | None = None
    min_singular: float | None = None
    max_singular: float | None = None
    detail: str = ""

    @property
    def is_zero(self) -> bool:
        return not self.nonzero


def _fraction_det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    a = [row[:] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            factor = a[r][col] * inv
            arow, crow = a[r], a[col]
            for c in range(col, n):
                arow[c] -= factor * crow[c]
    return det


def _qi_det(rows: list[list[QI]]) -> QI:
    n = len(rows)
    if n == 0:
        return QI(1)
    if all(e.im == 0 for row in rows for e in row):
        return QI(_fraction_det([[e.re for e in row] for row in rows]))
    a = [row[:] for row in rows]
    det = QI(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return QI(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det = det * a[col][col]
        inv = QI(1) / a[col][col]
        for r in range(col + 1, n):
            if not a[r][col]:
                continue
            factor = a[r][col] * inv
            arow, crow = a[r], a[col]
            for c in range(col, n):
                arow[c] = arow[c] - factor * crow[c]
    return det


def _qi_rank(rows: list[list[QI]]) -> int:
    if not rows:
        return 0
    a = [row[:] for row in rows]
    n_rows, n_cols = len(a), len(a[0])
    rank = 0
    row = 0
    for col in range(n_cols):
        pivot = next((r for r in range(row, n_rows) if a[r][col]), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        inv = QI(1) / a[row][col]
        for r in range(row + 1, n_rows):
            if not a[r][col]:
                continue
            factor = a[r][col] * inv
            for c in range(col, n_cols):
                a[r][c] = a[r][c] - factor * a[row][c]
        rank += 1
        row += 1
        if row == n_rows:
            break
    return rank


def _macaulay_structure(degrees: list[int], order: tuple[int, ...]):
    """Monomials of critical degree with their assigned form index."""
    n_vars = len(degrees)
    nu = sum(d - 1 for d in degrees) + 1
    mons = monomials_of_degree(n_vars, nu)
    assignment = []
    reduced_flags = []
    for mono in mons:
        divisors = [i for i in range(n_vars) if mono[i] >= degrees[i]]
        chosen = min(divisors, key=lambda i: order.index(i))
        assignment.append(chosen)
        reduced_flags.append(len(divisors) == 1)
    return nu, mons, assignment, reduced_flags


def _macaulay_rows(ps, mons, assignment, exact: bool):
    index = {m: k for k, m in enumerate(mons)}
    size = len(mons)
    zero = QI(0) if exact else 0j
    rows = []
    for mono, i in zip(mons, assignment):
        shift = list(mono)
        shift[i] -= ps[i].degree
        row = [zero] * size
        for exps, coeff in ps[i].items():
            target = tuple(s + e for s, e in zip(shift, exps))
            row[index[target]] = coeff if exact else complex(coeff)
        rows.append(row)
    return rows


def macaulay_resultant(
    ps: list[HomogeneousPolynomial],
    threshold: float = 1e-8,
) -> ResultantResult:
    """Classical Macaulay resultant of n+1 forms in n+1 variables.

    Exact mode returns the determinant quotient ``det(M)/det(M')`` (retrying
    the variable priority order when the minor degenerates, then falling back
    to an exact rank certificate for the zero/nonzero verdict).  Floating mode
    reports the extreme singular values of the Macaulay matrix and a verdict
    against ``threshold``.
    """
    if not ps:
        raise DimensionMismatchError("empty polynomial list")
    n_vars = len(ps)
    if any(p.num_vars != n_vars for p in ps):
        raise DimensionMismatchError("need n+1 forms in n+1 variables")
    if any(p.is_zero or p.degree < 1 for p in ps):
        raise ValueError("resultant needs nonzero forms of positive degree")
    if n_vars > MAX_VARS:
        raise SizeCapError(f"num_vars {n_vars} exceeds cap {MAX_VARS}", MAX_VARS)
    degrees = [p.degree for p in ps]
    if max(degrees) > MAX_FORM_DEGREE:
        raise SizeCapError(
            f"degree {max(degrees)} exceeds cap {MAX_FORM_DEGREE}", MAX_FORM_DEGREE
        )
    exact = all(p.mode == "exact" for p in ps)

    # linear systems reduce to the coefficient determinant
    if all(d == 1 for d in degrees):
        unit = [tuple(1 if j == i else 0 for j in range(n_vars)) for i in range(n_vars)]
        if exact:
            rows = [[p.coeff(e) for e in unit] for p in ps]
            det = _qi_det(rows)
            return ResultantResult(
                mode="exact", nonzero=bool(det), value=det, detail="linear"
            )
        m = np.array(
            [[complex(p.coeff(e)) for e in unit] for p in ps], dtype=complex
        )
        sv = np.linalg.svd(m, compute_uv=False)
        nonzero = sv[-1] > threshold * max(sv[0], 1.0)
        return ResultantResult(
            mode="float",
            nonzero=bool(nonzero),
            min_singular=float(sv[-1]),
            max_singular=float(sv[0]),
            detail="linear",
        )

    nu = sum(d - 1 for d in degrees) + 1
    size = math.comb(nu + n_vars - 1, n_vars - 1)
    if size > MAX_MACAULAY_ROWS:
        raise SizeCapError(
            f"Macaulay matrix would have {size} rows, cap {MAX_MACAULAY_ROWS}",
            MAX_MACAULAY_ROWS,
        )

    if not exact:
        _, mons, assignment, _ = _macaulay_structure(degrees, tuple(range(n_vars)))
        rows = _macaulay_rows([p.to_float() for p in ps], mons, assignment, False)
        m = np.array(rows, dtype=complex)
        norms = np.linalg.norm(m, axis=1)
        m = m / norms[:, None]
        sv = np.linalg.svd(m, compute_uv=False)
        nonzero = sv[-1] > threshold * max(sv[0], 1.0)
        return ResultantResult(
            mode="float",
            nonzero=bool(nonzero),
            min_singular=float(sv[-1]),
            max_singular=float(sv[0]),
            detail=f"macaulay nu={nu} size={size}",
        )

    orders = list(itertools.permutations(range(n_vars)))
    for order in orders:
        _, mons, assignment, reduced_flags = _macaulay_structure(degrees, order)
        rows = _macaulay_rows(ps, mons, assignment, True)
        det = _qi_det(rows)
        keep = [k for k, flag in enumerate(reduced_flags) if not flag]
        minor_rows = [[rows[r][c] for c in keep] for r in keep]
        minor = _qi_det(minor_rows)
        if minor:
            value = det / minor
            return ResultantResult(
                mode="exact",
                nonzero=bool(value),
                value=value,
                detail=f"macaulay nu={nu} size={size} order={order}",
            )
    # every minor degenerated: decide by exact rank of the full multiplication map
    index_mons = monomials_of_degree(n_vars, nu)
    index = {m: k for k, m in enumerate(index_mons)}
    full_rows = []
    for i, p in enumerate(ps):
        for shift in monomials_of_degree(n_vars, nu - degrees[i]):
            row = [QI(0)] * len(index_mons)
            for exps, coeff in p.items():
                target = tuple(s + e for s, e in zip(shift, exps))
                row[index[target]] = coeff
            full_rows.append(row)
    rank = _qi_rank(full_rows)
    if rank < len(index_mons):
        return ResultantResult(
            mode="exact",
            nonzero=False,
            value=QI(0),
            detail=f"rank-certified zero ({rank}/{len(index_mons)})",
        )
    raise MacaulayDegenerateError(
        "all Macaulay minors vanish but the system has no common zero; "
        "exact value unavailable (rank-certified nonzero)"
    )

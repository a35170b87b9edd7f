"""Entire functions of exponential-polynomial type and their zero analysis.

The function class is ``c * prod (z - a_k)^{m_k} * exp(p(z))`` with polynomial
``p``; finite sums of such functions (pullbacks of homogeneous forms along
curves) are handled by :class:`ExpPolySum`.  All evaluation is overflow-safe:
functions are sampled as ``log|f| + i arg f``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    CurveInsideDivisorError,
    DimensionMismatchError,
    RetryExhaustedError,
    ZeroOnContourError,
)
from .polycore import QI, HomogeneousPolynomial, _is_exact

NEG_INF = float("-inf")

# deterministic jitter sequence for contour-zero collisions
JITTER_FACTORS = tuple(1.0 + 1e-6 * k for k in range(1, 21))

# winding defaults
WINDING_START_SAMPLES = 1 << 10
WINDING_MAX_SAMPLES = 1 << 18
CANCEL_LOG_FLOOR = math.log(1e-13)

DEFAULT_ZERO_TOL = 1e-9


def _as_exact(value):
    if isinstance(value, QI):
        return value
    if isinstance(value, (int, Fraction)):
        return QI(value)
    return None


def _poly_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def _poly_eval_batch(coeffs, zs):
    if not coeffs:
        return np.zeros_like(zs)
    return np.polynomial.polynomial.polyval(zs, np.asarray(coeffs, dtype=complex))


def _poly_derivative(coeffs):
    return tuple(c * k for k, c in enumerate(coeffs) if k >= 1)


# ---------------------------------------------------------------------------
# exact univariate helpers (Gaussian-rational coefficients, low -> high)
# ---------------------------------------------------------------------------


def _qi_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _qi_mul(a, b):
    if not a or not b:
        return []
    out = [QI(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return _qi_trim(out)


def _qi_divmod(num, den):
    num = _qi_trim(list(num))
    den = _qi_trim(list(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [QI(0)] * max(0, len(num) - len(den) + 1)
    rem = list(num)
    lead = den[-1]
    while len(rem) >= len(den) and _qi_trim(rem):
        shift = len(rem) - len(den)
        factor = rem[-1] / lead
        quot[shift] = factor
        for i, c in enumerate(den):
            rem[shift + i] = rem[shift + i] - factor * c
        rem = _qi_trim(rem)
        if not rem:
            break
    return _qi_trim(quot), rem


def _qi_gcd(a, b):
    a, b = _qi_trim(list(a)), _qi_trim(list(b))
    while b:
        _, r = _qi_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _qi_derivative(coeffs):
    return _qi_trim([c * QI(k) for k, c in enumerate(coeffs) if k >= 1])


def exact_square_free_decomposition(coeffs):
    """Yun's algorithm; returns [(factor_coeffs, multiplicity), ...]."""
    f = _qi_trim(list(coeffs))
    if len(f) <= 1:
        return []
    out = []
    df = _qi_derivative(f)
    a = _qi_gcd(f, df)
    b, _ = _qi_divmod(f, a)
    c, _ = _qi_divmod(df, a)
    k = 1
    d = _qi_trim([ci - di for ci, di in _zip_pad(c, _qi_derivative(b))])
    while len(b) > 1:
        a = _qi_gcd(b, d)
        if len(a) > 1:
            out.append((a, k))
        b, _ = _qi_divmod(b, a)
        c, _ = _qi_divmod(d, a)
        d = _qi_trim([ci - di for ci, di in _zip_pad(c, _qi_derivative(b))])
        k += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [QI(0)] * (n - len(a))
    b = list(b) + [QI(0)] * (n - len(b))
    return zip(a, b)


# ---------------------------------------------------------------------------
# Aberth-Ehrlich simultaneous iteration
# ---------------------------------------------------------------------------


def aberth_roots(coeffs, tol=1e-13, max_iter=400):
    """All complex roots of a polynomial (coefficients low -> high)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.size == 0 or not np.any(coeffs != 0):
        raise ValueError("zero polynomial has no well-defined roots")
    top = np.max(np.abs(coeffs))
    # strip numerically-zero leading coefficients
    nz = np.nonzero(np.abs(coeffs) > 1e-300 * top)[0]
    coeffs = coeffs[: nz[-1] + 1]
    # deflate exact zeros at the origin
    origin_mult = 0
    while abs(coeffs[0]) == 0.0:
        coeffs = coeffs[1:]
        origin_mult += 1
    deg = len(coeffs) - 1
    roots = [0j] * origin_mult
    if deg == 0:
        return np.array(roots)
    if deg == 1:
        roots.append(-coeffs[0] / coeffs[1])
        return np.array(roots)
    monic = coeffs / coeffs[-1]
    bound = 1.0 + np.max(np.abs(monic[:-1]))
    k = np.arange(deg)
    z = 0.7 * bound * np.exp(2j * np.pi * (k / deg + 0.123456))
    dp = np.polynomial.polynomial.polyder(monic)
    for _ in range(max_iter):
        pz = np.polynomial.polynomial.polyval(z, monic)
        dpz = np.polynomial.polynomial.polyval(z, dp)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dpz != 0, pz / np.where(dpz == 0, 1, dpz), 0.1)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv_sum = np.sum(1.0 / diff, axis=1) - 1.0  # remove diagonal 1/1
            denom = 1.0 - newton * inv_sum
            step = np.where(np.abs(denom) > 1e-300, newton / denom, newton)
        z = z - step
        if np.max(np.abs(step) / np.maximum(1.0, np.abs(z))) < tol:
            break
    return np.concatenate([np.array(roots), z]) if roots else z


# ---------------------------------------------------------------------------
# function classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroRecord:
    location: complex
    multiplicity: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")


class ExpPolyFunction:
    """``scale * prod (z - root)^mult * exp(p(z))``; vanishes only at the roots."""

    __slots__ = ("scale", "roots", "exp_coeffs", "_exact")

    def __init__(self, scale=1, roots=(), exp_coeffs=()):
        exact_scale = _as_exact(scale)
        exact_roots = []
        exact_exp = []
        norm_roots = []
        for loc, mult in roots:
            mult = int(mult)
            if mult < 1:
                raise ValueError("root multiplicity must be >= 1")
            e = _as_exact(loc)
            exact_roots.append((e, mult))
            norm_roots.append((complex(loc), mult))
        coeffs = _poly_trim([complex(c) for c in exp_coeffs])
        for c in exp_coeffs:
            exact_exp.append(_as_exact(c))
        exact_exp = exact_exp[: len(coeffs)]
        self.scale = complex(scale)
        self.roots = tuple(norm_roots)
        self.exp_coeffs = coeffs
        if (
            exact_scale is not None
            and all(e is not None for e, _ in exact_roots)
            and all(e is not None for e in exact_exp)
        ):
            self._exact = (
                exact_scale,
                tuple((e, m) for e, m in exact_roots),
                tuple(exact_exp),
            )
        else:
            self._exact = None

    @property
    def is_identically_zero(self):
        return self.scale == 0

    @property
    def is_exact(self):
        return self._exact is not None

    def degree_like(self):
        return sum(m for _, m in self.roots)

    def __mul__(self, other: "ExpPolyFunction") -> "ExpPolyFunction":
        roots: dict = {}
        for loc, m in self.roots + other.roots:
            roots[loc] = roots.get(loc, 0) + m
        n = max(len(self.exp_coeffs), len(other.exp_coeffs))
        pa = list(self.exp_coeffs) + [0] * (n - len(self.exp_coeffs))
        pb = list(other.exp_coeffs) + [0] * (n - len(other.exp_coeffs))
        merged = ExpPolyFunction(
            self.scale * other.scale,
            tuple(roots.items()),
            tuple(a + b for a, b in zip(pa, pb)),
        )
        if self._exact and other._exact:
            sa, ra, ea = self._exact
            sb, rb, eb = other._exact
            eroots: dict = {}
            for loc, m in ra + rb:
                eroots[loc] = eroots.get(loc, 0) + m
            ea = list(ea) + [QI(0)] * (n - len(ea))
            eb = list(eb) + [QI(0)] * (n - len(eb))
            merged._exact = (
                sa * sb,
                tuple(sorted(eroots.items(), key=lambda kv: str(kv[0]))),
                tuple(a + b for a, b in zip(ea, eb)),
            )
        return merged

    def __pow__(self, k: int) -> "ExpPolyFunction":
        if k < 0:
            raise ValueError("negative powers leave the entire class")
        if k == 0:
            return ExpPolyFunction(1)
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def __add__(self, other) -> "ExpPolySum":
        if isinstance(other, ExpPolyFunction):
            other = other.as_sum()
        return self.as_sum() + other

    def __sub__(self, other) -> "ExpPolySum":
        if isinstance(other, ExpPolyFunction):
            other = other.as_sum()
        return self.as_sum() + other * (-1.0)

    def log_eval(self, z) -> complex:
        """``log|f(z)| + i arg f(z)`` (real part -inf at a root)."""
        z = complex(z)
        if self.scale == 0:
            return complex(NEG_INF, 0.0)
        mag = math.log(abs(self.scale))
        phase = cmath.phase(self.scale)
        for loc, m in self.roots:
            d = z - loc
            if d == 0:
                return complex(NEG_INF, 0.0)
            mag += m * math.log(abs(d))
            phase += m * cmath.phase(d)
        if self.exp_coeffs:
            p = complex(np.polynomial.polynomial.polyval(z, np.array(self.exp_coeffs)))
            mag += p.real
            phase += p.imag
        return complex(mag, phase)

    def log_eval_batch(self, zs):
        zs = np.asarray(zs, dtype=complex)
        if self.scale == 0:
            out = np.full(zs.shape, complex(NEG_INF, 0.0), dtype=complex)
            return out, np.full(zs.shape, NEG_INF)
        mag = np.full(zs.shape, math.log(abs(self.scale)))
        phase = np.full(zs.shape, cmath.phase(self.scale))
        for loc, m in self.roots:
            d = zs - loc
            with np.errstate(divide="ignore"):
                mag = mag + m * np.log(np.abs(d))
            phase = phase + m * np.angle(d)
        if self.exp_coeffs:
            p = _poly_eval_batch(self.exp_coeffs, zs)
            mag = mag + p.real
            phase = phase + p.imag
        return mag + 1j * phase, mag

    def value(self, z) -> complex:
        lv = self.log_eval(z)
        if lv.real == NEG_INF:
            return 0j
        return cmath.exp(lv)

    def as_sum(self) -> "ExpPolySum":
        coeffs = np.array([self.scale], dtype=complex)
        for loc, m in self.roots:
            factor = np.array([-loc, 1.0], dtype=complex)
            for _ in range(m):
                coeffs = np.convolve(coeffs, factor)
        exact = None
        if self._exact:
            sc, roots, expc = self._exact
            ec = [sc]
            for loc, m in roots:
                for _ in range(m):
                    ec = _qi_mul(ec, [-loc, QI(1)])
            exact = ec
        return ExpPolySum([_Group(tuple(coeffs), self.exp_coeffs, exact)])

    def zeros_in_disc(self, center, radius):
        return [
            ZeroRecord(loc, m)
            for loc, m in self.roots
            if abs(loc - complex(center)) < radius
        ]

    def to_json_dict(self):
        return {
            "scale": _num_json(self.scale),
            "roots": [
                {"re": loc.real, "im": loc.imag, "mult": m} for loc, m in self.roots
            ],
            "exp_poly": [_num_json(c) for c in self.exp_coeffs],
        }

    @classmethod
    def from_json_dict(cls, data):
        scale = _num_parse(data.get("scale", 1))
        roots = [
            (_num_parse({"re": r.get("re", 0), "im": r.get("im", 0)}), int(r["mult"]))
            for r in data.get("roots", [])
        ]
        exp_coeffs = [_num_parse(c) for c in data.get("exp_poly", [])]
        return cls(scale, roots, exp_coeffs)

    def __repr__(self):
        return (
            f"ExpPolyFunction(scale={self.scale!r}, roots={self.roots!r}, "
            f"exp_coeffs={self.exp_coeffs!r})"
        )


def _num_json(c):
    c = complex(c)
    if c.imag == 0:
        return c.real
    return {"re": c.real, "im": c.imag}


def _num_parse(v):
    if isinstance(v, dict):
        re_v, im_v = v.get("re", 0), v.get("im", 0)
        if isinstance(re_v, int) and isinstance(im_v, int):
            return QI(re_v, im_v)
        return complex(re_v, im_v)
    if isinstance(v, (int, Fraction, QI)):
        return v
    return complex(v)


class _Group:
    """One ``A(z) * exp(p(z))`` summand of an ExpPolySum."""

    __slots__ = ("coeffs", "exp", "exact")

    def __init__(self, coeffs, exp, exact=None):
        self.coeffs = _poly_trim(tuple(complex(c) for c in coeffs))
        self.exp = _poly_trim(tuple(complex(c) for c in exp))
        if exact is not None:
            exact = _qi_trim(list(exact))
            if len(exact) != len(self.coeffs):
                exact = None
        self.exact = tuple(exact) if exact else None


class ExpPolySum:
    """Finite sum ``sum_b A_b(z) exp(p_b(z))`` with distinct exponent polynomials."""

    __slots__ = ("groups",)

    def __init__(self, groups):
        merged: dict = {}
        for g in groups:
            if not g.coeffs:
                continue
            key = g.exp
            if key in merged:
                prev = merged[key]
                n = max(len(prev.coeffs), len(g.coeffs))
                pa = list(prev.coeffs) + [0] * (n - len(prev.coeffs))
                pb = list(g.coeffs) + [0] * (n - len(g.coeffs))
                exact = None
                if prev.exact and g.exact:
                    ea = list(prev.exact) + [QI(0)] * (n - len(prev.exact))
                    eb = list(g.exact) + [QI(0)] * (n - len(g.exact))
                    exact = [a + b for a, b in zip(ea, eb)]
                merged[key] = _Group(
                    tuple(a + b for a, b in zip(pa, pb)), key, exact
                )
            else:
                merged[key] = g
        self.groups = tuple(
            g for g in (merged[k] for k in sorted(merged, key=_exp_sort_key)) if g.coeffs
        )

    @property
    def is_identically_zero(self):
        return not self.groups

    @property
    def is_polynomial(self):
        return len(self.groups) == 1 and not self.groups[0].exp

    @property
    def is_single_group(self):
        return len(self.groups) == 1

    def polynomial_coeffs(self):
        if not self.is_single_group:
            raise ValueError("not a single exponential group")
        return self.groups[0].coeffs

    def __add__(self, other):
        if isinstance(other, ExpPolyFunction):
            other = other.as_sum()
        return ExpPolySum(list(self.groups) + list(other.groups))

    def __mul__(self, other):
        if isinstance(other, ExpPolyFunction):
            other = other.as_sum()
        if isinstance(other, ExpPolySum):
            out = []
            for ga in self.groups:
                for gb in other.groups:
                    n = max(len(ga.exp), len(gb.exp))
                    ea = list(ga.exp) + [0] * (n - len(ga.exp))
                    eb = list(gb.exp) + [0] * (n - len(gb.exp))
                    exp = tuple(a + b for a, b in zip(ea, eb))
                    coeffs = np.convolve(
                        np.array(ga.coeffs, dtype=complex),
                        np.array(gb.coeffs, dtype=complex),
                    )
                    exact = None
                    if ga.exact and gb.exact:
                        exact = _qi_mul(list(ga.exact), list(gb.exact))
                    out.append(_Group(tuple(coeffs), exp, exact))
            return ExpPolySum(out)
        # scalar
        return ExpPolySum(
            [
                _Group(
                    tuple(c * other for c in g.coeffs),
                    g.exp,
                    [e * QI.coerce(other) for e in g.exact]
                    if (g.exact and _as_exact(other) is not None)
                    else None,
                )
                for g in self.groups
            ]
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = ExpPolySum([_Group((1.0,), (), [QI(1)])])
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "ExpPolySum":
        out = []
        for g in self.groups:
            da = _poly_derivative(g.coeffs)
            dp = _poly_derivative(g.exp)
            if da:
                out.append(_Group(da, g.exp))
            if dp:
                prod = np.convolve(
                    np.array(g.coeffs, dtype=complex), np.array(dp, dtype=complex)
                )
                out.append(_Group(tuple(prod), g.exp))
        return ExpPolySum(out)

    def log_eval_batch(self, zs):
        """Returns (log|f| + i arg f, log local-scale); -inf magnitudes at zeros."""
        zs = np.asarray(zs, dtype=complex)
        if not self.groups:
            flat = np.full(zs.shape, complex(NEG_INF, 0.0))
            return flat, np.full(zs.shape, NEG_INF)
        mags = []
        phases = []
        for g in self.groups:
            a = _poly_eval_batch(g.coeffs, zs)
            p = _poly_eval_batch(g.exp, zs) if g.exp else np.zeros_like(zs)
            with np.errstate(divide="ignore"):
                mag = np.log(np.abs(a)) + p.real
            mags.append(mag)
            phases.append(np.angle(a) + p.imag)
        mags = np.array(mags)
        phases = np.array(phases)
        top = np.max(mags, axis=0)
        safe_top = np.where(np.isfinite(top), top, 0.0)
        s = np.sum(np.exp(mags - safe_top[None, :] + 1j * phases), axis=0)
        with np.errstate(divide="ignore"):
            out_mag = np.where(
                np.isfinite(top), safe_top + np.log(np.abs(s)), NEG_INF
            )
        return out_mag + 1j * np.angle(s), top

    def log_eval(self, z) -> complex:
        v, _ = self.log_eval_batch(np.array([complex(z)]))
        return complex(v[0])

    def value(self, z) -> complex:
        lv = self.log_eval(z)
        if lv.real == NEG_INF:
            return 0j
        return cmath.exp(lv)

    def __repr__(self):
        return f"ExpPolySum({len(self.groups)} groups)"


def _exp_sort_key(exp_tuple):
    return tuple((c.real, c.imag) for c in exp_tuple)


# ---------------------------------------------------------------------------
# pullback of a homogeneous form along a component tuple
# ---------------------------------------------------------------------------


def pullback(poly: HomogeneousPolynomial, components):
    """``Q(f_0, ..., f_n)`` as an ExpPolyFunction (monomial Q) or ExpPolySum."""
    components = list(components)
    if poly.num_vars != len(components):
        raise DimensionMismatchError(
            f"form in {poly.num_vars} variables vs {len(components)} components"
        )
    if poly.is_zero:
        return ExpPolySum([])
    items = poly.items()
    all_plain = all(isinstance(c, ExpPolyFunction) for c in components)
    if len(items) == 1 and all_plain:
        exps, coeff = items[0]
        out = ExpPolyFunction(coeff if _is_exact(coeff) else complex(coeff))
        for comp, e in zip(components, exps):
            if e:
                out = out * comp**e
        return out
    total = ExpPolySum([])
    for exps, coeff in items:
        term = ExpPolySum([_Group((1.0,), (), [QI(1)])])
        for comp, e in zip(components, exps):
            if not e:
                continue
            factor = comp.as_sum() if isinstance(comp, ExpPolyFunction) else comp
            term = term * factor**e
        scalar = coeff if _is_exact(coeff) else complex(coeff)
        total = total + term * scalar
    return total


# ---------------------------------------------------------------------------
# winding numbers
# ---------------------------------------------------------------------------


def _log_samples(fn, zs):
    """(log-magnitudes, phases, cancellation-or-scale flags ok) for samples."""
    if hasattr(fn, "log_eval_batch"):
        vals, scales = fn.log_eval_batch(zs)
        mags = vals.real
        phases = vals.imag
        depth = mags - scales
        ok = np.isfinite(mags) & (depth > CANCEL_LOG_FLOOR)
        return mags, phases, ok
    vals = np.array([complex(fn(z)) for z in zs])
    finite = np.isfinite(vals.real) & np.isfinite(vals.imag) & (vals != 0)
    with np.errstate(divide="ignore"):
        mags = np.where(finite, np.log(np.abs(np.where(vals == 0, 1, vals))), NEG_INF)
    phases = np.angle(np.where(vals == 0, 1, vals))
    return mags, phases, finite


def _phase_sample_floor(fn, path_fn, path_length):
    """Anti-aliasing minimum sample count from the exponent-poly derivative.

    Phase along the path moves by at most |p'| * ds from the exponential part
    plus a bounded amount per coefficient-polynomial root; both are estimated
    from closed-form data, so the unwrap step size can be certified small.
    """
    probe = path_fn(np.arange(32) / 32)
    deg_bound = 0
    dp_max = 0.0
    if isinstance(fn, ExpPolySum):
        for g in fn.groups:
            deg_bound = max(deg_bound, len(g.coeffs) - 1)
            dp = _poly_derivative(g.exp)
            if dp:
                dp_max = max(dp_max, float(np.max(np.abs(_poly_eval_batch(dp, probe)))))
    elif isinstance(fn, ExpPolyFunction):
        deg_bound = sum(m for _, m in fn.roots)
        dp = _poly_derivative(fn.exp_coeffs)
        if dp:
            dp_max = max(dp_max, float(np.max(np.abs(_poly_eval_batch(dp, probe)))))
    else:
        return 0
    return int(1.5 * path_length * dp_max) + 16 * (deg_bound + 1)


def _winding_on_closed_path(fn, path_fn, start_samples, max_samples, path_length=None):
    """Adaptive phase-unwrap winding along a closed path ``path_fn(t), t in [0,1)``."""
    n = start_samples
    if path_length is not None:
        floor = _phase_sample_floor(fn, path_fn, path_length)
        while n < floor:
            n *= 2
    max_samples = max(max_samples, n)
    prev = None
    while n <= max_samples:
        ts = np.arange(n) / n
        zs = path_fn(ts)
        mags, phases, ok = _log_samples(fn, zs)
        if not np.all(ok):
            raise ZeroOnContourError(
                f"magnitude floor hit at {int(np.sum(~ok))}/{n} contour samples"
            )
        closed = np.concatenate([phases, phases[:1]])
        unwrapped = np.unwrap(closed)
        steps = np.abs(np.diff(unwrapped))
        total = unwrapped[-1] - unwrapped[0]
        w = total / (2 * math.pi)
        w_int = int(round(w))
        stable = abs(w - w_int) < 0.25 and np.max(steps) < 0.9 * math.pi
        if stable and prev == w_int:
            return w_int
        prev = w_int if stable else None
        n *= 2
    raise ZeroOnContourError(
        f"winding did not stabilize within {max_samples} samples "
        "(zero on or very near the contour?)"
    )


def winding_number(
    fn,
    center,
    radius,
    samples: int = WINDING_START_SAMPLES,
    max_samples: int = WINDING_MAX_SAMPLES,
) -> int:
    """Argument-principle winding of ``fn`` along a circle, by phase unwrapping.

    Sample counts double until two successive counts agree.  Raises
    :class:`ZeroOnContourError` when the magnitude floor is hit; the caller
    is expected to perturb the radius (see :data:`JITTER_FACTORS`).
    """
    if samples < 4 or samples & (samples - 1):
        raise ValueError("samples must be a power of 2 (>= 4)")
    center = complex(center)

    def path(ts):
        return center + radius * np.exp(2j * np.pi * ts)

    return _winding_on_closed_path(
        fn, path, samples, max_samples, path_length=2 * math.pi * radius
    )


def winding_number_jittered(fn, center, radius, samples=WINDING_START_SAMPLES):
    """Winding with the deterministic radius-jitter retry sequence."""
    try:
        return winding_number(fn, center, radius, samples), radius
    except ZeroOnContourError:
        pass
    for factor in JITTER_FACTORS:
        try:
            r = radius * factor
            return winding_number(fn, center, r, samples), r
        except ZeroOnContourError:
            continue
    raise RetryExhaustedError(
        f"zero-on-contour persisted through {len(JITTER_FACTORS)} jittered radii",
        attempts=JITTER_FACTORS,
    )


def _winding_rectangle(fn, x0, y0, x1, y1, start_samples=64, max_samples=1 << 15):
    corners = np.array(
        [x0 + 1j * y0, x1 + 1j * y0, x1 + 1j * y1, x0 + 1j * y1], dtype=complex
    )

    def path(ts):
        ts = np.asarray(ts)
        seg = np.minimum((ts * 4).astype(int), 3)
        frac = ts * 4 - seg
        a = corners[seg]
        b = corners[(seg + 1) % 4]
        return a + (b - a) * frac

    perimeter = 2.0 * ((x1 - x0) + (y1 - y0))
    return _winding_on_closed_path(
        fn, path, start_samples, max_samples, path_length=perimeter
    )


# ---------------------------------------------------------------------------
# zero location
# ---------------------------------------------------------------------------


def _newton_polish(fn, dfn, z0, tol, max_iter=60):
    z = complex(z0)
    for _ in range(max_iter):
        fv = fn.log_eval(z)
        if fv.real == NEG_INF:
            return z, 0.0
        dv = dfn.log_eval(z)
        if dv.real == NEG_INF or not math.isfinite(dv.real):
            return None, None
        step = cmath.exp(fv - dv)
        z -= step
        if abs(step) < 0.25 * tol:
            return z, abs(step)
    return None, None


def _poly_zeros(sum_fn: ExpPolySum, center, radius, tol):
    """Roots of the single coefficient polynomial of a one-group sum."""
    coeffs = sum_fn.groups[0].coeffs
    exact = sum_fn.groups[0].exact
    records = []
    if exact is not None:
        for factor, mult in exact_square_free_decomposition(list(exact)):
            fc = np.array([complex(c) for c in factor])
            for root in aberth_roots(fc):
                records.append((complex(root), mult))
    else:
        roots = sorted(aberth_roots(coeffs), key=lambda z: (z.real, z.imag))
        clusters: list[list[complex]] = []
        for root in roots:
            for cl in clusters:
                if abs(root - cl[0]) < max(tol, 1e-8):
                    cl.append(root)
                    break
            else:
                clusters.append([complex(root)])
        records = [(sum(cl) / len(cl), len(cl)) for cl in clusters]
    center = complex(center)
    return [
        ZeroRecord(loc, mult) for loc, mult in records if abs(loc - center) < radius
    ]


def zeros_in_disc(fn, center, radius, tol=DEFAULT_ZERO_TOL, max_jitter=20):
    """All zeros of ``fn`` in the open disc, with tol-resolution multiplicities.

    Explicitly factored functions read their root list; single-group sums go
    through the simultaneous-iteration solver (exact square-free multiplicities
    when the coefficients are Gaussian-rational); everything else by recursive
    4-way subdivision driven by boundary windings, with a deterministic jitter
    of the subdivision frame when a zero lands on a cell contour.
    """
    center = complex(center)
    if isinstance(fn, ExpPolyFunction):
        if fn.is_identically_zero:
            raise CurveInsideDivisorError("function is identically zero")
        return sorted(
            fn.zeros_in_disc(center, radius), key=lambda r: abs(r.location)
        )
    if isinstance(fn, ExpPolySum):
        if fn.is_identically_zero:
            raise CurveInsideDivisorError("function is identically zero")
        if fn.is_single_group:
            recs = _poly_zeros(fn, center, radius, tol)
            return sorted(recs, key=lambda r: abs(r.location))
    dfn = fn.derivative() if hasattr(fn, "derivative") else None

    # frame offset keeps dyadic cut lines off axis-aligned zero sets
    base_shift = radius * (0.0137937 + 0.0083059j)
    jitter_step = radius * (0.0052911 - 0.0031847j)
    last_error = None
    for k in range(max_jitter + 1):
        shift = base_shift + k * jitter_step
        half = radius * (1.0 + 0.005 * k) + abs(shift)
        try:
            records = _subdivide_collect(fn, dfn, center + shift, half, tol)
        except ZeroOnContourError as exc:
            last_error = exc
            continue
        out = [r for r in records if abs(r.location - center) < radius]
        return sorted(out, key=lambda r: (abs(r.location), r.location.real))
    raise RetryExhaustedError(
        f"subdivision jitter exhausted after {max_jitter} retries: {last_error}"
    )


def _subdivide_collect(fn, dfn, center, half, tol):
    x0, y0 = center.real - half, center.imag - half
    stack = [(x0, y0, 2 * half)]
    records = []
    while stack:
        cx0, cy0, size = stack.pop()
        w = _winding_rectangle(fn, cx0, cy0, cx0 + size, cy0 + size)
        if w == 0:
            continue
        mid = complex(cx0 + size / 2, cy0 + size / 2)
        if size < tol:
            records.append(ZeroRecord(mid, w))
            continue
        if w == 1 and dfn is not None and size < 0.5:
            z, _ = _newton_polish(fn, dfn, mid, tol)
            margin = 1e-3 * size
            if (
                z is not None
                and cx0 - margin <= z.real <= cx0 + size + margin
                and cy0 - margin <= z.imag <= cy0 + size + margin
            ):
                records.append(ZeroRecord(z, 1))
                continue
        h = size / 2
        for dx in (0.0, h):
            for dy in (0.0, h):
                stack.append((cx0 + dx, cy0 + dy, h))
    return records


# ---------------------------------------------------------------------------
# projective curves
# ---------------------------------------------------------------------------


class ProjectiveCurve:
    """Reduced component tuple ``[f_0 : ... : f_n]`` with no common zeros."""

    __slots__ = ("components",)

    COMMON_ZERO_TOL = 1e-10

    def __init__(self, components, validate=True):
        components = tuple(components)
        if len(components) < 2:
            raise DimensionMismatchError("need at least two components")
        if all(getattr(c, "is_identically_zero", False) for c in components):
            raise ValueError("all components identically zero")
        if validate:
            for i, comp in enumerate(components):
                if not isinstance(comp, ExpPolyFunction):
                    continue
                for loc, _ in comp.roots:
                    others = [
                        c.log_eval(loc).real
                        for j, c in enumerate(components)
                        if j != i
                    ]
                    if max(others) < math.log(self.COMMON_ZERO_TOL):
                        raise ValueError(
                            f"components share a zero near {loc} (not a reduced "
                            "representation)"
                        )
        self.components = components

    @property
    def ambient_dim(self):
        return len(self.components) - 1

    def log_norm(self, z) -> float:
        """``log || (f_0(z), ..., f_n(z)) ||`` via max-component factoring."""
        return float(self.log_norm_batch(np.array([complex(z)]))[0])

    def log_norm_batch(self, zs):
        zs = np.asarray(zs, dtype=complex)
        mags = np.array([c.log_eval_batch(zs)[0].real for c in self.components])
        top = np.max(mags, axis=0)
        rel = np.exp(2.0 * (mags - top[None, :]))
        return top + 0.5 * np.log(np.sum(rel, axis=0))

    def to_json_dict(self):
        return {"components": [c.to_json_dict() for c in self.components]}

    @classmethod
    def from_json_dict(cls, data):
        comps = [ExpPolyFunction.from_json_dict(c) for c in data["components"]]
        return cls(comps)


def curve_log_norm(curve, z) -> float:
    return curve.log_norm(z)


def eval_log_scale(fn: ExpPolyFunction, z):
    """(log magnitude, phase) of an exponential-polynomial function."""
    v = fn.log_eval(z)
    return v.real, v.imag

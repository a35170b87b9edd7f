"""Plane-exhaustion Nevanlinna functionals and their finite-radius checks.

The order function is computed in Cartan form (circle mean of the curve log
norm minus its base-point value), which agrees with the area-integral form up
to an additive constant that is carried, not removed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import (
    JITTER_FACTORS,
    NEG_INF,
    CANCEL_LOG_FLOOR,
    pullback,
    zeros_in_disc,
)
from .errors import (
    CurveInsideDivisorError,
    CurveTooSmallError,
    GeneralPositionError,
    QuadratureBudgetError,
)

INF = math.inf

# deterministic base-point candidates (used when a component vanishes at 0)
BASE_POINT_CANDIDATES = (
    0j,
    0.3711 + 0.2417j,
    -0.2913 + 0.4102j,
    0.1811 - 0.3307j,
    -0.4203 - 0.1609j,
    0.0917 + 0.4511j,
)


@dataclass(frozen=True)
class QuadratureBudget:
    """Sampling budgets shared by the 1-D circle means and zero search."""

    circle_tol: float = 1e-9
    circle_start: int = 512
    circle_max: int = 1 << 16
    zero_tol: float = 1e-9
    winding_samples: int = 1 << 10

    @classmethod
    def preset(cls, name: str) -> "QuadratureBudget":
        if name == "low":
            return cls(circle_tol=1e-6, circle_start=256, circle_max=1 << 13,
                       zero_tol=1e-7)
        if name == "default":
            return cls()
        if name == "high":
            return cls(circle_tol=1e-11, circle_start=1024, circle_max=1 << 18,
                       zero_tol=1e-11)
        raise ValueError(f"unknown budget preset {name!r}")


DEFAULT_BUDGET = QuadratureBudget()


@dataclass(frozen=True)
class RadialGrid:
    """Strictly increasing evaluation radii, all > 1."""

    radii: tuple

    def __post_init__(self):
        rs = tuple(float(r) for r in self.radii)
        if not rs:
            raise ValueError("empty grid")
        if rs[0] <= 1.0:
            raise ValueError("grid radii must exceed 1")
        if any(b <= a for a, b in zip(rs, rs[1:])):
            raise ValueError("grid radii must be strictly increasing")
        object.__setattr__(self, "radii", rs)

    @classmethod
    def log_grid(cls, r0: float, r1: float, steps: int) -> "RadialGrid":
        if steps < 1:
            raise ValueError("need at least one step")
        if steps == 1:
            return cls((r0,))
        return cls(tuple(np.geomspace(r0, r1, steps)))

    @property
    def r_max(self) -> float:
        return self.radii[-1]

    def tail(self, fraction: float = 0.5) -> tuple:
        cut = int(math.floor(len(self.radii) * (1.0 - fraction)))
        return self.radii[cut:]

    def head(self, fraction: float = 0.25) -> tuple:
        cut = max(1, int(math.ceil(len(self.radii) * fraction)))
        return self.radii[:cut]

    def __iter__(self):
        return iter(self.radii)

    def __len__(self):
        return len(self.radii)


@dataclass
class FunctionalRow:
    """One radius row of the functional table."""

    r: float
    T: float
    N_full: float
    N_trunc: dict
    m: float
    fmt_residual: float

    def __post_init__(self):
        levels = sorted(self.N_trunc, key=lambda k: (k is INF, k))
        values = [self.N_trunc[k] for k in levels]
        if any(b < a - 1e-9 for a, b in zip(values, values[1:])):
            raise ValueError("truncated counting functions must be monotone in k")
        if any(v < -1e-9 for v in values) or self.N_full < -1e-9:
            raise ValueError("counting functions must be nonnegative")


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


def circle_mean(sample_fn, r, budget=DEFAULT_BUDGET):
    """Mean of ``sample_fn`` over the circle |z| = r by doubling trapezoids."""
    n = budget.circle_start
    prev = None
    history = []
    while n <= budget.circle_max:
        theta = 2.0 * np.pi * np.arange(n) / n
        vals = sample_fn(r * np.exp(1j * theta))
        if not np.all(np.isfinite(vals)):
            raise ZeroDivisionError("non-finite circle samples")
        est = float(np.mean(vals))
        history.append(est)
        if prev is not None and abs(est - prev) < budget.circle_tol * max(
            1.0, abs(est)
        ):
            return est
        prev = est
        n *= 2
    raise QuadratureBudgetError(
        f"circle mean did not converge within {budget.circle_max} samples",
        last_iterates=tuple(history[-2:]),
    )


# ---------------------------------------------------------------------------
# order function
# ---------------------------------------------------------------------------


def default_base_point(curve) -> complex:
    """0, unless the log norm degenerates there; then the first clean candidate.

    A reduced component tuple never has all components vanishing at once, so
    the substitution only triggers for numerically degenerate inputs.
    """
    for cand in BASE_POINT_CANDIDATES:
        if math.isfinite(curve.log_norm(cand)):
            return cand
    raise ValueError("no clean base point among the candidates")


def order_function(curve, r, budget=DEFAULT_BUDGET, base_point=None) -> float:
    """Cartan order function: circle mean of the log norm minus its base value."""
    if r <= 1.0:
        raise ValueError("order function needs r > 1")
    if base_point is None:
        base_point = default_base_point(curve)
    mean = circle_mean(curve.log_norm_batch, r, budget)
    return mean - curve.log_norm(base_point)


# ---------------------------------------------------------------------------
# counting functions
# ---------------------------------------------------------------------------


def divisor_pullback(curve, hyp):
    """``Q o f`` for the defining form of the hypersurface; error if identically 0."""
    pb = pullback(hyp.poly, curve.components)
    if getattr(pb, "is_identically_zero", False):
        raise CurveInsideDivisorError("curve maps into the divisor")
    return pb


def divisor_zeros(curve, hyp, radius, budget=DEFAULT_BUDGET):
    """Zero records of the divisor pullback inside |z| < radius."""
    pb = divisor_pullback(curve, hyp)
    return zeros_in_disc(pb, 0.0, radius, tol=budget.zero_tol)


def counting_from_zeros(zeros, r, level=INF) -> float:
    total = 0.0
    for rec in zeros:
        a = abs(rec.location)
        if a >= r:
            continue
        mult = rec.multiplicity if level is INF else min(level, rec.multiplicity)
        total += mult * math.log(r / max(a, 1.0))
    return total


def counting_function(curve, hyp, r, level=INF, zeros=None, budget=DEFAULT_BUDGET):
    """``N^{[k]}(r, D)``: exact log-average of truncated zero counts from t=1."""
    if r <= 1.0:
        raise ValueError("counting function needs r > 1")
    if zeros is None:
        zeros = divisor_zeros(curve, hyp, r, budget)
    return counting_from_zeros(zeros, r, level)


# ---------------------------------------------------------------------------
# proximity
# ---------------------------------------------------------------------------


def proximity_function(curve, hyp, r, budget=DEFAULT_BUDGET, _pb=None) -> float:
    """Circle mean of ``deg * log||f|| - log|Q^(f)|`` with max-coefficient-normalized Q.

    The circle is jittered through the deterministic factor sequence when a
    zero of the pullback sits on (or cancels catastrophically near) it.
    """
    if r <= 1.0:
        raise ValueError("proximity function needs r > 1")
    pb = _pb if _pb is not None else divisor_pullback(curve, hyp)
    log_scale = math.log(hyp.poly.coeff_scale())
    deg = hyp.degree

    def sample(zs):
        u = curve.log_norm_batch(zs)
        vals, scales = pb.log_eval_batch(zs)
        mags = vals.real
        bad = ~np.isfinite(mags) | (mags - scales < CANCEL_LOG_FLOOR)
        if np.any(bad):
            raise ZeroDivisionError("pullback zero on the proximity circle")
        return deg * u - (mags - log_scale)

    radii = [r] + [r * f for f in JITTER_FACTORS]
    last = None
    for rr in radii:
        try:
            return circle_mean(sample, rr, budget)
        except ZeroDivisionError as exc:
            last = exc
            continue
    raise QuadratureBudgetError(f"proximity circle jitter exhausted: {last}")


# ---------------------------------------------------------------------------
# composite checks
# ---------------------------------------------------------------------------


def fmt_residual(curve, hyp, r, budget=DEFAULT_BUDGET, zeros=None) -> float:
    """``m + N - deg(D) * T``; bounded in r by the First Main Theorem."""
    T = order_function(curve, r, budget)
    N = counting_function(curve, hyp, r, INF, zeros=zeros, budget=budget)
    m = proximity_function(curve, hyp, r, budget)
    return m + N - hyp.degree * T


def functional_row(
    curve, hyp, r, levels=(1,), budget=DEFAULT_BUDGET, zeros=None
) -> FunctionalRow:
    if zeros is None:
        zeros = divisor_zeros(curve, hyp, r, budget)
    T = order_function(curve, r, budget)
    N_full = counting_from_zeros(zeros, r, INF)
    N_trunc = {k: counting_from_zeros(zeros, r, k) for k in levels}
    N_trunc[INF] = N_full
    m = proximity_function(curve, hyp, r, budget)
    return FunctionalRow(
        r=r,
        T=T,
        N_full=N_full,
        N_trunc=N_trunc,
        m=m,
        fmt_residual=m + N_full - hyp.degree * T,
    )


@dataclass(frozen=True)
class DefectEstimate:
    value: float          # clamped to [0, 1]
    unclamped: float
    level: object
    window: tuple         # the tail radii the min was taken over

    def __float__(self):
        return self.value


def defect_estimate(
    curve,
    hyp,
    grid: RadialGrid,
    level=INF,
    budget=DEFAULT_BUDGET,
    tail_fraction=0.5,
    min_order=1e-3,
    zeros=None,
) -> DefectEstimate:
    """Finite-radius defect: min over the grid tail of ``1 - N^{[k]}/(deg T)``."""
    if zeros is None:
        zeros = divisor_zeros(curve, hyp, grid.r_max, budget)
    window = grid.tail(tail_fraction)
    values = []
    for r in window:
        T = order_function(curve, r, budget)
        if T < min_order:
            raise CurveTooSmallError(
                f"order function {T!r} below threshold {min_order} at r={r}"
            )
        N = counting_from_zeros(zeros, r, level)
        values.append(1.0 - N / (hyp.degree * T))
    unclamped = min(values)
    return DefectEstimate(
        value=min(1.0, max(0.0, unclamped)),
        unclamped=unclamped,
        level=level,
        window=window,
    )


def smt_margin(
    curve,
    hyps,
    r,
    mode="cartan",
    budget=DEFAULT_BUDGET,
    zeros_map=None,
    certificate=None,
) -> float:
    """Finite-radius margin RHS - LHS of a Second Main Theorem inequality.

    mode='cartan': RHS = sum_i N^{[n]}(r, H_i)/deg_i, LHS = (q-n-1) T(r).
    mode='ru':     RHS = sum_i N(r, D_i)/deg_i (no Euler term in the plane),
                   LHS = (q-n-1) T(r); requires q >= n+2.
    """
    from .endo import general_position

    q = len(hyps)
    n = curve.ambient_dim
    if mode not in ("cartan", "ru"):
        raise ValueError(f"unknown SMT mode {mode!r}")
    if mode == "ru" and q < n + 2:
        raise ValueError(f"ru mode needs q >= n+2 hypersurfaces, got q={q}, n={n}")
    if certificate is None:
        certificate = general_position(hyps)
    if not certificate.verdict:
        raise GeneralPositionError(
            "hypersurface family is not in general position", certificate
        )
    level = n if mode == "cartan" else INF
    T = order_function(curve, r, budget)
    rhs = 0.0
    for i, hyp in enumerate(hyps):
        zeros = None if zeros_map is None else zeros_map.get(i)
        N = counting_function(curve, hyp, r, level, zeros=zeros, budget=budget)
        rhs += N / hyp.degree
    return rhs - (q - n - 1) * T

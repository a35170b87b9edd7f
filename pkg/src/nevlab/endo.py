"""Endomorphism of projective space, its critical hypersurface, and the image locus.

Builds ``F = [Q_1^{m_1} : ... : Q_{n+1}^{m_{n+1}}]`` from defining forms,
certifies general position by exact resultants, constructs generic families
from products of seeded linear forms, implicitizes the image of the critical
hypersurface by nullspace interpolation, and verifies the multiplicity jump
of pullback orders under composition.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analytic import pullback, winding_number_jittered
from .errors import (
    CommonZeroError,
    DegenerateFamilyError,
    DimensionMismatchError,
    ImplicitizationError,
    PointRejectedError,
    RetryExhaustedError,
)
from .polycore import (
    QI,
    HomogeneousPolynomial,
    Hypersurface,
    ResultantResult,
    is_square_free,
    jacobian_determinant,
    macaulay_resultant,
    monomials_of_degree,
    square_free_part,
    to_sympy,
    _gens,
)


@dataclass(frozen=True)
class Endomorphism:
    """``F = [Q_1^{m_1} : ... : Q_{n+1}^{m_{n+1}}]`` with ``m_i = d / d_i``."""

    forms: tuple
    degrees: tuple
    common_degree: int
    exponents: tuple
    powered_forms: tuple
    certificate: ResultantResult

    @property
    def num_vars(self):
        return self.forms[0].num_vars

    @property
    def ambient_dim(self):
        return self.num_vars - 1

    def apply(self, point, normalize=True):
        vals = np.array(
            [complex(p.evaluate(list(point))) for p in self.powered_forms]
        )
        if normalize:
            norm = np.linalg.norm(vals)
            if norm == 0:
                raise CommonZeroError("endomorphism undefined at a common zero")
            vals = vals / norm
        return vals


def build_endomorphism(forms) -> Endomorphism:
    """Construct the endomorphism; certifies the powered forms share no zero."""
    forms = tuple(forms)
    n_vars = len(forms)
    if any(p.num_vars != n_vars for p in forms):
        raise DimensionMismatchError("need n+1 forms in n+1 variables")
    if any(p.is_zero for p in forms):
        raise ValueError("endomorphism forms must be nonzero")
    degrees = tuple(p.degree for p in forms)
    if any(d < 1 for d in degrees):
        raise ValueError("endomorphism forms must have degree >= 1")
    d = math.lcm(*degrees)
    exponents = tuple(d // di for di in degrees)
    # powered and unpowered forms share their zero sets, so certify unpowered
    cert = macaulay_resultant(forms)
    if not cert.nonzero:
        raise CommonZeroError(
            "defining forms share a projective zero; the family is not in "
            "general position",
            witness=tuple(range(n_vars)),
        )
    powered = tuple(p**m for p, m in zip(forms, exponents))
    return Endomorphism(
        forms=forms,
        degrees=degrees,
        common_degree=d,
        exponents=exponents,
        powered_forms=powered,
        certificate=cert,
    )


@dataclass(frozen=True)
class CriticalLocus:
    vee: Hypersurface
    expected_degree: int
    raw_degree: int


def critical_locus(endo: Endomorphism) -> CriticalLocus:
    """Zero locus of the Jacobian determinant of the unpowered forms.

    The square-free part is taken in exact mode.  The all-hyperplanes case
    (constant determinant) is rejected.
    """
    expected = sum(endo.degrees) - endo.num_vars
    if expected < 1:
        raise DegenerateFamilyError(
            "all forms are hyperplanes; the critical determinant is constant"
        )
    det = jacobian_determinant(list(endo.forms))
    if det.is_zero:
        raise DegenerateFamilyError("identically zero Jacobian determinant")
    raw_degree = det.degree
    if det.mode == "exact":
        det = square_free_part(det)
    if det.degree < 1:
        raise DegenerateFamilyError("critical determinant reduced to a constant")
    return CriticalLocus(
        vee=Hypersurface(det, check_square_free=False),
        expected_degree=expected,
        raw_degree=raw_degree,
    )


# ---------------------------------------------------------------------------
# general position certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubsetVerdict:
    indices: tuple
    nonzero: bool
    result: ResultantResult

    @property
    def witness(self):
        if self.result.mode == "exact":
            return self.result.value
        return self.result.min_singular


@dataclass(frozen=True)
class GeneralPositionCertificate:
    entries: tuple
    verdict: bool

    def failing_subsets(self):
        return [e.indices for e in self.entries if not e.nonzero]

    def to_json_dict(self):
        rows = []
        for e in self.entries:
            witness = e.witness
            if isinstance(witness, QI):
                witness = {"re": str(witness.re), "im": str(witness.im)}
            rows.append(
                {
                    "subset": list(e.indices),
                    "verdict": bool(e.nonzero),
                    "witness": witness,
                    "mode": e.result.mode,
                }
            )
        return {"verdict": bool(self.verdict), "subsets": rows}


def general_position(hyps) -> GeneralPositionCertificate:
    """Certify every (n+1)-subset of the family has empty intersection."""
    hyps = list(hyps)
    if not hyps:
        raise ValueError("empty hypersurface family")
    n_vars = hyps[0].num_vars
    if any(h.num_vars != n_vars for h in hyps):
        raise DimensionMismatchError("hypersurfaces live in different spaces")
    if len(hyps) < n_vars:
        raise ValueError(f"need at least n+1 = {n_vars} hypersurfaces")
    entries = []
    for subset in itertools.combinations(range(len(hyps)), n_vars):
        res = macaulay_resultant([hyps[i].poly for i in subset])
        entries.append(SubsetVerdict(indices=subset, nonzero=res.nonzero, result=res))
    return GeneralPositionCertificate(
        entries=tuple(entries), verdict=all(e.nonzero for e in entries)
    )


# ---------------------------------------------------------------------------
# generic families from products of linear forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenericFamily:
    hypersurfaces: tuple
    vee: Hypersurface
    certificate: GeneralPositionCertificate
    seed: int
    attempts: int


def _random_linear_form(rng, n_vars):
    while True:
        coeffs = [rng.randint(-9, 9) for _ in range(n_vars)]
        if any(coeffs):
            return HomogeneousPolynomial.linear([QI(c) for c in coeffs])


def construct_generic_family(
    n: int, degrees, seed: int, max_attempts: int = 40
) -> GenericFamily:
    """Products of seeded random linear forms, retried until the full
    family-plus-critical-locus certificate passes."""
    degrees = tuple(int(d) for d in degrees)
    n_vars = n + 1
    if len(degrees) != n_vars:
        raise DimensionMismatchError(f"need n+1 = {n_vars} degrees")
    if sum(degrees) < n + 2:
        raise ValueError(
            f"total degree {sum(degrees)} below the n+2 = {n + 2} threshold"
        )
    attempts = []
    for attempt in range(max_attempts):
        rng = random.Random((seed, attempt))
        attempts.append(attempt)
        try:
            forms = []
            for d in degrees:
                factors = []
                while len(factors) < d:
                    cand = _random_linear_form(rng, n_vars)
                    if all(
                        not _parallel_linear(cand, other) for other in factors
                    ):
                        factors.append(cand)
                prod = factors[0]
                for f in factors[1:]:
                    prod = prod * f
                forms.append(prod)
            hyps = [Hypersurface(f) for f in forms]
            endo = build_endomorphism(forms)
            locus = critical_locus(endo)
            cert = general_position(hyps + [locus.vee])
        except (CommonZeroError, DegenerateFamilyError, Exception) as exc:
            if not isinstance(
                exc, (CommonZeroError, DegenerateFamilyError, ValueError)
            ):
                raise
            continue
        if cert.verdict:
            return GenericFamily(
                hypersurfaces=tuple(hyps),
                vee=locus.vee,
                certificate=cert,
                seed=seed,
                attempts=attempt + 1,
            )
    raise RetryExhaustedError(
        f"no generic family found for degrees {degrees} within "
        f"{max_attempts} attempts of seed {seed}",
        attempts=tuple(attempts),
    )


def _parallel_linear(a, b):
    va = np.array([complex(a.coeff(e)) for e in _unit_exps(a.num_vars)])
    vb = np.array([complex(b.coeff(e)) for e in _unit_exps(b.num_vars)])
    cross = np.abs(np.outer(va, vb) - np.outer(vb, va)).max()
    return cross < 1e-12 * (np.abs(va).max() * np.abs(vb).max() + 1e-30)


def _unit_exps(n_vars):
    return [tuple(1 if j == i else 0 for j in range(n_vars)) for i in range(n_vars)]


# ---------------------------------------------------------------------------
# sampling points on a hypersurface
# ---------------------------------------------------------------------------


def _newton_to_locus(poly_f, grads_f, point, steps=4):
    p = point.astype(complex)
    for _ in range(steps):
        val = complex(poly_f.evaluate(list(p)))
        grad = np.array([complex(g.evaluate(list(p))) for g in grads_f])
        g2 = np.vdot(grad, grad).real
        if g2 < 1e-30:
            break
        p = p - val * grad.conj() / g2
        p = p / np.linalg.norm(p)
    return p


def sample_locus(V: Hypersurface, count: int, seed: int, max_lines=None):
    """Simple points of {V = 0} from intersections with seeded random lines."""
    from .analytic import aberth_roots

    rng = np.random.default_rng(seed)
    n_vars = V.num_vars
    deg = V.degree
    poly_f = V.poly.to_float()
    grads = [poly_f.partial_derivative(j) for j in range(n_vars)]
    scale = poly_f.coeff_scale()
    points = []
    max_lines = max_lines or (4 * count // max(deg, 1) + 24)
    for _ in range(max_lines):
        if len(points) >= count:
            break
        a = rng.normal(size=n_vars) + 1j * rng.normal(size=n_vars)
        b = rng.normal(size=n_vars) + 1j * rng.normal(size=n_vars)
        # restrict V to the line a + t b by interpolation at deg+1 nodes
        ts = np.arange(deg + 1, dtype=float) - deg / 2.0
        vals = np.array(
            [complex(poly_f.evaluate(list(a + t * b))) for t in ts]
        )
        coeffs = np.linalg.solve(np.vander(ts, increasing=True), vals)
        if np.max(np.abs(coeffs)) < 1e-12 * scale:
            continue
        roots = aberth_roots(coeffs)
        for i, t in enumerate(roots):
            sep = min(
                (abs(t - s) for j, s in enumerate(roots) if j != i), default=1.0
            )
            if sep < 1e-6:
                continue  # multiple root: not a simple point of the section
            p = a + t * b
            norm = np.linalg.norm(p)
            if norm < 1e-12:
                continue
            p = _newton_to_locus(poly_f, grads, p / norm)
            if abs(complex(poly_f.evaluate(list(p)))) < 1e-10 * scale:
                points.append(p)
                if len(points) >= count:
                    break
    if len(points) < count:
        raise RetryExhaustedError(
            f"only {len(points)}/{count} simple points found on the locus"
        )
    return points[:count]


# ---------------------------------------------------------------------------
# implicitization of the image
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ImageLocus:
    dub: Hypersurface
    fit_residual: float
    degree_found: int
    exact_lifted: bool
    reduced_flag: bool


def _monomial_matrix(points, mons):
    rows = []
    for p in points:
        row = np.array([np.prod(np.power(p, mono)) for mono in mons])
        rows.append(row / np.linalg.norm(row))
    return np.array(rows)


def _try_exact_lift(endo, V, coeffs, mons, denominator_cap=10**6):
    """Rationalize the fitted form and certify W(F) = 0 mod V exactly."""
    import sympy

    if V.poly.mode != "exact" or any(p.mode != "exact" for p in endo.forms):
        return None
    top = np.argmax(np.abs(coeffs))
    scaled = coeffs / coeffs[top]
    if np.max(np.abs(scaled.imag)) > 1e-6:
        return None
    terms = {}
    for mono, c in zip(mons, scaled):
        if abs(c) < 1e-9:
            continue
        frac = Fraction(float(c.real)).limit_denominator(denominator_cap)
        if abs(float(frac) - c.real) > 1e-6:
            return None
        if frac:
            terms[mono] = QI(frac)
    if not terms:
        return None
    w_exact = HomogeneousPolynomial(endo.num_vars, terms)
    if w_exact.degree != sum(mons[0]):
        return None
    composed = compose_with_endomorphism(w_exact, endo)
    gens = _gens(endo.num_vars)
    quot, rem = sympy.div(to_sympy(composed), to_sympy(V.poly), *gens)
    if sympy.expand(rem) != 0:
        return None
    return w_exact


def compose_with_endomorphism(
    w: HomogeneousPolynomial, endo: Endomorphism
) -> HomogeneousPolynomial:
    """``W(Q_1^{m_1}, ..., Q_{n+1}^{m_{n+1}})`` by polynomial substitution."""
    powers: dict = {}

    def powered(i, k):
        if (i, k) not in powers:
            powers[(i, k)] = endo.powered_forms[i] ** k
        return powers[(i, k)]

    total = HomogeneousPolynomial.zero(endo.num_vars)
    for exps, coeff in w.items():
        term = None
        for i, e in enumerate(exps):
            if not e:
                continue
            factor = powered(i, e)
            term = factor if term is None else term * factor
        if term is None:
            term = HomogeneousPolynomial.monomial(
                endo.num_vars, (0,) * endo.num_vars, 1
            )
        term = term * coeff
        total = term if total.is_zero else total + term
    return total


def implicitize_image(
    endo: Endomorphism,
    V: Hypersurface,
    degree_cap: int,
    seed: int = 11,
    sv_gap: float = 1e-8,
    validation_tol: float = 1e-6,
) -> ImageLocus:
    """Interpolate the defining form of F(V) by nullspace fitting.

    Ascends candidate degrees, accepting the smallest with a one-dimensional
    numerical nullspace, then validates on a fresh sample batch and attempts
    an exact-rational lift certified by polynomial division.
    """
    if endo.ambient_dim != 2:
        raise DimensionMismatchError("image implicitization is desk-scale: n = 2 only")
    if degree_cap < 1:
        raise ValueError("degree_cap must be >= 1")
    n_mons_max = len(monomials_of_degree(endo.num_vars, degree_cap))
    n_samples = 2 * n_mons_max + 16
    points = sample_locus(V, n_samples, seed)
    images = [endo.apply(p) for p in points]
    fresh_points = sample_locus(V, n_samples // 2, seed + 90001)
    fresh_images = [endo.apply(p) for p in fresh_points]

    for e in range(1, degree_cap + 1):
        mons = monomials_of_degree(endo.num_vars, e)
        a = _monomial_matrix(images, mons)
        _, sv, vh = np.linalg.svd(a)
        if len(sv) < len(mons):
            continue
        small, second = sv[-1], sv[-2]
        if small < sv_gap * sv[0] and second > 1e-4 * sv[0]:
            coeffs = vh[-1].conj()
            w_exact = _try_exact_lift(endo, V, coeffs, mons)
            if w_exact is not None:
                reduced = is_square_free(w_exact)
                if not reduced:
                    w_exact = square_free_part(w_exact)
                w_hyp = Hypersurface(w_exact, check_square_free=False)
                exact = True
            else:
                top = np.max(np.abs(coeffs))
                terms = {
                    mono: complex(c / top)
                    for mono, c in zip(mons, coeffs)
                    if abs(c) > 1e-14 * top
                }
                w_hyp = Hypersurface(HomogeneousPolynomial(endo.num_vars, terms))
                exact = False
            w_float = w_hyp.poly.to_float().normalized()
            resid = max(
                abs(complex(w_float.evaluate(list(img)))) for img in fresh_images
            )
            if resid > validation_tol:
                continue  # spurious nullspace; keep ascending
            return ImageLocus(
                dub=w_hyp,
                fit_residual=float(resid),
                degree_found=w_hyp.degree,
                exact_lifted=exact,
                reduced_flag=exact or is_square_free_float_heuristic(w_float),
            )
    raise ImplicitizationError(
        f"no degree <= {degree_cap} admits a one-dimensional nullspace; "
        f"natural cap is deg(V) * d = {V.degree * endo.common_degree}",
        suggested_cap=V.degree * endo.common_degree,
    )


def is_square_free_float_heuristic(poly: HomogeneousPolynomial) -> bool:
    """Crude float-mode repeated-factor probe via the discriminant of a slice."""
    rng = np.random.default_rng(5)
    from .analytic import aberth_roots

    a = rng.normal(size=poly.num_vars) + 1j * rng.normal(size=poly.num_vars)
    b = rng.normal(size=poly.num_vars) + 1j * rng.normal(size=poly.num_vars)
    ts = np.arange(poly.degree + 1, dtype=float) - poly.degree / 2
    vals = np.array([complex(poly.evaluate(list(a + t * b))) for t in ts])
    coeffs = np.linalg.solve(np.vander(ts, increasing=True), vals)
    roots = aberth_roots(coeffs)
    for i, r in enumerate(roots):
        for s in roots[i + 1 :]:
            if abs(r - s) < 1e-6:
                return False
    return True


# ---------------------------------------------------------------------------
# exceptional locus and local multiplicities
# ---------------------------------------------------------------------------


def exceptional_locus_test(
    V: Hypersurface, hyps, W: Hypersurface, endo: Endomorphism, p, rtol=1e-6
) -> bool:
    """True when p lies in V cap Supp D, in Sing(V), or over Sing(W)."""
    p = np.asarray(p, dtype=complex)
    p = p / np.linalg.norm(p)
    for hyp in hyps:
        poly = hyp.poly.to_float()
        if abs(complex(poly.evaluate(list(p)))) < rtol * poly.coeff_scale():
            return True
    vf = V.poly.to_float()
    grad_v = np.array(
        [complex(g.evaluate(list(p))) for g in vf.gradient()]
    )
    if np.linalg.norm(grad_v) < rtol * vf.coeff_scale() * V.degree:
        return True
    q = endo.apply(p)
    wf = W.poly.to_float().normalized()
    grad_w = np.array([complex(g.evaluate(list(q))) for g in wf.gradient()])
    if np.linalg.norm(grad_w) < rtol * wf.coeff_scale() * W.degree:
        return True
    return False


def local_multiplicity(
    endo: Endomorphism,
    V: Hypersurface,
    W: Hypersurface,
    p,
    hyps=(),
    t_lo=1e-6,
    t_hi=1e-3,
    n_arc=10,
    residual_cap=0.1,
) -> int:
    """Vanishing order of W(F(.)) along a transverse arc through p on V.

    Fits ``log|W(F(p + t v))|`` and ``log|V(p + t v)|`` against ``log t`` and
    rounds the slope ratio; rejects ill-conditioned fits.
    """
    p = np.asarray(p, dtype=complex)
    p = p / np.linalg.norm(p)
    vf = V.poly.to_float()
    grads = [vf.partial_derivative(j) for j in range(vf.num_vars)]
    p = _newton_to_locus(vf, grads, p)
    if hyps or W is not None:
        if exceptional_locus_test(V, hyps, W, endo, p):
            raise PointRejectedError("point lies in the exceptional locus")
    grad = np.array([complex(g.evaluate(list(p))) for g in grads])
    v = grad.conj() / np.linalg.norm(grad)
    wf = W.poly.to_float().normalized()
    ts = np.geomspace(t_lo, t_hi, n_arc)
    log_v, log_w = [], []
    for t in ts:
        x = p + t * v
        x = x / np.linalg.norm(x)
        log_v.append(math.log(abs(complex(vf.evaluate(list(x))))))
        fx = endo.apply(x)
        log_w.append(math.log(abs(complex(wf.evaluate(list(fx))))))
    lt = np.log(ts)
    slope_v = np.polyfit(lt, log_v, 1)[0]
    slope_w = np.polyfit(lt, log_w, 1)[0]
    if abs(slope_v - 1.0) > residual_cap:
        raise PointRejectedError(
            f"arc not transverse to V (slope {slope_v:.3f} != 1)"
        )
    ratio = slope_w / slope_v
    m = round(ratio)
    if m < 1 or abs(ratio - m) >= residual_cap:
        raise PointRejectedError(
            f"ill-conditioned multiplicity slope ratio {ratio:.4f}"
        )
    return int(m)


# ---------------------------------------------------------------------------
# multiplicity jump along a curve
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JumpCheck:
    z0: complex
    ord_f_V: int
    ord_g_W: int
    verdict: bool


def curve_point(curve, z0):
    """Normalized component-value vector of the curve at z0."""
    logs = np.array([c.log_eval(complex(z0)) for c in curve.components])
    mags = logs.real
    top = np.max(mags)
    vals = np.exp(logs - top)
    vals[~np.isfinite(mags)] = 0.0
    return vals / np.linalg.norm(vals)


def composed_components(endo: Endomorphism, curve):
    """Components of g = F o f as pullback sums."""
    return tuple(pullback(p, curve.components) for p in endo.powered_forms)


def multiplicity_jump_check(
    curve,
    endo: Endomorphism,
    V: Hypersurface,
    W: Hypersurface,
    z0,
    hyps=(),
    circle_radius=3e-4,
    on_locus_tol=1e-6,
) -> JumpCheck:
    """Compare ord_{z0} of V o f against W o (F o f) by tiny-circle windings."""
    z0 = complex(z0)
    fz = curve_point(curve, z0)
    vf = V.poly.to_float().normalized()
    if abs(complex(vf.evaluate(list(fz)))) > on_locus_tol:
        raise PointRejectedError(f"curve point at {z0} is not on V to tolerance")
    if exceptional_locus_test(V, hyps, W, endo, fz):
        raise PointRejectedError(f"curve point at {z0} is in the exceptional locus")
    pb_v = pullback(V.poly.to_float(), curve.components)
    g_comps = composed_components(endo, curve)
    pb_w = pullback(W.poly.to_float(), g_comps)
    ord_f, _ = winding_number_jittered(pb_v, z0, circle_radius, samples=256)
    ord_g, _ = winding_number_jittered(pb_w, z0, circle_radius, samples=256)
    # consistency probe at a wider radius guards against fit-noise windings
    ord_g2, _ = winding_number_jittered(pb_w, z0, circle_radius * 3.0, samples=256)
    if ord_g2 != ord_g:
        raise PointRejectedError(
            f"inconsistent g-pullback order at {z0} ({ord_g} vs {ord_g2})"
        )
    return JumpCheck(
        z0=z0, ord_f_V=ord_f, ord_g_W=ord_g, verdict=(ord_g >= ord_f + 1)
    )

import cmath
import math

import numpy as np
import pytest

from nevlab.analytic import (
    ExpPolyFunction,
    ExpPolySum,
    ProjectiveCurve,
    ZeroRecord,
    aberth_roots,
    eval_log_scale,
    pullback,
    winding_number,
    zeros_in_disc,
)
from nevlab.errors import CurveInsideDivisorError
from nevlab.polycore import QI, HomogeneousPolynomial

P = HomogeneousPolynomial


def expf():
    return ExpPolyFunction(1, (), (0, 1))


def poly_z(mult=1):
    return ExpPolyFunction(1, ((0, mult),))


class TestEvalLogScale:
    def test_exp_at_100(self):
        mag, phase = eval_log_scale(expf(), 100)
        assert mag == pytest.approx(100.0)
        assert phase == pytest.approx(0.0)

    def test_z_squared(self):
        mag, phase = eval_log_scale(poly_z(2), 2)
        assert mag == pytest.approx(2 * math.log(2))
        assert phase == pytest.approx(0.0)

    def test_shifted_root_with_gaussian(self):
        fn = ExpPolyFunction(1, ((1, 1),), (0, 0, 1))  # (z-1) exp(z^2)
        mag, _ = eval_log_scale(fn, 3.0)
        assert mag == pytest.approx(math.log(2) + 9.0, abs=1e-12)

    def test_root_sentinel(self):
        mag, _ = eval_log_scale(poly_z(), 0)
        assert mag == float("-inf")


class TestWinding:
    def test_z_squared_unit_circle(self):
        assert winding_number(poly_z(2).as_sum(), 0, 1.0) == 2

    def test_exp_never_vanishes(self):
        assert winding_number(expf().as_sum(), 0, 11.0) == 0

    def test_exp_minus_one(self):
        fn = expf() - ExpPolyFunction(1)
        assert winding_number(fn, 0, 7.0) == 3  # zeros 0, +-2 pi i

    def test_samples_power_of_two(self):
        with pytest.raises(ValueError):
            winding_number(poly_z().as_sum(), 0, 1.0, samples=100)

    @pytest.mark.parametrize("seed", range(5))
    def test_product_additivity(self, seed):
        rng = np.random.default_rng(seed)
        a = ExpPolyFunction(
            complex(*rng.normal(size=2)),
            tuple((complex(*rng.normal(size=2)) * 0.7, int(m)) for m in rng.integers(1, 3, size=2)),
            tuple(rng.normal(size=2) * 0.4),
        )
        b = ExpPolyFunction(
            complex(*rng.normal(size=2)),
            ((complex(*rng.normal(size=2)) * 0.5, 1),),
            tuple(rng.normal(size=3) * 0.3),
        )
        r = 1.3
        wa = winding_number(a.as_sum(), 0, r)
        wb = winding_number(b.as_sum(), 0, r)
        assert winding_number((a * b).as_sum(), 0, r) == wa + wb


class TestZerosInDisc:
    def test_explicit_double_root(self):
        fn = ExpPolyFunction(1, ((1, 2),), (0, 1))  # (z-1)^2 e^z
        assert zeros_in_disc(fn, 0, 2.0) == [ZeroRecord(1 + 0j, 2)]

    def test_exp_minus_one_enumeration(self):
        fn = expf() - ExpPolyFunction(1)
        recs = zeros_in_disc(fn, 0, 7.0)
        expected = [0.0, 2j * math.pi, -2j * math.pi]
        assert len(recs) == 3
        for want in expected:
            assert min(abs(r.location - want) for r in recs) < 1e-7
        assert all(r.multiplicity == 1 for r in recs)

    def test_pullback_factor_root(self):
        Q = P(2, {(1, 1): 1})
        f = [ExpPolyFunction(1), poly_z()]
        recs = zeros_in_disc(pullback(Q, f), 0, 3.0)
        assert recs == [ZeroRecord(0j, 1)]

    def test_identically_zero_rejected(self):
        with pytest.raises(CurveInsideDivisorError):
            zeros_in_disc(ExpPolySum([]), 0, 1.0)

    def test_exact_multiplicities_via_gcd(self):
        fn = ExpPolyFunction(QI(1), ((QI(1), 2), (QI(-2), 1))).as_sum()
        recs = zeros_in_disc(fn, 0, 5.0)
        found = {
            (round(r.location.real), round(r.location.imag)): r.multiplicity
            for r in recs
        }
        assert found == {(1, 0): 2, (-2, 0): 1}

    @pytest.mark.parametrize("seed", range(6))
    def test_subdivision_matches_polynomial_solver(self, seed):
        # random polynomial of degree <= 8, via both routes
        rng = np.random.default_rng(100 + seed)
        deg = int(rng.integers(2, 9))
        coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        fn = ExpPolyFunction(1)  # placeholder for building the sum
        groups = ExpPolyFunction(complex(coeffs[0]))
        sum_fn = ExpPolyFunction(complex(coeffs[0])).as_sum()
        for k in range(1, deg + 1):
            term = ExpPolyFunction(complex(coeffs[k]), ((0, k),))
            sum_fn = sum_fn + term.as_sum()
        shortcut = zeros_in_disc(sum_fn, 0, 2.5)
        # force the subdivision route by tagging an exp factor exp(0*z) != grouping
        masked = sum_fn * ExpPolyFunction(1, (), (0, 1))  # multiply by e^z
        masked = masked + ExpPolyFunction(0).as_sum()
        subdiv = zeros_in_disc(masked, 0, 2.5, tol=1e-9)
        assert sum(r.multiplicity for r in subdiv) == sum(
            r.multiplicity for r in shortcut
        )
        for rec in shortcut:
            assert min(abs(rec.location - s.location) for s in subdiv) < 1e-6

    def test_winding_equals_total_multiplicity(self):
        fn = ExpPolyFunction(1, ((0.5, 2), (-0.25 + 0.6j, 1)), (0, 2)).as_sum()
        recs = zeros_in_disc(fn, 0, 1.5)
        w = winding_number(fn, 0, 1.5)
        assert w == sum(r.multiplicity for r in recs) == 3


class TestAberth:
    @pytest.mark.parametrize("seed", range(4))
    def test_roots_solve(self, seed):
        rng = np.random.default_rng(seed)
        true_roots = rng.normal(size=5) + 1j * rng.normal(size=5)
        coeffs = np.array([1.0 + 0j])
        for r in true_roots:
            coeffs = np.convolve(coeffs, [-r, 1.0])
        got = sorted(aberth_roots(coeffs), key=lambda z: (z.real, z.imag))
        want = sorted(true_roots, key=lambda z: (z.real, z.imag))
        assert np.allclose(got, want, atol=1e-8)


class TestProjectiveCurve:
    def test_log_norm_basepoint(self):
        curve = ProjectiveCurve([ExpPolyFunction(1), poly_z()])
        assert curve.log_norm(0) == pytest.approx(0.0)

    def test_log_norm_closed_form(self):
        curve = ProjectiveCurve([ExpPolyFunction(1), poly_z()])
        for r in (0.5, 3.0, 50.0):
            assert curve.log_norm(r) == pytest.approx(0.5 * math.log(1 + r * r))

    def test_log_norm_exponential(self):
        curve = ProjectiveCurve([ExpPolyFunction(1), expf()])
        r = 40.0
        assert curve.log_norm(r) == pytest.approx(
            0.5 * math.log(1 + math.exp(2 * r)), rel=1e-12
        )

    def test_rescaling_shifts_by_re_q(self):
        # multiplying every component by exp(q) shifts log-norm by Re q
        q = (0.3, -0.2, 0.15)
        curve = ProjectiveCurve([ExpPolyFunction(1), poly_z(), expf()])
        scaled = ProjectiveCurve(
            [c * ExpPolyFunction(1, (), q) for c in curve.components]
        )
        for z in (0.7 + 0.1j, 2.0 - 1.0j, -3.0 + 2.5j):
            qz = q[0] + q[1] * z + q[2] * z * z
            assert scaled.log_norm(z) - curve.log_norm(z) == pytest.approx(
                qz.real, abs=1e-10
            )

    def test_common_zero_rejected(self):
        with pytest.raises(ValueError):
            ProjectiveCurve([poly_z(), poly_z(2)])


class TestSerialization:
    def test_curve_roundtrip(self):
        curve = ProjectiveCurve(
            [
                ExpPolyFunction(1),
                ExpPolyFunction(2.5, ((1 + 1j, 2),)),
                ExpPolyFunction(1, (), (0, 1)),
            ]
        )
        again = ProjectiveCurve.from_json_dict(curve.to_json_dict())
        zs = [0.3 + 0.4j, 2.0, -1.5j]
        for z in zs:
            assert again.log_norm(z) == pytest.approx(curve.log_norm(z))

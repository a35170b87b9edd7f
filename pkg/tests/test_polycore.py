from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nevlab.errors import (
    DimensionMismatchError,
    NotSquareFreeError,
    SizeCapError,
    ZeroPolynomialError,
)
from nevlab.polycore import (
    QI,
    HomogeneousPolynomial,
    Hypersurface,
    euler_residual,
    jacobian_determinant,
    macaulay_resultant,
    monomials_of_degree,
    square_free_part,
)

from oracles import (
    elimination_has_common_zero,
    random_exact_form,
    random_point,
    random_rational_point,
)

P = HomogeneousPolynomial


class TestQI:
    def test_field_ops(self):
        a = QI(Fraction(1, 2), Fraction(3, 4))
        b = QI(2, -1)
        assert a + b == QI(Fraction(5, 2), Fraction(-1, 4))
        assert (a * b) / b == a
        assert complex(QI(1, 1)) == 1 + 1j
        assert QI(0, 2) ** 2 == QI(-4)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            QI(1) / QI(0)


class TestEvaluate:
    def test_monomial_product(self):
        p = P(3, {(1, 1, 0): 1})
        assert p.evaluate([2, 3, 1]) == QI(6)

    def test_i_squared(self):
        p = P(3, {(2, 0, 0): 1, (0, 2, 0): 1})
        assert p.evaluate([1, 1j, 0]) == 0

    @pytest.mark.parametrize("seed", range(6))
    def test_float_matches_exact_oracle(self, seed):
        # term-by-term exact-rational oracle for a random degree-3 form
        p = random_exact_form(3, 3, seed=seed)
        pt = random_rational_point(3, seed=seed + 100)
        exact = p.evaluate(pt)
        approx = p.to_float().evaluate([complex(x) for x in pt])
        scale = max(abs(complex(exact)), 1e-30)
        assert abs(approx - complex(exact)) / scale < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            P(3, {(1, 1, 0): 1}).evaluate([1, 2])

    @given(
        st.integers(min_value=0, max_value=50),
        st.floats(min_value=0.2, max_value=3.0),
        st.floats(min_value=0.0, max_value=6.28),
    )
    @settings(max_examples=40, deadline=None)
    def test_homogeneity(self, seed, lam_mod, lam_arg):
        p = random_exact_form(3, 3, seed=seed).to_float()
        pt = np.array(random_point(3, seed=seed + 17))
        lam = lam_mod * np.exp(1j * lam_arg)
        lhs = p.evaluate(list(lam * pt))
        rhs = lam**p.degree * p.evaluate(list(pt))
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


class TestPartialDerivative:
    def test_power_rule(self):
        p = P(3, {(2, 1, 0): 1})
        assert p.partial_derivative(0) == P(3, {(1, 1, 0): 2})

    def test_zero_sentinel(self):
        p = P(3, {(0, 3, 0): 1})
        assert p.partial_derivative(0).is_zero

    @pytest.mark.parametrize("seed", range(5))
    def test_finite_difference_oracle(self, seed):
        p = random_exact_form(3, 4, seed=seed).to_float()
        pt = np.array(random_point(3, seed=seed + 31))
        var = seed % 3
        h = 1e-6
        e = np.zeros(3, dtype=complex)
        e[var] = h
        fd = (p.evaluate(list(pt + e)) - p.evaluate(list(pt - e))) / (2 * h)
        dp = p.partial_derivative(var).evaluate(list(pt))
        assert abs(fd - dp) / max(abs(dp), 1.0) < 1e-6


class TestJacobian:
    def test_linear_forms_constant(self):
        ps = [P.linear([1, 2, 3]), P.linear([0, 1, 4]), P.linear([5, 0, 1])]
        det = jacobian_determinant(ps)
        assert det.degree == 0

    def test_squares(self):
        ps = [P(3, {(2, 0, 0): 1}), P(3, {(0, 2, 0): 1}), P(3, {(0, 0, 2): 1})]
        det = jacobian_determinant(ps)
        assert det == P(3, {(1, 1, 1): 8})
        assert det.degree == 3 == sum(p.degree for p in ps) - 3

    @pytest.mark.parametrize("seed", range(4))
    def test_random_conics_degree(self, seed):
        ps = [random_exact_form(3, 2, seed=10 * seed + k) for k in range(3)]
        det = jacobian_determinant(ps)
        if not det.is_zero:
            assert det.degree == 3

    @pytest.mark.parametrize("seed", range(3))
    def test_float_interpolation_matches_exact(self, seed):
        ps = [random_exact_form(3, 2, seed=20 * seed + k) for k in range(3)]
        det_exact = jacobian_determinant(ps)
        det_float = jacobian_determinant([p.to_float() for p in ps])
        assert det_float.degree == det_exact.degree
        pt = random_point(3, seed=seed + 5)
        v1 = complex(det_exact.to_float().evaluate(pt))
        v2 = complex(det_float.evaluate(pt))
        assert abs(v1 - v2) < 1e-7 * max(1.0, abs(v1))

    def test_identically_zero_detected(self):
        p = random_exact_form(3, 2, seed=1)
        ps = [p, p, random_exact_form(3, 2, seed=2)]
        assert jacobian_determinant(ps).is_zero
        assert jacobian_determinant([q.to_float() for q in ps]).is_zero


class TestEulerResidual:
    def test_monomial(self):
        p = P(3, {(2, 1, 0): 1})
        assert euler_residual(p, [1, 2, 5]) == QI(0)

    def test_linear(self):
        p = P.linear([3, -2, 7])
        assert euler_residual(p, [QI(1), QI(4), QI(-2)]) == QI(0)

    @pytest.mark.parametrize("seed", range(8))
    def test_float_residual_small(self, seed):
        p = random_exact_form(3, 4, seed=seed).to_float()
        pt = random_point(3, seed=seed + 50, scale=2.0)
        scale = max(abs(p.evaluate(pt)), p.coeff_scale())
        assert abs(euler_residual(p, pt)) < 1e-10 * max(scale, 1.0)


class TestMacaulay:
    def test_linear_coefficient_determinant(self):
        ps = [P.linear([1, 2, 0]), P.linear([0, 1, 1]), P.linear([1, 0, 3])]
        res = macaulay_resultant(ps)
        # 3x3 determinant of the coefficient matrix
        expected = QI(1 * (1 * 3 - 1 * 0) - 2 * (0 * 3 - 1 * 1) + 0)
        assert res.value == expected
        assert res.nonzero

    def test_common_zero_linear(self):
        ps = [P.linear([1, 0, 0]), P.linear([0, 1, 0]), P.linear([1, 1, 0])]
        res = macaulay_resultant(ps)
        assert res.is_zero and res.value == QI(0)

    def test_squares_nonzero(self):
        ps = [P(3, {(2, 0, 0): 1}), P(3, {(0, 2, 0): 1}), P(3, {(0, 0, 2): 1})]
        res = macaulay_resultant(ps)
        assert res.nonzero
        assert not elimination_has_common_zero(ps)

    @pytest.mark.parametrize("seed", range(8))
    def test_cross_check_elimination_oracle(self, seed):
        # random quadric/line families, some forced through a common point
        degs = [(seed % 2) + 1, ((seed // 2) % 2) + 1, 2]
        ps = [random_exact_form(3, d, seed=100 * seed + k) for k, d in enumerate(degs)]
        res = macaulay_resultant(ps)
        assert res.nonzero == (not elimination_has_common_zero(ps, seed=seed))

    @pytest.mark.parametrize("seed", range(4))
    def test_forced_common_zero(self, seed):
        # build forms all vanishing at a seeded rational point
        import random as _random

        rng = _random.Random(seed)
        pt = [QI(rng.randint(-3, 3)) for _ in range(2)] + [QI(1)]
        ps = []
        for k, d in enumerate([1, 2, 2]):
            while True:
                cand = random_exact_form(3, d, seed=1000 * seed + 17 * k + rng.randint(0, 500))
                val = cand.evaluate(pt)
                mono = tuple([0, 0, d])
                corr = cand.coeff(mono) - val  # adjust z2^d coefficient to vanish at pt
                terms = dict(cand.items())
                terms[mono] = corr
                cand = P(3, terms)
                if not cand.is_zero and cand.degree == d:
                    break
            assert cand.evaluate(pt) == QI(0)
            ps.append(cand)
        res = macaulay_resultant(ps)
        assert res.is_zero
        assert elimination_has_common_zero(ps, seed=seed)

    def test_float_mode_verdicts(self):
        sq = [P(3, {(2, 0, 0): 1.0}), P(3, {(0, 2, 0): 1.0}), P(3, {(0, 0, 2): 1.0})]
        assert macaulay_resultant(sq).nonzero
        bad = [P.linear([1.0, 0, 0]), P.linear([0, 1.0, 0]), P.linear([1.0, 1.0, 0])]
        assert macaulay_resultant(bad).is_zero

    def test_size_cap(self):
        ps = [P(5, {(7, 0, 0, 0, 0): 1}) for _ in range(5)]
        with pytest.raises(SizeCapError):
            macaulay_resultant(ps)


class TestHypersurface:
    def test_rejects_zero(self):
        with pytest.raises(ZeroPolynomialError):
            Hypersurface(P.zero(3))

    def test_rejects_square(self):
        line = P.linear([1, 1, 0])
        with pytest.raises(NotSquareFreeError):
            Hypersurface(line * line)

    def test_square_free_part(self):
        line = P.linear([1, 1, 0])
        other = P.linear([1, -1, 2])
        p = line * line * other
        sf = square_free_part(p)
        assert sf.degree == 2
        hyp = Hypersurface(sf)
        assert hyp.degree == 2


class TestSerialization:
    def test_text_roundtrip_exact(self):
        p = P(3, {(2, 1, 0): QI(Fraction(1, 3), Fraction(-2, 7)), (0, 0, 3): QI(4)})
        q = P.from_text(p.to_text())
        assert q == p and q.mode == "exact"

    def test_text_roundtrip_float(self):
        p = P(3, {(2, 0, 0): 1.5 + 2e-7j, (0, 2, 0): -3.25e10 + 0j})
        q = P.from_text(p.to_text())
        assert q.mode == "float"
        assert q == p

    def test_json_roundtrip(self):
        import json

        for p in [
            P(3, {(1, 1, 1): QI(Fraction(3, 5))}),
            P(2, {(4, 0): 2.5 - 1.25j, (0, 4): 1e-3 + 0j}),
        ]:
            blob = json.dumps(p.to_json_dict())
            assert P.from_json_dict(json.loads(blob)) == p

    def test_monomial_count_sanity(self):
        assert len(monomials_of_degree(3, 4)) == 15

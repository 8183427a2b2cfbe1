from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy import integrate

from unibound import bounds as B
from unibound.errors import (
    ConstraintInfeasibleError,
    InputError,
    UnsupportedRegimeError,
)
from unibound.witness import (
    QuadraticWitness,
    build_moment_polynomial,
    solve_witness_constraint,
    synthetic_division,
    witness_constraint_target,
    witness_monotone,
    witness_unimodal,
)

import oracles


class TestWitnessMonotone:
    def test_unit_interval(self):
        w = witness_monotone(0, 0.5)
        assert w.alpha == pytest.approx(1 / 3) and w.beta == 1

    def test_degenerate(self):
        assert witness_monotone(2.0, 2.0) == QuadraticWitness(2.0, 2.0)

    def test_reproduces_variance_bound(self):
        w = witness_monotone(0, 0.3)
        assert (w.alpha, w.beta) == pytest.approx((0.2, 0.6))
        assert B.two_point_raw_lb(w.alpha, w.beta, 0.3, 2) - 0.3 ** 2 == pytest.approx(0.03)

    @given(st.floats(-10, 10), st.floats(0, 10))
    def test_ordering(self, a, gap):
        w = witness_monotone(a, a + gap)
        assert a <= w.alpha <= w.beta

    def test_alpha_closed_form(self):
        w = witness_monotone(Fraction(1), Fraction(7, 4))
        assert w.alpha == (2 * Fraction(7, 4) + 1) / 3

    def test_mean_below_support(self):
        with pytest.raises(InputError):
            witness_monotone(1.0, 0.5)


class TestWitnessUnimodal:
    def test_same_as_monotone(self):
        assert witness_unimodal(0, 0.5) == witness_monotone(0, 0.5)

    def test_degenerate(self):
        assert witness_unimodal(1.5, 1.5) == QuadraticWitness(1.5, 1.5)

    def test_ordering_from_mode(self):
        w = witness_unimodal(1, 2)
        assert w.beta == 3 and w.alpha == pytest.approx(5 / 3)
        assert 1 <= w.alpha <= w.beta

    @given(st.floats(-10, 10), st.floats(-10, 10))
    def test_variance_identity(self, mode, mean):
        assume(abs(mean - mode) > 1e-3)
        w = witness_unimodal(mode, mean)
        got = B.two_point_raw_lb(w.alpha, w.beta, mean, 2) - mean * mean
        assert got == pytest.approx((mean - mode) ** 2 / 3, rel=1e-9, abs=1e-10 * (1 + mean * mean))


class TestMomentPolynomial:
    def test_quadratic(self):
        p = build_moment_polynomial(0.5, 2.0, 2)
        assert p.coeffs_g == (1.0,)
        assert p.coeffs_f == pytest.approx((1.0, -2.5, 1.0))

    def test_cubic(self):
        p = build_moment_polynomial(1, 2, 3)
        assert p.coeffs_f == (1.0, 0.0, -7.0, 6.0)
        assert p.coeffs_g == (1.0, 3.0)

    def test_quartic(self):
        p = build_moment_polynomial(1, 2, 4)
        assert p.coeffs_f == (1.0, 0.0, 0.0, -15.0, 14.0)
        assert p.coeffs_g == pytest.approx((1.0, 3.0, 7.0))
        np.testing.assert_allclose(oracles.polymul_roundtrip(1, 2, p.coeffs_g), p.coeffs_f)
        xs = np.linspace(-4, 4, 101)
        assert np.all(p.g(xs) > 0)

    @given(st.floats(0, 10), st.floats(0, 10), st.integers(2, 8))
    def test_matches_quotient_coefficients(self, a, b, r):
        assume(abs(a - b) > 1e-2)
        p = build_moment_polynomial(a, b, r)
        expected = oracles.moment_poly_expanded(a, b, r)
        scale = max(abs(c) for c in expected)
        assert np.max(np.abs(np.subtract(p.coeffs_f, expected))) <= 1e-12 * scale
        assert np.max(np.abs(oracles.polymul_roundtrip(a, b, p.coeffs_g) - expected)) <= 1e-9 * scale
        assert abs(p.f(a)) <= 1e-9 * scale * max(1, a) ** r
        assert abs(p.f(b)) <= 1e-9 * scale * max(1, b) ** r

    @given(st.floats(-10, 10), st.floats(-10, 10), st.sampled_from([2, 4, 6, 8]))
    def test_even_order_any_sign(self, a, b, r):
        assume(abs(a - b) > 1e-2)
        p = build_moment_polynomial(a, b, r)
        assert p.residual <= 1e-9

    def test_odd_order_negative_root(self):
        with pytest.raises(UnsupportedRegimeError):
            build_moment_polynomial(-1.0, 2.0, 3)

    def test_equal_roots_and_low_order(self):
        with pytest.raises(InputError):
            build_moment_polynomial(1.0, 1.0, 4)
        with pytest.raises(InputError):
            build_moment_polynomial(0.0, 1.0, 1)

    def test_synthetic_division(self):
        q, rem = synthetic_division([1.0, 0.0, -7.0, 6.0], 1.0)
        assert q == [1.0, 1.0, -6.0] and rem == 0.0


class TestWitnessConstraint:
    @pytest.mark.parametrize("a, beta", [(0.0, 1.0), (0.5, 3.0), (-2.0, 5.0), (1.0, 1.25)])
    def test_quadratic_closed_form(self, a, beta):
        assert solve_witness_constraint(a, beta, 2) == pytest.approx((2 * a + beta) / 3, rel=1e-12)

    def test_cubic_root_integrates_to_zero(self):
        alpha = solve_witness_constraint(0.0, 1.0, 3)
        assert alpha == pytest.approx((3 ** 0.5 - 1) / 2, rel=1e-12)
        p = build_moment_polynomial(alpha, 1.0, 3)
        val, _ = integrate.quad(p.f, 0.0, 1.0, epsabs=1e-14)
        assert abs(val) <= 1e-10

    @settings(deadline=None)
    @given(st.floats(0, 5), st.floats(0.05, 5), st.integers(2, 7))
    def test_root_integrates_to_zero(self, a, width, r):
        beta = a + width
        alpha = solve_witness_constraint(a, beta, r)
        assert a <= alpha <= beta
        p = build_moment_polynomial(alpha, beta, r) if alpha != beta else None
        assume(p is not None)
        val, _ = integrate.quad(p.f, a, beta, epsabs=0, epsrel=1e-11)
        scale = integrate.quad(lambda x: abs(p.f(x)), a, beta)[0] + beta ** r * width
        assert abs(val) <= 1e-9 * scale

    @pytest.mark.parametrize("r", range(2, 7))
    @pytest.mark.parametrize("a, mean", [(0.0, 0.5), (0.5, 1.5), (1.0, 1.25)])
    def test_reproduces_closed_form(self, a, mean, r):
        beta = 2 * mean - a
        alpha = solve_witness_constraint(a, beta, r)
        got = B.two_point_raw_lb(alpha, beta, mean, r)
        exact = oracles.uniform_raw_moment_exact(a, beta, r)
        assert got == pytest.approx(float(exact), rel=1e-10)

    def test_target_matches_integral_form(self):
        # the constraint is linear in the left side; compare with its integral derivation
        for r in range(2, 8):
            a, beta = Fraction(1, 3), Fraction(11, 4)
            integral = 2 * (beta ** (r - 1) * (beta ** 2 - a ** 2) / 2
                            - (beta ** (r + 1) - a ** (r + 1)) / (r + 1)) / (beta - a) ** 2
            assert witness_constraint_target(float(a), float(beta), r) == pytest.approx(float(integral), rel=1e-13)

    def test_errors(self):
        with pytest.raises(InputError):
            solve_witness_constraint(1.0, 1.0, 3)
        with pytest.raises(UnsupportedRegimeError):
            solve_witness_constraint(-1.0, 1.0, 3)
        with pytest.raises(InputError):
            solve_witness_constraint(0.0, 1.0, 1)

    def test_infeasible_bracket(self, monkeypatch):
        import unibound.witness as W
        monkeypatch.setattr(W, "witness_constraint_target", lambda a, b, r: 1e9)
        with pytest.raises(ConstraintInfeasibleError):
            W.solve_witness_constraint(0.0, 1.0, 4)

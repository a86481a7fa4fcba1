"""Sigma-form ODE route: series layers, integration, direct densities."""

import math

import numpy as np
import pytest

from spacing_lab import (
    ArgumentError,
    Interval,
    UnsupportedError,
    fredholm,
    painleve,
)
from spacing_lab.kernels import hard_edge_bessel
from spacing_lab.painleve import (
    SIGMA_HARD,
    SIGMA_HARD_GEN,
    SIGMA_JMMS,
    SIGMA_NN,
    U_TILDE,
    V_P2,
    V_TILDE,
    build_problem,
    extend_series,
    integrate,
    series_residual,
)

CANONICAL_PROBLEMS = [
    (SIGMA_JMMS, (1.0,)),
    (SIGMA_HARD, (-0.5, 1.0)),
    (SIGMA_HARD, (0.5, 1.0)),
    (SIGMA_NN, (1.0, 1.0)),
    (U_TILDE, ()),
    (V_TILDE, ()),
    (V_P2, ()),
]


class TestSeriesLayer:
    @pytest.mark.parametrize("eq,params", CANONICAL_PROBLEMS,
                             ids=lambda v: str(v))
    def test_residual_at_switch_point(self, eq, params):
        problem = build_problem(eq, params)
        assert series_residual(problem) <= 1e-8

    def test_three_term_boundary_series(self):
        # the first three derived terms alone already satisfy the equation
        # to 1e-8 near zero; the tiny switch point keeps the truncated
        # series inside its own tail bound
        problem = build_problem(U_TILDE, t_switch=1e-8, n_terms=5)
        assert series_residual(problem, 1e-3) <= 1e-8

    def test_conditioned_origin_degenerates_to_translation_form(self):
        # at a=0 the leading term collapses to the plain bulk one, -xi t/pi
        nn = build_problem(SIGMA_NN, (0.0, 1.0))
        jmms = build_problem(SIGMA_JMMS, (1.0,))
        exp_nn, coeff_nn = nn.series[0]
        exp_j, coeff_j = jmms.series[0]
        assert exp_nn == exp_j == 1
        assert coeff_nn == pytest.approx(coeff_j, rel=1e-13)
        assert coeff_j == pytest.approx(-1.0 / math.pi, rel=1e-13)

    def test_extend_series_preserves_prefix(self):
        problem = build_problem(SIGMA_JMMS, (1.0,), n_terms=30)
        longer = extend_series(problem, 40)
        assert longer[:len(problem.series)] == problem.series

    def test_t_switch_domain(self):
        with pytest.raises(ArgumentError):
            build_problem(SIGMA_JMMS, (1.0,), t_switch=0.2)
        with pytest.raises(ArgumentError):
            build_problem(SIGMA_JMMS, (1.0,), t_switch=0.0)

    def test_unknown_equation(self):
        with pytest.raises(ArgumentError):
            build_problem("SIGMA_BOGUS", ())

    def test_unsupported_parameters(self):
        with pytest.raises(UnsupportedError):
            build_problem(SIGMA_HARD, (1.5, 1.0))
        with pytest.raises(UnsupportedError):
            build_problem(SIGMA_NN, (2.0, 1.0))
        with pytest.raises(UnsupportedError):
            build_problem(SIGMA_HARD_GEN, (-0.5, 1.0, 1.0))
        # the mu=2 boundary data is only known at xi=1
        with pytest.raises(UnsupportedError):
            build_problem(SIGMA_HARD_GEN, (-0.5, 2.0, 0.5))

    def test_xi_domain(self):
        with pytest.raises(ArgumentError):
            build_problem(SIGMA_JMMS, (1.5,))

    def test_xi_zero_series_vanishes(self):
        problem = build_problem(SIGMA_JMMS, (0.0,))
        assert problem.series == ()
        assert problem.series_value(0.05) == 0.0

    def test_series_value_derivative_orders(self):
        problem = build_problem(SIGMA_JMMS, (1.0,))
        with pytest.raises(ArgumentError):
            problem.series_value(0.05, deriv=3)


class TestIntegration:
    def test_tolerance_refinement(self):
        problem = build_problem(SIGMA_JMMS, (1.0,))
        coarse = integrate(problem, 5.0, tol=1e-10)
        fine = integrate(problem, 5.0, tol=1e-12)
        assert abs(coarse.sigma_at(5.0) - fine.sigma_at(5.0)) <= 1e-9

    def test_hard_edge_defect_window(self):
        # the integrator rejects any step whose defect in the original
        # second-order equation exceeds 100x the tolerance, so a completed
        # long integration is itself the defect certificate
        problem = build_problem(SIGMA_HARD, (-0.5, 1.0))
        solution = integrate(problem, 30.0, tol=1e-10)
        assert solution.t_max >= 30.0

    def test_switch_point_halving(self):
        values = []
        for t_switch in (0.1, 0.05):
            problem = build_problem(SIGMA_JMMS, (1.0,), t_switch=t_switch)
            solution = integrate(problem, math.pi, tol=1e-10)
            values.append(math.exp(solution.log_integral_at(math.pi)))
        assert abs(values[0] - values[1]) <= 1e-9

    def test_conditioned_origin_matches_translation_form_at_a_zero(self):
        nn = integrate(build_problem(SIGMA_NN, (0.0, 1.0)), 6.0, tol=1e-10)
        jmms = integrate(build_problem(SIGMA_JMMS, (1.0,)), 6.0, tol=1e-10)
        for t in (0.5, 2.0, 6.0):
            assert abs(nn.sigma_at(t) - jmms.sigma_at(t)) <= 1e-9

    def test_beyond_integrated_range(self):
        problem = build_problem(SIGMA_JMMS, (1.0,))
        solution = integrate(problem, 2.0, tol=1e-10)
        with pytest.raises(ArgumentError):
            solution.sigma_at(3.0)
        with pytest.raises(ArgumentError):
            solution.sigma_at(-1.0)

    def test_creeping_requests_near_the_stiff_frontier(self):
        # the solution cache doubles its horizon on extension; for u-tilde
        # that doubling can land past the point where the equation becomes
        # numerically stiff, even though every requested s is reachable
        painleve.clear_cache()
        for s in (3.0, 5.0, 7.0, 7.9, 8.1):
            value = painleve.p1_direct(s)
            assert 0.0 <= value < 1.0


class TestBulkEvaluators:
    def test_boundary_values(self):
        assert painleve.e2_bulk(0.0) == 1.0
        assert painleve.e2_bulk(1.3, xi=0.0) == 1.0
        assert painleve.e1_bulk(0.0) == 1.0
        assert painleve.e4_bulk(0.0) == 1.0

    def test_e2_against_determinant(self):
        assert painleve.e2_bulk(1.0) == pytest.approx(
            fredholm.e2_bulk_det(1.0), abs=1e-8)

    def test_e2_small_s_against_determinant(self):
        # validates the derived series coefficients, not just the leading one
        assert painleve.e2_bulk(0.1) == pytest.approx(
            fredholm.e2_bulk_det(0.1), abs=1e-10)

    def test_e2_partial_xi(self):
        assert painleve.e2_bulk(0.8, xi=0.5) == pytest.approx(
            fredholm.e2_bulk_det(0.8, xi=0.5), abs=1e-8)

    def test_hard_edge_boundary_value(self):
        assert painleve.e2_hard(0.0, -0.5) == 1.0

    def test_hard_edge_reproduces_even_bulk_determinant(self):
        s = 0.5
        value = painleve.e2_hard((math.pi * s) ** 2, -0.5)
        assert value == pytest.approx(fredholm.e1_bulk_det(s), abs=1e-6)

    def test_hard_edge_against_bessel_determinant(self):
        value = painleve.e2_hard(2.0, 0.5)
        det = fredholm.fredholm_det(hard_edge_bessel(0.5), Interval(0.0, 2.0))
        assert value == pytest.approx(det, abs=1e-7)


class TestConditionedOrigin:
    def test_boundary_values(self):
        assert painleve.enn_generating(0.0) == 1.0
        assert painleve.p2_nn(0.0) == 0.0

    def test_generating_value_against_determinant(self):
        assert painleve.enn_generating(0.5) == pytest.approx(
            fredholm.enn_det(0.5), abs=1e-6)

    def test_density_vanishes_quadratically(self):
        # the conditioning eigenvalue repels its neighbour like s^2: the
        # boundary exponent 2a+1 = 3 in sigma leaves s^2 after the 1/s
        lo, hi = 0.02, 0.04
        slope = math.log(painleve.p2_nn(hi) / painleve.p2_nn(lo)) \
            / math.log(hi / lo)
        assert slope == pytest.approx(2.0, abs=0.01)


class TestDirectDensities:
    def test_p1_linear_at_origin(self):
        for s in (1e-4, 2e-3):
            assert painleve.p1_direct(s) / s == pytest.approx(
                math.pi ** 2 / 6.0, abs=1e-4)

    def test_p2_quadratic_at_origin(self):
        s = 1e-4
        assert painleve.p2_direct(s) / s ** 2 == pytest.approx(
            math.pi ** 2 / 3.0, abs=1e-6)

    def test_p4_quartic_at_origin(self):
        lo, hi = 0.02, 0.04
        slope = math.log(painleve.p4_direct(hi) / painleve.p4_direct(lo)) \
            / math.log(hi / lo)
        assert slope == pytest.approx(4.0, abs=0.05)

    def test_densities_nonnegative(self):
        for s in np.arange(0.1, 3.1, 0.3):
            assert painleve.p1_direct(s) >= 0.0
            assert painleve.p2_direct(s) >= 0.0
            assert painleve.p4_direct(s) >= 0.0
            assert painleve.p1_gap1(s) >= 0.0

    def test_gap1_density_below_gap0_at_small_s(self):
        for s in (0.1, 0.3, 0.6):
            assert painleve.p1_gap1(s) < painleve.p1_direct(s)

    def test_negative_argument_rejected(self):
        for fn in (painleve.p1_direct, painleve.p2_direct,
                   painleve.p4_direct, painleve.p2_nn):
            with pytest.raises(ArgumentError):
                fn(-0.5)


class TestFirstDerivativeIdentity:
    def test_residual_vanishes_with_s(self):
        assert abs(painleve.am5_identity_residual(1e-3, -0.5)) <= 1e-10

    @pytest.mark.parametrize("a", [-0.5, 0.5])
    def test_residual_at_unit_argument(self, a):
        assert abs(painleve.am5_identity_residual(1.0, a)) <= 1e-7

    def test_unsupported_order(self):
        with pytest.raises(UnsupportedError):
            painleve.am5_identity_residual(1.0, 1.5)

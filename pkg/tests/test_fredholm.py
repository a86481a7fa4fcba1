"""Determinantal route: generating values, gap profiles, parity splits."""

import io
import math
from functools import reduce

import numpy as np
import pytest

from spacing_lab import (
    ArgumentError,
    Interval,
    NumericError,
    UnsupportedError,
    fredholm,
    gauss_legendre,
    painleve,
)
from spacing_lab.kernels import sine_bulk
from spacing_lab.quadrature import FredholmSpectrum, nystrom_spectrum


def _manual_spectrum(eigenvalues):
    mu = np.asarray(eigenvalues, dtype=float)
    return FredholmSpectrum(eigenvalues=mu, kernel=sine_bulk(),
                            interval=Interval(-1.0, 1.0), nodes_used=mu.size)


class TestGeneratingValue:
    def test_xi_zero(self):
        spectrum = nystrom_spectrum(sine_bulk(), Interval(-1.0, 1.0), 80)
        assert fredholm.generating_value(spectrum, 0.0) == 1.0

    def test_single_eigenvalue(self):
        assert fredholm.generating_value(_manual_spectrum([0.5]), 1.0) == 0.5

    def test_xi_domain(self):
        spectrum = _manual_spectrum([0.5])
        with pytest.raises(ArgumentError):
            fredholm.generating_value(spectrum, 1.2)
        with pytest.raises(ArgumentError):
            fredholm.generating_value(spectrum, -0.1)

    def test_decreasing_in_xi(self):
        spectrum = nystrom_spectrum(sine_bulk(), Interval(-0.5, 0.5), 80)
        values = [fredholm.generating_value(spectrum, xi)
                  for xi in np.linspace(0.0, 1.0, 11)]
        assert np.all(np.diff(values) < 0.0)

    def test_against_correlation_series(self):
        # det(1 - K) = sum_k (-1)^k/k! int det[K(x_i, x_j)] dx over J^k,
        # truncated at k = 6; the k-fold integrals use tensor-product
        # Gauss rules and the sine kernel written out directly, so the
        # oracle shares no code with the spectral route
        interval = Interval(-0.5, 0.5)
        total = 1.0
        nodes_for_k = {1: 24, 2: 20, 3: 14, 4: 12, 5: 10, 6: 8}
        for k, m in nodes_for_k.items():
            rule = gauss_legendre(m, interval)
            idx = np.indices((m,) * k).reshape(k, -1)
            pts = rule.nodes[idx]
            wts = np.prod(rule.weights[idx], axis=0)
            mats = np.moveaxis(np.sinc(pts[:, None, :] - pts[None, :, :]), 2, 0)
            term = np.sum(wts * np.linalg.det(mats)) / math.factorial(k)
            total += (-1.0) ** k * term
        direct = fredholm.fredholm_det(sine_bulk(), interval)
        assert abs(total - direct) <= 1e-8


class TestGapN:
    def test_n_zero_equals_generating_value(self):
        spectrum = nystrom_spectrum(sine_bulk(), Interval(-1.0, 1.0), 120)
        profile = fredholm.gap_n(spectrum, 0)
        assert profile.value == pytest.approx(
            fredholm.generating_value(spectrum, 1.0), abs=1e-15)

    def test_profiles_sum_to_one(self):
        spectrum = nystrom_spectrum(sine_bulk(), Interval(-1.5, 1.5), 140)
        total = sum(fredholm.gap_n(spectrum, n).value for n in range(31))
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_order_one_against_finite_difference(self):
        # E(1) = -d/dxi prod(1 - xi mu) at xi = 1, by central difference
        # on the product itself
        spectrum = nystrom_spectrum(sine_bulk(), Interval(-1.0, 1.0), 120)
        mu = spectrum.eigenvalues
        h = 1e-5
        product = lambda xi: float(np.prod(1.0 - xi * mu))
        derivative = (product(1.0 + h) - product(1.0 - h)) / (2.0 * h)
        assert fredholm.gap_n(spectrum, 1).value == pytest.approx(-derivative,
                                                                  abs=1e-7)

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
    def test_against_polynomial_derivative(self, n):
        # prod(1 - xi mu_j) is a polynomial in xi; its exact derivatives
        # at xi = 1 give an independent route to E(n)
        spectrum = nystrom_spectrum(sine_bulk(), Interval(-1.0, 1.0), 120)
        mu = spectrum.eigenvalues[spectrum.eigenvalues > 1e-15]
        poly = reduce(lambda p, m: p * np.polynomial.Polynomial([1.0, -m]),
                      mu, np.polynomial.Polynomial([1.0]))
        expected = (-1.0) ** n * poly.deriv(n)(1.0) / math.factorial(n)
        assert fredholm.gap_n(spectrum, n).value == pytest.approx(expected,
                                                                  abs=1e-6)

    def test_order_bound(self):
        spectrum = _manual_spectrum([0.5])
        with pytest.raises(UnsupportedError):
            fredholm.gap_n(spectrum, 31)


class TestParitySplit:
    def test_asymmetric_interval_rejected(self):
        with pytest.raises(ArgumentError):
            fredholm.parity_split(Interval(0.0, 1.0))

    def test_small_interval_near_one(self):
        d_plus, d_minus = fredholm.parity_split(Interval(-1e-6, 1e-6))
        assert d_plus == pytest.approx(1.0, abs=1e-5)
        assert d_minus == pytest.approx(1.0, abs=1e-10)

    def test_product_recovers_full_determinant(self):
        # even and odd eigenvalues together are the full sine spectrum,
        # so the split is exact at matched discretization
        n_nodes = 240
        d_plus, d_minus = fredholm.parity_split(Interval(-1.0, 1.0), n_nodes)
        spectrum = nystrom_spectrum(sine_bulk(), Interval(-1.0, 1.0), n_nodes)
        assert d_plus * d_minus == pytest.approx(
            fredholm.generating_value(spectrum, 1.0), abs=1e-10)

    def test_even_determinant_decreasing(self):
        values = [fredholm.parity_split(Interval(-s, s))[0]
                  for s in np.arange(0.25, 2.01, 0.25)]
        assert np.all(np.diff(values) < 0.0)


class TestGaudinSplit:
    def test_matches_parity_split(self):
        profile = lambda x: fredholm.e2_bulk_det(2.0 * x) if x > 0.0 else 1.0
        g_plus, g_minus = fredholm.gaudin_split(profile, 0.5)
        d_plus, d_minus = fredholm.parity_split(Interval(-0.5, 0.5))
        assert g_plus == pytest.approx(d_plus, abs=1e-6)
        assert g_minus == pytest.approx(d_minus, abs=1e-6)

    def test_inconsistent_profile_rejected(self):
        # a profile with convex log cannot be a gap probability
        with pytest.raises(NumericError):
            fredholm.gaudin_split(lambda x: math.exp(x * x), 0.5)


class TestGapEvaluators:
    def test_values_at_zero(self):
        assert fredholm.e2_bulk_det(0.0) == 1.0
        assert fredholm.e1_bulk_det(0.0) == 1.0
        assert fredholm.e4_bulk_det(0.0) == 1.0

    def test_e4_half_sum_identity(self):
        # E4(0; s) = (E1(0; 2s) + E2(0; 2s)/E1(0; 2s)) / 2 where the right
        # side uses profiles on the doubled interval
        s = 0.8
        e4 = fredholm.e4_bulk_det(s)
        e1 = fredholm.e1_bulk_det(s)
        e2 = fredholm.e2_bulk_det(2.0 * s)
        assert e4 == pytest.approx(0.5 * (e1 + e2 / e1), abs=1e-10)

    def test_e2_frozen_value(self):
        # regression pin for the length-1 sine determinant
        assert fredholm.e2_bulk_det(1.0) == pytest.approx(
            0.17021742137918544, abs=1e-12)

    def test_zero_length_determinant(self):
        assert fredholm.fredholm_det(sine_bulk(), Interval(0.3, 0.3)) == 1.0


class TestRhoK:
    def test_single_point(self):
        assert fredholm.rho_k_bulk([0.4]) == pytest.approx(1.0, abs=1e-15)

    def test_pair(self):
        s = 0.6
        expected = 1.0 - (math.sin(math.pi * s) / (math.pi * s)) ** 2
        assert fredholm.rho_k_bulk([0.0, s]) == pytest.approx(expected,
                                                              abs=1e-14)

    def test_triple_against_cofactor_expansion(self):
        pts = [0.0, 0.3, 0.9]
        k = np.sinc(np.subtract.outer(pts, pts))
        det = (k[0, 0] * (k[1, 1] * k[2, 2] - k[1, 2] * k[2, 1])
               - k[0, 1] * (k[1, 0] * k[2, 2] - k[1, 2] * k[2, 0])
               + k[0, 2] * (k[1, 0] * k[2, 1] - k[1, 1] * k[2, 0]))
        assert fredholm.rho_k_bulk(pts) == pytest.approx(det, abs=1e-12)

    def test_repeated_points_rejected(self):
        with pytest.raises(ArgumentError):
            fredholm.rho_k_bulk([0.5, 0.5 + 1e-13])


class TestSpacingFromGaps:
    def test_constant_column_has_zero_density(self):
        grid = np.arange(0.0, 0.1, 2e-3)
        table = fredholm.SpacingTable(s_grid=grid)
        table.add_column("E0", np.ones_like(grid))
        assert np.max(np.abs(fredholm.spacing_from_gaps(table, 0))) == 0.0

    def test_order_zero_matches_direct_density(self):
        grid = np.arange(0.9, 1.1 + 1e-12, 5e-3)
        table = fredholm.SpacingTable(s_grid=grid)
        table.add_column("E0", [fredholm.e2_bulk_det(s) for s in grid])
        p = fredholm.spacing_from_gaps(table, 0)
        mid = np.searchsorted(grid, 1.0)
        assert p[mid] == pytest.approx(painleve.p2_direct(1.0), abs=1e-4)

    def test_order_one_smaller_at_small_s(self):
        # two intervening constraints repel harder near zero
        grid = np.arange(5e-3, 0.2 + 1e-12, 5e-3)
        e0, e1 = [], []
        for s in grid:
            spectrum = fredholm._converged_spectrum(sine_bulk(),
                                                    Interval(-s / 2, s / 2))
            e0.append(fredholm.gap_n(spectrum, 0).value)
            e1.append(fredholm.gap_n(spectrum, 1).value)
        table = fredholm.SpacingTable(s_grid=grid)
        table.add_column("E0", e0)
        table.add_column("E1", e1)
        p0 = fredholm.spacing_from_gaps(table, 0)
        p1 = fredholm.spacing_from_gaps(table, 1)
        assert np.all(p1 <= p0)

    def test_missing_column_rejected(self):
        table = fredholm.SpacingTable(s_grid=np.arange(0.0, 0.1, 2e-3))
        table.add_column("E0", np.ones(50))
        with pytest.raises(ArgumentError):
            fredholm.spacing_from_gaps(table, 1)


class TestSpacingTable:
    def test_non_uniform_grid_rejected(self):
        with pytest.raises(ArgumentError):
            fredholm.SpacingTable(s_grid=np.array([0.0, 0.1, 0.3]))

    def test_column_length_mismatch(self):
        table = fredholm.SpacingTable(s_grid=np.array([0.0, 0.1, 0.2]))
        with pytest.raises(ArgumentError):
            table.add_column("E0", [1.0, 0.9])

    def test_csv_round_trip_is_bit_exact(self):
        grid = np.arange(0.0, 1.0 + 1e-12, 0.25)
        table = fredholm.SpacingTable(s_grid=grid,
                                      metadata={"method": "unit-test"})
        table.add_column("E2", [fredholm.e2_bulk_det(s) for s in grid])
        text = table.to_csv_text()
        parsed = fredholm.SpacingTable.from_csv(io.StringIO(text))
        assert parsed.to_csv_text() == text
        assert parsed.metadata["method"] == "unit-test"

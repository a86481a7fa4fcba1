"""Tridiagonal ensemble sampling, unfolding, and histogram statistics."""

import io
import math

import numpy as np
import pytest
from scipy import stats

from spacing_lab import ArgumentError, Interval, UnsupportedError, montecarlo
from spacing_lab.montecarlo import (
    SpectrumSample,
    build_histogram,
    central_spacing,
    chi_square_test,
    sample_ensemble,
    sample_goe,
    semicircle_density,
    unfold,
)


def _pooled_central_spacings(n, reps, seed, order=0):
    out = []
    for sample in sample_ensemble(n, reps, seed):
        out.extend(central_spacing(unfold(sample), order))
    return np.asarray(out)


class TestSampling:
    def test_deterministic_in_seed(self):
        a = sample_goe(13, 7)
        b = sample_goe(13, 7)
        assert np.array_equal(a.raw, b.raw)

    def test_rank_one_moments(self):
        # a rank-1 draw is a single standard normal
        values = np.array([s.raw[0] for s in sample_ensemble(1, 100_000, 7)])
        assert abs(values.mean()) <= 0.02
        assert abs(values.var() - 1.0) <= 0.02

    def test_raw_spectrum_ascending(self):
        sample = sample_goe(25, 3)
        assert np.all(np.diff(sample.raw) > 0.0)

    def test_rank_validation(self):
        with pytest.raises(ArgumentError):
            sample_goe(0, 1)

    def test_ensemble_worker_count_invisible(self):
        serial = sample_ensemble(13, 600, 11, workers=1)
        threaded = sample_ensemble(13, 600, 11, workers=4)
        assert len(serial) == len(threaded) == 600
        for a, b in zip(serial, threaded):
            assert np.array_equal(a.raw, b.raw)

    def test_rank_two_spacing_vanishes_linearly(self):
        # log-log slope of the small-spacing histogram; the weighted fit
        # keeps the sparse leftmost bins from dominating
        samples = sample_ensemble(2, 150_000, 42)
        spacings = np.array([s.raw[1] - s.raw[0] for s in samples])
        counts, edges = np.histogram(spacings[spacings < 0.4], bins=8,
                                     range=(0.0, 0.4))
        centers = 0.5 * (edges[1:] + edges[:-1])
        slope = np.polyfit(np.log(centers), np.log(counts), 1,
                           w=np.sqrt(counts))[0]
        assert slope == pytest.approx(1.0, abs=0.1)

    def test_semicircle_profile(self):
        # bulk bins only: at rank 13 the spectrum edge is genuinely fuzzy,
        # so the outermost bins reflect finite-size spill, not error
        n = 13
        limit = math.sqrt(2.0 * n)
        samples = sample_ensemble(n, 10_000, 3)
        eigenvalues = np.concatenate([s.raw for s in samples])
        hist = build_histogram(eigenvalues, 0.25, Interval(-limit, limit))
        averaged = np.empty(hist.counts.size)
        for i, (a, b) in enumerate(zip(hist.bin_edges[:-1],
                                       hist.bin_edges[1:])):
            xs = np.linspace(a, b, 21)[1::2]
            averaged[i] = np.mean(semicircle_density(xs, n)) / n
        bulk = np.abs(hist.centers) <= 4.5
        deviation = np.max(np.abs(hist.density - averaged)[bulk])
        peak = limit / math.pi / n
        assert deviation <= 0.05 * peak

    def test_gamma_draw_moments(self):
        # the off-diagonal entries square to these draws
        rng = montecarlo._rng_for(99)
        for shape in (0.5, 1.0, 5.0):
            draws = rng.gamma(shape=shape, scale=1.0, size=1_000_000)
            assert abs(draws.mean() - shape) <= 0.01 * shape
            assert abs(draws.var() - shape) <= 0.01 * shape


class TestUnfold:
    def test_constant_density_is_identity(self):
        sample = SpectrumSample(n=4, raw=np.array([0.3, 0.9, 1.4, 2.0]))
        unfolded = unfold(sample, density=lambda x: np.ones_like(x)).unfolded
        assert np.allclose(unfolded, sample.raw, atol=1e-15)

    def test_mean_central_spacing_is_unity(self):
        spacings = _pooled_central_spacings(13, 2000, 42)
        assert 0.95 <= spacings.mean() <= 1.05

    def test_rank_doubling_leaves_histogram_unchanged(self):
        # bulk universality: the central-spacing law does not depend on
        # rank once the ensembles are unfolded (two-sample chi-square)
        a = _pooled_central_spacings(13, 2000, 5)
        b = _pooled_central_spacings(27, 2000, 6)
        edges = np.arange(0.0, 3.2, 0.2)
        ca, _ = np.histogram(a, edges)
        cb, _ = np.histogram(b, edges)
        ca[-1] += int((a >= edges[-1]).sum())
        cb[-1] += int((b >= edges[-1]).sum())
        keep = (ca + cb) >= 10
        ca, cb = ca[keep], cb[keep]
        ra = math.sqrt(cb.sum() / ca.sum())
        stat = float(np.sum((ca * ra - cb / ra) ** 2 / (ca + cb)))
        assert stats.chi2.sf(stat, keep.sum() - 1) > 0.01

    def test_too_small_rank(self):
        with pytest.raises(ArgumentError):
            unfold(SpectrumSample(n=1, raw=np.array([0.0])))


class TestCentralSpacing:
    def _sample_with_unfolded(self, values):
        values = np.asarray(values, dtype=float)
        return SpectrumSample(n=values.size, raw=values, unfolded=values)

    def test_order_zero_flanks_the_middle(self):
        sample = self._sample_with_unfolded(np.arange(13.0) ** 1.1)
        gaps = central_spacing(sample, 0)
        u = sample.unfolded
        assert gaps == pytest.approx([u[6] - u[5], u[7] - u[6]])

    def test_order_one_telescopes(self):
        sample = self._sample_with_unfolded(np.cumsum(np.linspace(0.5, 1.5, 13)))
        assert central_spacing(sample, 1)[0] == pytest.approx(
            np.sum(central_spacing(sample, 0)), rel=1e-15)

    def test_positive(self):
        sample = unfold(sample_goe(13, 21))
        assert np.all(central_spacing(sample, 0) > 0.0)

    def test_rank_constraints(self):
        with pytest.raises(ArgumentError):
            central_spacing(self._sample_with_unfolded(np.arange(12.0)), 0)
        with pytest.raises(ArgumentError):
            central_spacing(self._sample_with_unfolded(np.arange(3.0)), 1)
        with pytest.raises(UnsupportedError):
            central_spacing(self._sample_with_unfolded(np.arange(13.0)), 2)

    def test_frozen_sample(self):
        # regression pin for the rank-13 seed-1 draw
        sample = unfold(sample_goe(13, 1))
        assert central_spacing(sample, 0) == pytest.approx(
            [1.13338467, 1.24494007], abs=1e-6)
        assert central_spacing(sample, 1) == pytest.approx([2.37832474],
                                                           abs=1e-6)


class TestHistogram:
    def test_single_point(self):
        hist = build_histogram([0.5], 1.0, Interval(0.0, 2.0))
        assert hist.counts.tolist() == [1, 0]
        assert hist.density.tolist() == [1.0, 0.0]

    def test_density_normalized(self):
        rng = np.random.default_rng(8)
        hist = build_histogram(rng.uniform(0.0, 3.0, 1000), 0.4,
                               Interval(0.0, 3.0))
        assert np.sum(hist.density * hist.bin_width) == pytest.approx(
            1.0, abs=1e-12)

    def test_overflow_tally(self):
        hist = build_histogram([0.5, 1.5, 9.0], 1.0, Interval(0.0, 2.0))
        assert hist.overflow == 1
        assert int(hist.counts.sum()) == 2

    def test_empty_data_rejected(self):
        with pytest.raises(ArgumentError):
            build_histogram([], 0.1, Interval(0.0, 1.0))

    def test_csv_columns(self):
        hist = build_histogram([0.5, 1.2], 1.0, Interval(0.0, 2.0))
        out = io.StringIO()
        hist.to_csv(out, metadata={"seed": 42})
        lines = out.getvalue().splitlines()
        assert lines[0] == "# seed: 42"
        assert lines[1] == "bin_left,bin_right,count,density"
        assert len(lines) == 4


class TestChiSquare:
    def test_exponential_data_accepts_exponential_model(self):
        rng = np.random.default_rng(12)
        hist = build_histogram(rng.exponential(1.0, 20_000), 0.25,
                               Interval(0.0, 5.0))
        stat, p, dof = chi_square_test(hist, lambda s: math.exp(-s))
        assert p > 0.01
        assert dof >= 10

    def test_wrong_model_rejected(self):
        rng = np.random.default_rng(12)
        hist = build_histogram(rng.exponential(1.0, 20_000), 0.25,
                               Interval(0.0, 5.0))
        _, p, _ = chi_square_test(
            hist, lambda s: 2.0 * math.exp(-2.0 * s))
        assert p < 1e-6

    def test_spacing_histogram_accepts_surmise(self):
        spacings = _pooled_central_spacings(13, 2000, 42)
        hist = build_histogram(spacings, 0.1, Interval(0.0, 4.0))
        from spacing_lab.surmise import wigner_surmise
        _, p, _ = chi_square_test(hist, lambda s: wigner_surmise(1, s))
        assert p > 0.01

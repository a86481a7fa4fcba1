"""Cross-route validation suite.

Every check here compares independent computational routes (determinantal,
nonlinear-ODE, closed-form, empirical) of the same quantity, with pinned
tolerances.  The CLI `verify` command and the acceptance tests both run
these; each function returns a CriterionResult rather than raising on
disagreement.
"""

from __future__ import annotations

import functools
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import fredholm, kernels, montecarlo, painleve, sequences, surmise
from .quadrature import Interval, nystrom_spectrum

_STENCIL_H = 1e-3
_MC_SEED = 42


@dataclass
class CriterionResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def __str__(self):
        flag = "PASS" if self.passed else "FAIL"
        parts = ", ".join(f"{k}={v}" for k, v in self.details.items())
        return f"[{flag}] {self.name}: {parts}"


def _fmt(x):
    return float(f"{x:.3g}")


@functools.lru_cache(maxsize=None)
def _e2_det(length: float) -> float:
    return fredholm.e2_bulk_det(length)


@functools.lru_cache(maxsize=None)
def _d_plus(s: float) -> float:
    return fredholm.fredholm_det(kernels.sine_even(), Interval(-s, s))


@functools.lru_cache(maxsize=None)
def _d_minus(s: float) -> float:
    return fredholm.fredholm_det(kernels.sine_odd(), Interval(-s, s))


def _stencil_second(f, s, h=_STENCIL_H):
    v = [f(s + k * h) for k in (-2, -1, 0, 1, 2)]
    return (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h)


def check_e2_cross_route() -> CriterionResult:
    """Sine-kernel determinant vs the bulk sigma evaluation, |.| <= 1e-6."""
    tol = 1e-6
    t0 = time.perf_counter()
    grid = np.arange(0.25, 2.01, 0.25)
    worst = max(abs(_e2_det(float(s)) - painleve.e2_bulk(float(s)))
                for s in grid)
    elapsed = time.perf_counter() - t0
    return CriterionResult(
        "e2-cross-route", worst <= tol and elapsed < 60.0,
        {"worst": _fmt(worst), "tol": tol, "seconds": _fmt(elapsed)})


def check_parity_identities() -> CriterionResult:
    """D+ * D- = E2 at 1e-10 (shared rule); log-split recovery at 1e-6."""
    tol_product, tol_split = 1e-10, 1e-6
    worst_product = worst_split = 0.0
    for s in (0.5, 1.0):
        iv = Interval(-s, s)
        n = 320
        d_plus = fredholm.generating_value(
            nystrom_spectrum(kernels.sine_even(), iv, n), 1.0)
        d_minus = fredholm.generating_value(
            nystrom_spectrum(kernels.sine_odd(), iv, n), 1.0)
        e2 = fredholm.generating_value(
            nystrom_spectrum(kernels.sine_bulk(), iv, n), 1.0)
        worst_product = max(worst_product, abs(d_plus * d_minus - e2))
        g_plus, g_minus = fredholm.gaudin_split(
            lambda x: _e2_det(2.0 * x) if x > 0 else 1.0, s)
        worst_split = max(worst_split, abs(g_plus - _d_plus(s)),
                          abs(g_minus - _d_minus(s)))
    ok = worst_product <= tol_product and worst_split <= tol_split
    return CriterionResult(
        "parity-identities", ok,
        {"worst_product": _fmt(worst_product), "tol_product": tol_product,
         "worst_split": _fmt(worst_split), "tol_split": tol_split})


def check_e1_e4_dual_route() -> CriterionResult:
    """Hard-edge transcendent vs parity determinants for E1 and E4."""
    tol = 1e-6
    grid = np.arange(0.25, 2.01, 0.25)
    worst_e1 = max(abs(_d_plus(float(s)) - painleve.e1_bulk(float(s)))
                   for s in grid)
    worst_e4 = max(abs(0.5 * (_d_plus(float(s)) + _d_minus(float(s)))
                       - painleve.e4_bulk(float(s))) for s in grid)
    return CriterionResult(
        "e1-e4-dual-route", worst_e1 <= tol and worst_e4 <= tol,
        {"worst_e1": _fmt(worst_e1), "worst_e4": _fmt(worst_e4), "tol": tol})


def check_density_stencils() -> CriterionResult:
    """Direct p1, p2, p4 against 5-point second differences of gap profiles."""
    tol = 1e-4
    grid = np.arange(0.2, 2.01, 0.2)
    worst = {"p1": 0.0, "p2": 0.0, "p4": 0.0}
    for s in grid:
        s = float(s)
        worst["p2"] = max(worst["p2"], abs(
            painleve.p2_direct(s) - _stencil_second(_e2_det, s)))
        worst["p1"] = max(worst["p1"], abs(
            painleve.p1_direct(s)
            - _stencil_second(lambda u: _d_plus(u / 2.0), s)))
        worst["p4"] = max(worst["p4"], abs(
            painleve.p4_direct(s) - _stencil_second(
                lambda u: 0.5 * (_d_plus(u) + _d_minus(u)), s)))
    ok = all(v <= tol for v in worst.values())
    return CriterionResult(
        "density-stencils", ok,
        {k: _fmt(v) for k, v in worst.items()} | {"tol": tol})


def check_surmise_accuracy() -> CriterionResult:
    """|p1 - beta=1 surmise| <= 0.02 on [0, 3]."""
    tol = 0.02
    grid = np.arange(0.0, 3.0001, 0.01)
    worst = max(abs(painleve.p1_direct(float(s))
                    - surmise.wigner_surmise(1, float(s))) for s in grid)
    return CriterionResult("surmise-accuracy", worst <= tol,
                           {"worst": _fmt(worst), "tol": tol})


def check_spacing1_identity() -> CriterionResult:
    """p4(0;s) = 2 p1(1;2s) with p1(1;.) from determinantal gap profiles."""
    tol = 5e-4
    worst = 0.0
    for s in (0.4, 0.7, 1.0):
        det_p1_gap1 = _stencil_second(
            lambda u: _d_plus(u / 2.0) + _d_minus(u / 2.0), 2.0 * s)
        worst = max(worst, abs(painleve.p4_direct(s) - 2.0 * det_p1_gap1))
    return CriterionResult("spacing1-identity", worst <= tol,
                           {"worst": _fmt(worst), "tol": tol})


def check_sum_rule() -> CriterionResult:
    """sum_{n<=8} p2(n;s) equals 1 - sinc^2(pi s) within 2e-3 on [0.1, 2]."""
    tol = 2e-3
    weights = np.array([(9 - j) * (10 - j) / 2.0 for j in range(9)])

    @functools.lru_cache(maxsize=None)
    def cumulative(u: float) -> float:
        spectrum = nystrom_spectrum(kernels.sine_bulk(),
                                    Interval(-u / 2.0, u / 2.0), 240)
        return float(sum(w * fredholm.gap_n(spectrum, j).value
                         for j, w in enumerate(weights)))

    worst = 0.0
    for s in np.arange(0.1, 2.001, 0.1):
        s = float(s)
        total = _stencil_second(cumulative, s)
        target = 1.0 - np.sinc(s) ** 2        # np.sinc(x) = sin(pi x)/(pi x)
        worst = max(worst, abs(total - target))
    return CriterionResult("spacing-sum-rule", worst <= tol,
                           {"worst": _fmt(worst), "tol": tol})


def check_am5_identity() -> CriterionResult:
    """Hard-edge derivative identity residual <= 1e-7 at s=1, both orders."""
    tol = 1e-7
    worst = max(abs(painleve.am5_identity_residual(1.0, a))
                for a in (-0.5, 0.5))
    return CriterionResult("hard-edge-derivative-identity", worst <= tol,
                           {"worst": _fmt(worst), "tol": tol})


def check_series_layers() -> CriterionResult:
    """Each boundary series leaves relative ODE residual <= 1e-8 at t_switch."""
    tol = 1e-8
    cases = [
        (painleve.SIGMA_JMMS, (1.0,)),
        (painleve.SIGMA_HARD, (-0.5, 1.0)),
        (painleve.SIGMA_HARD, (0.5, 1.0)),
        (painleve.SIGMA_NN, (1.0, 1.0)),
        (painleve.U_TILDE, ()),
        (painleve.V_TILDE, ()),
        (painleve.V_P2, ()),
    ]
    residuals = {}
    for eq, params in cases:
        problem = painleve.build_problem(eq, params)
        residuals[eq + str(params)] = painleve.series_residual(problem)
    worst = max(residuals.values())
    return CriterionResult("series-boundary-layers", worst <= tol,
                           {"worst": _fmt(worst), "tol": tol})


def check_montecarlo_histograms() -> CriterionResult:
    """2000 rank-13 spectra: central spacings match the exact densities."""
    p_floor = 0.01
    t0 = time.perf_counter()
    samples = montecarlo.sample_ensemble(13, 2000, _MC_SEED)
    pooled, skipped = [], []
    for sample in samples:
        unfolded = montecarlo.unfold(sample)
        pooled.extend(montecarlo.central_spacing(unfolded, 0))
        skipped.extend(montecarlo.central_spacing(unfolded, 1))
    pooled = np.array(pooled)
    skipped = np.array(skipped)
    h0 = montecarlo.build_histogram(
        pooled, 0.1, Interval(0.0, float(np.max(pooled)) + 0.1))
    h1 = montecarlo.build_histogram(
        skipped, 0.1, Interval(0.0, float(np.max(skipped)) + 0.1))
    _, p0, _ = montecarlo.chi_square_test(h0, painleve.p1_direct)
    _, p1, _ = montecarlo.chi_square_test(
        h1, lambda s: 0.5 * painleve.p4_direct(s / 2.0))
    elapsed = time.perf_counter() - t0
    ok = p0 > p_floor and p1 > p_floor and elapsed < 30.0
    return CriterionResult(
        "montecarlo-central-spacings", ok,
        {"p_order0": _fmt(p0), "p_order1": _fmt(p1), "p_floor": p_floor,
         "seconds": _fmt(elapsed)})


def check_prime_gaps() -> CriterionResult:
    """2000 primes from 1e9+7: gap histograms within KS 0.08 of the model."""
    tol = 0.08
    window = sequences.primes_from(10 ** 9 + 7, 2000)
    ks0 = sequences.histogram_ks_distance(
        sequences.prime_spacing_histogram(window, 0),
        lambda s: 1.0 - math.exp(-s))
    ks1 = sequences.histogram_ks_distance(
        sequences.prime_spacing_histogram(window, 1),
        lambda s: 1.0 - (1.0 + s) * math.exp(-s))
    return CriterionResult(
        "prime-gap-poisson", ks0 <= tol and ks1 <= tol,
        {"ks_order0": _fmt(ks0), "ks_order1": _fmt(ks1), "tol": tol})


def check_nn_routes() -> CriterionResult:
    """Conditioned-origin gap: determinant vs sigma route; density mass 1."""
    tol_e, tol_mass = 1e-6, 1e-3
    worst = max(abs(fredholm.enn_det(s) - painleve.enn_generating(s))
                for s in (0.25, 0.5, 1.0))
    mass, _ = quad(painleve.p2_nn, 0.0, 4.0, limit=200)
    ok = worst <= tol_e and abs(mass - 1.0) <= tol_mass
    return CriterionResult(
        "nearest-neighbour-routes", ok,
        {"worst_e": _fmt(worst), "tol_e": tol_e,
         "mass": float(f"{mass:.6f}"), "tol_mass": tol_mass})


def check_csv_determinism() -> CriterionResult:
    """Identical configs yield byte-identical CSV output."""
    from . import cli

    def tabulate_once():
        buf = io.StringIO()
        config = cli.RunConfig(command="tabulate", quantity="E2",
                               method="all", s_min=0.0, s_max=1.0,
                               s_step=0.25)
        cli.write_tabulate(config, buf)
        return buf.getvalue()

    def sample_once():
        buf = io.StringIO()
        config = cli.RunConfig(command="sample", n=13, reps=64, seed=7)
        cli.write_sample(config, buf)
        return buf.getvalue()

    ok = (tabulate_once() == tabulate_once()
          and sample_once() == sample_once())
    return CriterionResult("csv-determinism", ok, {"bit_identical": ok})


ALL_CRITERIA = (
    check_e2_cross_route,
    check_parity_identities,
    check_e1_e4_dual_route,
    check_density_stencils,
    check_surmise_accuracy,
    check_spacing1_identity,
    check_sum_rule,
    check_am5_identity,
    check_series_layers,
    check_montecarlo_histograms,
    check_prime_gaps,
    check_nn_routes,
    check_csv_determinism,
)


def run_all(names=None):
    """Run the full suite (or the named subset) and return the results.

    Subset names match the check function names (without the check_ prefix);
    hyphens and underscores are interchangeable so the printed criterion
    names can be pasted back in.
    """
    if names is not None:
        names = {str(n).replace("-", "_") for n in names}
    results = []
    for fn in ALL_CRITERIA:
        label = fn.__name__.removeprefix("check_")
        if names is not None and label not in names:
            continue
        results.append(fn())
    return results

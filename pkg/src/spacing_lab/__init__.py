"""Eigenvalue spacing distributions by mutually validating routes.

Gap probabilities E(n; s) and spacing densities p(n; s) of the classical
random-matrix symmetry classes, each computable two or three independent
ways: Fredholm determinants of integral-operator spectra (``fredholm``),
nonlinear-ODE sigma representations (``painleve``), closed-form surmises
(``surmise``), sampled tridiagonal ensembles (``montecarlo``) and
number-theoretic point sequences (``sequences``).  The ``verify`` module
cross-checks the routes against each other; the ``cli`` module exposes
everything as the ``spacing-lab`` command.
"""

from importlib import metadata as _metadata

try:
    __version__ = _metadata.version("spacing-lab")
except _metadata.PackageNotFoundError:      # running from a source checkout
    __version__ = "0.0.0"

from .errors import (ArgumentError, ConsistencyError, DerivationError,
                     FormatError, NumericError, SpacingLabError,
                     StiffnessError, UnsupportedError)
from .quadrature import (FredholmSpectrum, Interval, QuadratureRule,
                         gauss_legendre, nystrom_spectrum)
from .kernels import (KernelSpec, hard_edge_bessel, kernel_matrix, sine_bulk,
                      sine_even, sine_odd, spectrum_singularity)
from .fredholm import (GapProfile, SpacingTable, e1_bulk_det, e2_bulk_det,
                       e4_bulk_det, enn_det, fredholm_det, gap_n,
                       gaudin_split, generating_value, parity_split,
                       rho_k_bulk, spacing_from_gaps)
from .painleve import (EQUATION_IDS, PainleveProblem, PainleveSolution,
                       SIGMA_HARD, SIGMA_HARD_GEN, SIGMA_JMMS, SIGMA_NN,
                       U_TILDE, V_P2, V_TILDE, am5_identity_residual,
                       build_problem, e1_bulk, e2_bulk, e2_hard, e4_bulk,
                       enn_generating, extend_series, integrate, p1_direct,
                       p1_gap1, p2_direct, p2_nn, p4_direct, series_residual)
from .surmise import (SurmiseCoefficients, gaussian_class_coefficients,
                      p1_spacing1_approx, poisson_p, solve_ansatz,
                      wigner_surmise)
from .montecarlo import (Histogram, SpectrumSample, build_histogram,
                         central_spacing, chi_square_test, sample_ensemble,
                         sample_goe, semicircle_density, unfold)
from .sequences import (PrimeWindow, ZeroDataset, histogram_ks_distance,
                        ks_distance, load_zeros, miller_rabin, nn_statistic,
                        poisson_nn_density, prime_spacing_histogram,
                        primes_from, unfold_zeros)
from .verify import CriterionResult, run_all

__all__ = [
    "__version__",
    # errors
    "SpacingLabError", "ArgumentError", "UnsupportedError", "NumericError",
    "FormatError", "ConsistencyError", "StiffnessError", "DerivationError",
    # quadrature
    "Interval", "QuadratureRule", "FredholmSpectrum", "gauss_legendre",
    "nystrom_spectrum",
    # kernels
    "KernelSpec", "sine_bulk", "sine_even", "sine_odd", "hard_edge_bessel",
    "spectrum_singularity", "kernel_matrix",
    # fredholm
    "GapProfile", "SpacingTable", "generating_value", "gap_n", "fredholm_det",
    "parity_split", "gaudin_split", "e2_bulk_det", "e1_bulk_det",
    "e4_bulk_det", "enn_det", "rho_k_bulk", "spacing_from_gaps",
    # painleve
    "EQUATION_IDS", "SIGMA_JMMS", "SIGMA_HARD", "SIGMA_HARD_GEN", "SIGMA_NN",
    "U_TILDE", "V_TILDE", "V_P2", "PainleveProblem", "PainleveSolution",
    "build_problem", "integrate", "extend_series", "series_residual",
    "e2_bulk", "e2_hard", "e1_bulk", "e4_bulk", "enn_generating", "p2_nn",
    "p1_direct", "p2_direct", "p4_direct", "p1_gap1",
    "am5_identity_residual",
    # surmise
    "SurmiseCoefficients", "poisson_p", "solve_ansatz",
    "gaussian_class_coefficients", "wigner_surmise", "p1_spacing1_approx",
    # montecarlo
    "SpectrumSample", "Histogram", "sample_goe", "sample_ensemble",
    "semicircle_density", "unfold", "central_spacing", "build_histogram",
    "chi_square_test",
    # sequences
    "PrimeWindow", "ZeroDataset", "miller_rabin", "primes_from",
    "prime_spacing_histogram", "load_zeros", "unfold_zeros", "nn_statistic",
    "poisson_nn_density", "ks_distance", "histogram_ks_distance",
    # verify
    "CriterionResult", "run_all",
]

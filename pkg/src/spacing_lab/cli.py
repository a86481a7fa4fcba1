"""Command-line surface: tabulation, sampling, sequence statistics, verify.

Every command writes CSV with '#'-prefixed metadata lines (command line,
package and library versions, seeds, tolerances; never timestamps) so that
identical configs produce bit-identical files.  Exit codes: 0 success,
1 verification failure, 2 usage error, 3 data or numeric error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy

from . import (__version__, fredholm, kernels, montecarlo, painleve,
               sequences, surmise)
from . import verify as verify_mod
from .errors import ArgumentError, SpacingLabError, UnsupportedError
from .fredholm import SpacingTable
from .quadrature import Interval

_STENCIL_H = 1e-3

QUANTITIES = ("E2", "E1", "E4", "Enn", "p0", "p1gap", "p2nn", "En")
METHODS = ("fredholm", "painleve", "surmise", "all")

# quantity -> methods that can produce it (p0/p1gap gain "surmise")
_SUPPORTED = {
    "E2": ("fredholm", "painleve"),
    "E1": ("fredholm", "painleve"),
    "E4": ("fredholm", "painleve"),
    "Enn": ("fredholm", "painleve"),
    "p0": ("fredholm", "painleve", "surmise"),
    "p1gap": ("fredholm", "painleve", "surmise"),
    "p2nn": ("fredholm", "painleve"),
    "En": ("fredholm", "painleve"),
}


@dataclass
class RunConfig:
    """One resolved command invocation; field relevance depends on command."""

    command: str
    quantity: str = "E2"
    method: str = "all"
    s_min: float = 0.0
    s_max: float = 2.0
    s_step: float = 0.05
    beta: int = 1
    n: int = 0                      # gap order (tabulate En) or rank (sample)
    order: int = 0                  # spacing order for sample/primes
    reps: int = 2000
    seed: int = 42
    start: int = 10 ** 9 + 7
    count: int = 2000
    bin_width: float | None = None
    raw: bool = False
    zeros_path: str | None = None
    output_path: str | None = None
    workers: int | None = None
    det_tol: float = 1e-10
    only: tuple = ()


def _pool_size(config: RunConfig) -> int:
    env = os.environ.get("SPACING_LAB_THREADS")
    if env is not None:
        try:
            size = int(env)
        except ValueError:
            raise ArgumentError(
                f"SPACING_LAB_THREADS must be an integer, got {env!r}")
        if size < 1:
            raise ArgumentError(f"SPACING_LAB_THREADS must be >= 1, got {size}")
        return size
    if config.workers is not None:
        if config.workers < 1:
            raise ArgumentError(f"--workers must be >= 1, got {config.workers}")
        return config.workers
    return os.cpu_count() or 1


def _map_grid(fn, grid, workers: int):
    """fn over the grid, assembled in index order regardless of scheduling."""
    points = [float(s) for s in grid]
    if workers <= 1 or len(points) <= 1:
        return [fn(s) for s in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))


def _base_metadata(config: RunConfig, command_line: str) -> dict:
    return {
        "command": command_line,
        "package": f"spacing-lab {__version__}",
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


# ---------------------------------------------------------------------------
# tabulate

def _second_stencil(f, s: float, h: float = _STENCIL_H) -> float:
    if s >= 2.0 * h:
        v = [f(s + k * h) for k in (-2, -1, 0, 1, 2)]
        return (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h)
    v = [f(s + k * h) for k in range(5)]
    return (35 * v[0] - 104 * v[1] + 114 * v[2] - 56 * v[3]
            + 11 * v[4]) / (12 * h * h)


def _first_stencil(f, s: float, h: float = _STENCIL_H) -> float:
    if s >= 2.0 * h:
        return (f(s - 2 * h) - 8 * f(s - h) + 8 * f(s + h)
                - f(s + 2 * h)) / (12 * h)
    v = [f(s + k * h) for k in range(5)]
    return (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3]
            - 3 * v[4]) / (12 * h)


def _methods_for(config: RunConfig) -> tuple:
    supported = _SUPPORTED[config.quantity]
    if config.quantity == "En" and config.n > 0:
        supported = ("fredholm",)
    if config.method == "all":
        return supported
    if config.method not in supported:
        raise UnsupportedError(
            f"method {config.method!r} cannot produce {config.quantity!r}"
            + (f" at n={config.n}" if config.quantity == "En" else "")
            + f"; available: {', '.join(supported)}")
    return (config.method,)


def _cached(f):
    cache = {}

    def wrapped(u: float) -> float:
        hit = cache.get(u)
        if hit is None:
            hit = cache[u] = f(u)
        return hit

    return wrapped


def _column_fn(config: RunConfig, method: str):
    """Scalar evaluator for one (quantity, method) column."""
    tol = config.det_tol
    q = config.quantity

    def det(kernel, lo, hi):
        return fredholm.fredholm_det(kernel, Interval(lo, hi), 1.0, tol)

    if method == "fredholm":
        if q == "E2":
            return lambda s: det(kernels.sine_bulk(), -s / 2, s / 2)
        if q == "E1":
            return lambda s: det(kernels.sine_even(), -s, s)
        if q == "E4":
            return lambda s: 0.5 * (det(kernels.sine_even(), -s, s)
                                    + det(kernels.sine_odd(), -s, s))
        if q == "Enn":
            return lambda s: det(kernels.spectrum_singularity(1.0), -s, s)
        if q == "p0":
            profile = _cached({
                1: lambda u: det(kernels.sine_even(), -u / 2, u / 2),
                2: lambda u: det(kernels.sine_bulk(), -u / 2, u / 2),
                4: lambda u: 0.5 * (det(kernels.sine_even(), -u, u)
                                    + det(kernels.sine_odd(), -u, u)),
            }[config.beta])
            return lambda s: _second_stencil(profile, s)
        if q == "p1gap":
            profile = _cached(
                lambda u: det(kernels.sine_even(), -u / 2, u / 2)
                + det(kernels.sine_odd(), -u / 2, u / 2))
            return lambda s: _second_stencil(profile, s)
        if q == "p2nn":
            profile = _cached(
                lambda u: det(kernels.spectrum_singularity(1.0), -u, u))
            return lambda s: -_first_stencil(profile, s)
        if q == "En":
            n = config.n

            def en(s: float) -> float:
                if s == 0.0:
                    return 1.0 if n == 0 else 0.0
                spectrum = fredholm._converged_spectrum(
                    kernels.sine_bulk(), Interval(-s / 2, s / 2), tol)
                return fredholm.gap_n(spectrum, n).value

            return en
    if method == "painleve":
        if q == "E2":
            return painleve.e2_bulk
        if q == "E1":
            return painleve.e1_bulk
        if q == "E4":
            return painleve.e4_bulk
        if q == "Enn":
            return painleve.enn_generating
        if q == "p0":
            return {1: painleve.p1_direct, 2: painleve.p2_direct,
                    4: painleve.p4_direct}[config.beta]
        if q == "p1gap":
            return painleve.p1_gap1
        if q == "p2nn":
            return painleve.p2_nn
        if q == "En":                           # n > 0 filtered upstream
            return painleve.e2_bulk
    if method == "surmise":
        if q == "p0":
            return lambda s: surmise.wigner_surmise(config.beta, s)
        if q == "p1gap":
            return surmise.p1_spacing1_approx
    raise UnsupportedError(f"method {method!r} cannot produce {q!r}")


def _tabulate_command_line(config: RunConfig) -> str:
    parts = [f"spacing-lab tabulate --quantity {config.quantity}",
             f"--method {config.method}",
             f"--s-min {config.s_min:g} --s-max {config.s_max:g}",
             f"--s-step {config.s_step:g}"]
    if config.quantity == "p0":
        parts.insert(1, f"--beta {config.beta}")
    if config.quantity == "En":
        parts.insert(1, f"--n {config.n}")
    return " ".join(parts)


def write_tabulate(config: RunConfig, stream):
    """Write the tabulate CSV; returns (table, pairwise max deviations)."""
    if config.s_min < 0.0:
        raise ArgumentError(f"--s-min must be >= 0, got {config.s_min}")
    if config.s_step <= 0.0:
        raise ArgumentError(f"--s-step must be > 0, got {config.s_step}")
    if config.s_max < config.s_min:
        raise ArgumentError("--s-max must be >= --s-min")
    if config.quantity == "p0" and config.beta not in (1, 2, 4):
        raise ArgumentError(f"--beta must be 1, 2 or 4, got {config.beta}")
    if config.quantity == "En" and config.n < 0:
        raise ArgumentError(f"--n must be >= 0, got {config.n}")
    n_points = int(round((config.s_max - config.s_min) / config.s_step)) + 1
    grid = config.s_min + config.s_step * np.arange(n_points)
    methods = _methods_for(config)

    metadata = _base_metadata(config, _tabulate_command_line(config))
    metadata["det_tol"] = f"{config.det_tol:g}"
    if config.quantity in ("p0", "p1gap", "p2nn"):
        metadata["stencil_h"] = f"{_STENCIL_H:g}"
    table = SpacingTable(s_grid=grid, metadata=metadata)

    workers = _pool_size(config)
    for method in methods:
        fn = _column_fn(config, method)
        fn(float(grid[-1]))     # deterministic cache warm-up at the largest s
        table.add_column(f"{config.quantity}_{method}", _map_grid(fn, grid, workers))

    deviations = {}
    for i, m_i in enumerate(methods):
        for m_j in methods[i + 1:]:
            delta = np.abs(table.columns[f"{config.quantity}_{m_i}"]
                           - table.columns[f"{config.quantity}_{m_j}"])
            deviations[(m_i, m_j)] = float(np.max(delta))
    table.to_csv(stream)
    return table, deviations


# ---------------------------------------------------------------------------
# sample / primes / zeros histogram CSVs

def _write_histogram_csv(stream, metadata: dict, hist, overlays: dict):
    """bin_left,bin_right,count,density plus one column per overlay curve."""
    for key, value in metadata.items():
        stream.write(f"# {key}: {value}\n")
    names = ["bin_left", "bin_right", "count", "density"] + list(overlays)
    stream.write(",".join(names) + "\n")
    columns = [hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts,
               hist.density] + [np.asarray(v, dtype=float)
                                for v in overlays.values()]
    for row in zip(*columns):
        stream.write(",".join(f"{v:.17g}" for v in row) + "\n")


def write_sample(config: RunConfig, stream):
    """Ensemble central-spacing histogram with exact and surmise overlays."""
    if config.n < 3 or config.n % 2 == 0:
        raise ArgumentError(
            f"--n must be odd and >= 3 so a middle eigenvalue exists, "
            f"got {config.n}")
    if config.order not in (0, 1):
        raise ArgumentError(f"--order must be 0 or 1, got {config.order}")
    spacings = []
    for sample in montecarlo.sample_ensemble(config.n, config.reps,
                                             config.seed,
                                             workers=_pool_size(config)):
        spacings.extend(montecarlo.central_spacing(montecarlo.unfold(sample),
                                                   config.order))
    spacings = np.asarray(spacings)
    width = config.bin_width if config.bin_width is not None else 0.1
    hist = montecarlo.build_histogram(
        spacings, width, Interval(0.0, float(np.max(spacings)) + width))
    centers = hist.centers
    if config.order == 0:
        exact_fn, surmise_fn = painleve.p1_direct, \
            (lambda s: surmise.wigner_surmise(1, s))
    else:
        exact_fn, surmise_fn = painleve.p1_gap1, surmise.p1_spacing1_approx
    exact_fn(float(centers[-1]))                # deterministic cache warm-up
    overlays = {
        "exact": [exact_fn(float(c)) for c in centers],
        "surmise": [surmise_fn(float(c)) for c in centers],
    }
    metadata = _base_metadata(config, (
        f"spacing-lab sample --n {config.n} --reps {config.reps} "
        f"--seed {config.seed} --order {config.order} --bin-width {width:g}"))
    metadata["seed"] = config.seed
    metadata["overflow"] = hist.overflow
    _write_histogram_csv(stream, metadata, hist, overlays)


def write_primes(config: RunConfig, stream):
    """Prime-gap histogram in s-units (or the raw window with --raw)."""
    if config.order not in (0, 1):
        raise ArgumentError(f"--order must be 0 or 1, got {config.order}")
    window = sequences.primes_from(config.start, config.count)
    command = (f"spacing-lab primes --start {config.start} "
               f"--count {config.count} --order {config.order}"
               + (" --raw" if config.raw else ""))
    metadata = _base_metadata(config, command)
    if config.raw:
        for key, value in metadata.items():
            stream.write(f"# {key}: {value}\n")
        window.to_csv(stream)
        return
    hist = sequences.prime_spacing_histogram(window, config.order,
                                             config.bin_width)
    centers = hist.centers
    if config.order == 0:
        poisson = np.exp(-centers)
    else:
        poisson = centers * np.exp(-centers)
    metadata["bin_width"] = f"{hist.bin_width:.17g}"
    metadata["overflow"] = hist.overflow
    _write_histogram_csv(stream, metadata, hist, {"poisson": poisson})


def write_zeros(config: RunConfig, stream):
    """Nearest-neighbour statistic of unfolded zero ordinates vs both laws."""
    data = sequences.load_zeros(config.zeros_path)
    unfolded = sequences.unfold_zeros(data)
    stats = sequences.nn_statistic(unfolded)
    width = config.bin_width if config.bin_width is not None else 0.1
    hist = montecarlo.build_histogram(
        stats, width, Interval(0.0, float(np.max(stats)) + width))
    painleve.enn_generating(float(np.max(stats)))   # deterministic warm-up
    ks_exact = sequences.ks_distance(
        stats, lambda s: 1.0 - painleve.enn_generating(s))
    ks_poisson = sequences.ks_distance(
        stats, lambda s: 1.0 - math.exp(-2.0 * s))
    centers = hist.centers
    overlays = {
        "exact": [painleve.p2_nn(float(c)) for c in centers],
        "poisson": sequences.poisson_nn_density(centers),
    }
    metadata = _base_metadata(config, (
        f"spacing-lab zeros --file {config.zeros_path} --bin-width {width:g}"))
    metadata["ordinates"] = len(data.ordinates)
    metadata["ks_exact"] = f"{ks_exact:.6f}"
    metadata["ks_poisson"] = f"{ks_poisson:.6f}"
    _write_histogram_csv(stream, metadata, hist, overlays)


# ---------------------------------------------------------------------------
# dispatch

def run(config: RunConfig) -> int:
    """Execute one config; returns the process exit code."""
    if config.command == "verify":
        results = verify_mod.run_all(set(config.only) or None)
        if not results:
            print(f"no criteria match {', '.join(config.only)}",
                  file=sys.stderr)
            return 2
        for result in results:
            print(result)
        failed = sum(not r.passed for r in results)
        print(f"{len(results) - failed}/{len(results)} criteria passed")
        return 1 if failed else 0

    writers = {"tabulate": write_tabulate, "sample": write_sample,
               "primes": write_primes, "zeros": write_zeros}
    writer = writers[config.command]
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as stream:
            outcome = writer(config, stream)
    else:
        outcome = writer(config, sys.stdout)
    if config.command == "tabulate":
        _, deviations = outcome
        for (m_i, m_j), delta in deviations.items():
            print(f"max |{config.quantity}_{m_i} - {config.quantity}_{m_j}| "
                  f"= {delta:.3g}", file=sys.stderr)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spacing-lab",
        description="Eigenvalue spacing distributions by independent routes: "
                    "operator determinants, nonlinear ODEs, closed-form "
                    "surmises, and sampled or number-theoretic spectra.")
    sub = parser.add_subparsers(dest="command", required=True)

    tab = sub.add_parser(
        "tabulate", help="tabulate a quantity over an s grid as CSV",
        description="Columns are named <quantity>_<method>.  Supported "
                    "methods per quantity: E2/E1/E4/Enn/p2nn/En: fredholm, "
                    "painleve; p0/p1gap: fredholm, painleve, surmise.  "
                    "p0 takes --beta; En takes --n (painleve only at n=0).")
    tab.add_argument("--quantity", choices=QUANTITIES, default="E2")
    tab.add_argument("--method", choices=METHODS, default="all")
    tab.add_argument("--s-min", type=float, default=0.0)
    tab.add_argument("--s-max", type=float, default=2.0)
    tab.add_argument("--s-step", type=float, default=0.05)
    tab.add_argument("--beta", type=int, choices=(1, 2, 4), default=1,
                     help="spacing-density symmetry class for p0")
    tab.add_argument("--n", type=int, default=0,
                     help="gap order for the En quantity")
    tab.add_argument("--det-tol", type=float, default=1e-10,
                     help="determinant convergence tolerance")

    smp = sub.add_parser(
        "sample", help="histogram central spacings of sampled spectra")
    smp.add_argument("--n", type=int, default=13, help="matrix rank (odd)")
    smp.add_argument("--reps", type=int, default=2000)
    smp.add_argument("--seed", type=int, default=42)
    smp.add_argument("--order", type=int, choices=(0, 1), default=0,
                     help="0: adjacent central gaps; 1: span skipping one")
    smp.add_argument("--bin-width", type=float, default=None)

    prm = sub.add_parser(
        "primes", help="histogram prime gaps in rescaled units")
    prm.add_argument("--start", type=int, default=10 ** 9 + 7)
    prm.add_argument("--count", type=int, default=2000)
    prm.add_argument("--order", type=int, choices=(0, 1), default=0)
    prm.add_argument("--bin-width", type=float, default=None)
    prm.add_argument("--raw", action="store_true",
                     help="emit the prime window (index,prime,gap) instead")

    zrs = sub.add_parser(
        "zeros", help="nearest-neighbour statistic of unfolded zeta zeros")
    zrs.add_argument("--file", required=True, dest="zeros_path",
                     help="ascending ordinates, one per line, '#' comments")
    zrs.add_argument("--bin-width", type=float, default=None)

    ver = sub.add_parser(
        "verify", help="run the cross-route validation suite")
    ver.add_argument("--only", nargs="*", default=(),
                     help="criterion labels to run (default: all)")

    for p in (tab, smp, prm, zrs):
        p.add_argument("-o", "--output", dest="output_path", default=None)
        p.add_argument("--workers", type=int, default=None,
                       help="pool size (default: processor count; the env "
                            "var SPACING_LAB_THREADS overrides)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if v is not None}
    fields.setdefault("only", ())
    config = RunConfig(**{k: v for k, v in fields.items()
                          if k in RunConfig.__dataclass_fields__})
    try:
        return run(config)
    except (ArgumentError, UnsupportedError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (SpacingLabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

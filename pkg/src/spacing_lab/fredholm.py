"""Gap probabilities and spacing densities from operator spectra.

This is the determinantal route: every quantity here comes from eigenvalues
mu_j of a kernel restricted to an interval, through det(1 - xi K) and its
xi-derivatives.  Interval conventions differ per statistic and are stated on
each function; the Interval argument of the underlying spectrum is always
the ground truth.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ArgumentError, NumericError, UnsupportedError
from .quadrature import FredholmSpectrum, Interval, nystrom_spectrum

log = logging.getLogger(__name__)

_EIGENVALUE_FLOOR = 1e-16     # product truncation point
_FORCED_LEVEL_GAP = 1e-14     # 1 - mu below this: level treated as occupied
_MAX_GAP_ORDER = 30
_DEFAULT_NODES = 100
_MAX_NODES = 1600
_DET_TOL = 1e-10


def generating_value(spectrum: FredholmSpectrum, xi: float) -> float:
    """det(1 - xi K) = prod_j (1 - xi mu_j) over the retained spectrum."""
    if not 0.0 <= xi <= 1.0:
        raise ArgumentError(f"xi must lie in [0, 1], got {xi}")
    mu = spectrum.eigenvalues
    mu = mu[mu > _EIGENVALUE_FLOOR]
    return float(np.prod(1.0 - xi * mu))


@dataclass(frozen=True)
class GapProfile:
    """Probability that the interval holds exactly n eigenvalues."""

    n: int
    value: float


def gap_n(spectrum: FredholmSpectrum, n: int) -> GapProfile:
    """E(n) = (-1)^n/n! d^n/dxi^n det(1 - xi K) at xi = 1.

    Evaluated as prod(1 - mu) * e_n(mu/(1 - mu)) with e_n the elementary
    symmetric function, built by the ascending recurrence (no derivatives,
    no alternating sums).  Eigenvalues within _FORCED_LEVEL_GAP of 1 are
    factored out as forced occupied levels, since their ratio overflows.
    """
    if n < 0:
        raise ArgumentError(f"gap order must be >= 0, got {n}")
    if n > _MAX_GAP_ORDER:
        raise UnsupportedError(
            f"gap order {n} beyond documented stability bound {_MAX_GAP_ORDER}")
    mu = spectrum.eigenvalues
    mu = mu[mu > _EIGENVALUE_FLOOR]
    forced = mu > 1.0 - _FORCED_LEVEL_GAP
    n_forced = int(np.count_nonzero(forced))
    if n < n_forced:
        return GapProfile(n=n, value=0.0)
    free = mu[~forced]
    prefactor = float(np.prod(mu[forced])) * float(np.prod(1.0 - free))
    ratios = free / (1.0 - free)
    k = n - n_forced
    e = np.zeros(k + 1)
    e[0] = 1.0
    for r in ratios:
        top = min(k, len(e) - 1)
        for j in range(top, 0, -1):
            e[j] += r * e[j - 1]
    return GapProfile(n=n, value=prefactor * float(e[k]))


def _converged_spectrum(kernel_spec, interval: Interval, tol: float = _DET_TOL,
                        start_nodes: int | None = None) -> FredholmSpectrum:
    """Double the node count until det(1 - K) stabilizes to tol."""
    n = start_nodes or max(_DEFAULT_NODES, int(12 * interval.length))
    spec = nystrom_spectrum(kernel_spec, interval, n)
    prev = generating_value(spec, 1.0)
    while n < _MAX_NODES:
        n *= 2
        spec = nystrom_spectrum(kernel_spec, interval, n)
        cur = generating_value(spec, 1.0)
        if abs(cur - prev) <= tol:
            return spec
        prev = cur
    raise NumericError("determinant did not converge under node doubling",
                       context={"kernel": kernel_spec, "interval": interval})


def fredholm_det(kernel_spec, interval: Interval, xi: float = 1.0,
                 tol: float = _DET_TOL) -> float:
    """Converged det(1 - xi K) on the interval."""
    if interval.length == 0.0:
        return 1.0
    return generating_value(_converged_spectrum(kernel_spec, interval, tol), xi)


def parity_split(interval: Interval, n_nodes: int | None = None):
    """(D_plus, D_minus): determinants of the even and odd sine components.

    The interval must be symmetric about 0.  D_plus * D_minus equals the
    full sine-kernel determinant on the same interval.
    """
    if not interval.is_symmetric():
        raise ArgumentError(f"parity split needs (-s, s), got {interval}")
    if interval.length == 0.0:
        return 1.0, 1.0
    if n_nodes is None:
        even = _converged_spectrum(kernels.sine_even(), interval)
        odd = _converged_spectrum(kernels.sine_odd(), interval)
    else:
        even = nystrom_spectrum(kernels.sine_even(), interval, n_nodes)
        odd = nystrom_spectrum(kernels.sine_odd(), interval, n_nodes)
    return generating_value(even, 1.0), generating_value(odd, 1.0)


def gaudin_split(e2_profile, s: float, grid_step: float = 1e-2):
    """(D_plus, D_minus) recovered from an E2 profile alone.

    Splits log E2(s) as (1/2) log E2 -/+ (1/2) int_0^s sqrt(-(log E2)'')
    (minus branch is D_plus: the even determinant is the smaller one).
    ``e2_profile`` maps x to E2 on (-x, x).
    """
    if s <= 0.0:
        return 1.0, 1.0
    m = max(4, int(np.ceil(s / grid_step)))
    if m % 2:
        m += 1
    h = s / m
    x = np.linspace(0.0, s, m + 1)
    values = np.array([e2_profile(float(v)) for v in x])
    if np.any(values <= 0.0):
        raise NumericError("E2 profile must be positive for the log split")
    logE = np.log(values)
    curv = _second_derivative(logE, h)
    g = -curv
    if np.min(g) < -1e-9:
        raise NumericError(
            "profile has -(log E2)'' < 0 beyond tolerance; inconsistent input",
            context={"min": float(np.min(g)), "s": s})
    g = np.clip(g, 0.0, None)
    root = np.sqrt(g)
    # composite Simpson over the uniform grid
    integral = (h / 3.0) * (root[0] + root[-1] + 4.0 * np.sum(root[1:-1:2])
                            + 2.0 * np.sum(root[2:-2:2]))
    half_log = 0.5 * logE[-1]
    return float(np.exp(half_log - 0.5 * integral)), \
        float(np.exp(half_log + 0.5 * integral))


def e2_bulk_det(s: float, xi: float = 1.0) -> float:
    """E2(0; interval of length s) from the sine-kernel determinant."""
    if s < 0.0:
        raise ArgumentError(f"interval length must be >= 0, got {s}")
    return fredholm_det(kernels.sine_bulk(), Interval(-s / 2.0, s / 2.0), xi)


def e1_bulk_det(s: float) -> float:
    """E1(0; (-s, s)) = D_plus(s), the even-component determinant."""
    if s < 0.0:
        raise ArgumentError(f"s must be >= 0, got {s}")
    if s == 0.0:
        return 1.0
    d_plus, _ = parity_split(Interval(-s, s))
    return d_plus


def e4_bulk_det(s: float) -> float:
    """E4(0; (-s/2, s/2)) = (D_plus(s) + D_minus(s)) / 2.

    The parity determinants are taken on (-s, s): a length-s gap of the
    symplectic ensemble corresponds to a length-2s parity-constrained gap
    of the orthogonal one.
    """
    if s < 0.0:
        raise ArgumentError(f"s must be >= 0, got {s}")
    if s == 0.0:
        return 1.0
    d_plus, d_minus = parity_split(Interval(-s, s))
    return 0.5 * (d_plus + d_minus)


def enn_det(s: float, xi: float = 1.0) -> float:
    """Probability of no eigenvalue within distance s of a conditioned one.

    Determinant of the spectrum-singularity kernel (a = 1) on (-s, s).
    """
    if s < 0.0:
        raise ArgumentError(f"s must be >= 0, got {s}")
    return fredholm_det(kernels.spectrum_singularity(1.0), Interval(-s, s), xi)


def rho_k_bulk(points) -> float:
    """k-point bulk correlation: det [SineBulk(x_i, x_j)]."""
    pts = np.asarray(points, dtype=float)
    if pts.size < 1:
        raise ArgumentError("need at least one point")
    diffs = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(diffs, 1.0)
    if np.min(diffs) < 1e-12:
        raise ArgumentError("repeated points make the correlation singular")
    return float(np.linalg.det(kernels.kernel_matrix(kernels.sine_bulk(), pts)))


# ---------------------------------------------------------------------------
# spacing tables and numerical second derivatives

def _second_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """5-point second differences, one-sided at both ends."""
    f = np.asarray(values, dtype=float)
    if len(f) < 5:
        raise ArgumentError("need at least 5 grid values for the stencil")
    out = np.empty_like(f)
    out[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2]
                 + 16 * f[3:-1] - f[4:]) / (12 * h * h)
    out[0] = (35 * f[0] - 104 * f[1] + 114 * f[2] - 56 * f[3]
              + 11 * f[4]) / (12 * h * h)
    out[1] = (11 * f[0] - 20 * f[1] + 6 * f[2] + 4 * f[3]
              - f[4]) / (12 * h * h)
    out[-2] = (11 * f[-1] - 20 * f[-2] + 6 * f[-3] + 4 * f[-4]
               - f[-5]) / (12 * h * h)
    out[-1] = (35 * f[-1] - 104 * f[-2] + 114 * f[-3] - 56 * f[-4]
               + 11 * f[-5]) / (12 * h * h)
    return out


@dataclass
class SpacingTable:
    """A uniform s-grid with one named column per (quantity, method) pair."""

    s_grid: np.ndarray
    columns: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.s_grid = np.asarray(self.s_grid, dtype=float)
        if len(self.s_grid) >= 2:
            steps = np.diff(self.s_grid)
            if np.any(steps <= 0.0):
                raise ArgumentError("s grid must be strictly ascending")
            if np.max(np.abs(steps - steps[0])) > 1e-9 * abs(steps[0]):
                raise ArgumentError("s grid must be uniform")

    @property
    def step(self) -> float:
        return float(self.s_grid[1] - self.s_grid[0])

    def add_column(self, name: str, values):
        values = np.asarray(values, dtype=float)
        if values.shape != self.s_grid.shape:
            raise ArgumentError(
                f"column {name!r} has length {len(values)}, grid has "
                f"{len(self.s_grid)}")
        self.columns[name] = values

    def to_csv(self, stream) -> None:
        """17-significant-digit CSV with '#'-prefixed metadata lines."""
        close = False
        if isinstance(stream, (str, bytes)):
            stream, close = open(stream, "w", encoding="utf-8"), True
        try:
            for key, value in self.metadata.items():
                stream.write(f"# {key}: {value}\n")
            names = ["s"] + list(self.columns)
            stream.write(",".join(names) + "\n")
            cols = [self.s_grid] + [self.columns[n] for n in self.columns]
            for row in zip(*cols):
                stream.write(",".join(f"{v:.17g}" for v in row) + "\n")
        finally:
            if close:
                stream.close()

    @classmethod
    def from_csv(cls, stream) -> "SpacingTable":
        close = False
        if isinstance(stream, (str, bytes)):
            stream, close = open(stream, "r", encoding="utf-8"), True
        try:
            metadata, header, rows = {}, None, []
            for idx, line in enumerate(stream, 1):
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    body = line[1:].strip()
                    if ":" in body:
                        key, value = body.split(":", 1)
                        metadata[key.strip()] = value.strip()
                    continue
                if header is None:
                    header = line.split(",")
                    continue
                rows.append([float(v) for v in line.split(",")])
            if header is None or not rows:
                raise ArgumentError("CSV holds no table data")
            data = np.array(rows)
            table = cls(s_grid=data[:, 0], metadata=metadata)
            for j, name in enumerate(header[1:], start=1):
                table.add_column(name, data[:, j])
            return table
        finally:
            if close:
                stream.close()

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def spacing_from_gaps(table: SpacingTable, n: int, prefix: str = "E") -> np.ndarray:
    """p(n; s) = d^2/ds^2 sum_{j<=n} (n + 1 - j) E(j; s) on the table grid.

    Expects columns ``prefix + str(j)`` for j = 0..n.  Derivatives are
    5-point stencils (one-sided at the ends); negative roundoff is clipped
    at 0 and the clip count logged.
    """
    if table.step > 5e-3 + 1e-12:
        raise ArgumentError(
            f"grid step {table.step} too coarse for stencil accuracy")
    total = np.zeros_like(table.s_grid)
    for j in range(n + 1):
        name = f"{prefix}{j}"
        if name not in table.columns:
            raise ArgumentError(f"missing gap column {name!r}")
        total += (n + 1 - j) * table.columns[name]
    p = _second_derivative(total, table.step)
    clipped = int(np.count_nonzero(p < 0.0))
    if clipped:
        log.info("spacing_from_gaps(n=%d): clipped %d negative values", n, clipped)
    return np.clip(p, 0.0, None)

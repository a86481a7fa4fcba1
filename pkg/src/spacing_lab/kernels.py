"""Closed-form kernels: sine family, hard-edge Bessel, spectrum singularity.

All supported kernels reduce to the cardinal sine, so every evaluation is
cancellation-free: sinc gets a 4-term Taylor branch near 0, and the
hard-edge kernel is written in a form that is regular on the diagonal.

Conventions (mean spacing 1 in the bulk):
  SineBulk(x, y)             = sinc(pi (x - y))
  SineEven/Odd(x, y)         = (sinc(pi (x - y)) +/- sinc(pi (x + y))) / 2
  HardEdgeBessel(a)(x, y)    = (1/(2 pi)) (xy)^(-1/4)
                               * (sinc(sqrt x - sqrt y) -/+ sinc(sqrt x + sqrt y))
                               with - for a = +1/2, + for a = -1/2
  SpectrumSingularity(1)     = sinc(pi (x - y)) - sinc(pi x) sinc(pi y)
  SpectrumSingularity(0)     = SineBulk
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, UnsupportedError

SINE_BULK = "SineBulk"
SINE_EVEN = "SineEven"
SINE_ODD = "SineOdd"
HARD_EDGE_BESSEL = "HardEdgeBessel"
SPECTRUM_SINGULARITY = "SpectrumSingularity"

_HARD_EDGE_ORDERS = (-0.5, 0.5)
_SINGULARITY_ORDERS = (0.0, 1.0)

# both sinc branches agree to ~1e-12 at this threshold (scaled variables)
_SINC_SWITCH = 1e-4


@dataclass(frozen=True)
class KernelSpec:
    variant: str
    a: float | None = None

    def __post_init__(self):
        if self.variant in (SINE_BULK, SINE_EVEN, SINE_ODD):
            if self.a is not None:
                raise ArgumentError(f"{self.variant} takes no parameter")
        elif self.variant == HARD_EDGE_BESSEL:
            if self.a not in _HARD_EDGE_ORDERS:
                raise UnsupportedError(
                    f"hard-edge kernel implemented for a in {_HARD_EDGE_ORDERS}, "
                    f"got {self.a}")
        elif self.variant == SPECTRUM_SINGULARITY:
            if self.a not in _SINGULARITY_ORDERS:
                raise UnsupportedError(
                    f"spectrum-singularity kernel implemented for a in "
                    f"{_SINGULARITY_ORDERS}, got {self.a}")
        else:
            raise UnsupportedError(f"unknown kernel variant {self.variant!r}")


def sine_bulk() -> KernelSpec:
    return KernelSpec(SINE_BULK)


def sine_even() -> KernelSpec:
    return KernelSpec(SINE_EVEN)


def sine_odd() -> KernelSpec:
    return KernelSpec(SINE_ODD)


def hard_edge_bessel(a: float) -> KernelSpec:
    return KernelSpec(HARD_EDGE_BESSEL, a=float(a))


def spectrum_singularity(a: float) -> KernelSpec:
    return KernelSpec(SPECTRUM_SINGULARITY, a=float(a))


def sinc(z):
    """sin(z)/z with its removable singularity filled in."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < _SINC_SWITCH
    safe = np.where(small, 1.0, z)
    z2 = z * z
    taylor = 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0
    out = np.where(small, taylor, np.sin(safe) / safe)
    return out if out.ndim else float(out)


def bessel_half_integer(order: float, z: float) -> float:
    """J_order(z) for order in {-1/2, 1/2, 3/2} via trigonometric closed forms.

    Small z is routed through sinc so J_{3/2} does not lose digits to the
    sin z / z - cos z cancellation.
    """
    if z <= 0.0:
        raise ArgumentError(f"argument must be positive, got {z}")
    amp = math.sqrt(2.0 / (math.pi * z))
    if order == -0.5:
        return amp * math.cos(z)
    if order == 0.5:
        return amp * math.sin(z)
    if order == 1.5:
        # sin z / z - cos z = z^2/3 (1 - z^2/10 + ...); use the series form
        if abs(z) < 1e-2:
            z2 = z * z
            series = (z2 / 3.0) * (1.0 - z2 / 10.0 + z2 * z2 / 280.0
                                   - z2 * z2 * z2 / 15120.0)
            return amp * series
        return amp * (math.sin(z) / z - math.cos(z))
    raise UnsupportedError(f"Bessel order {order} has no implemented closed form")


def hard_edge_diagonal(a: float, t: float) -> float:
    """Diagonal value K(t, t) of the hard-edge kernel.

    Equals (1/(2 pi sqrt t)) (1 +/- sinc(2 sqrt t)), the x -> y limit of the
    off-diagonal quotient (+ for a = -1/2, - for a = +1/2).
    """
    if a not in _HARD_EDGE_ORDERS:
        raise UnsupportedError(f"hard-edge diagonal needs a in {_HARD_EDGE_ORDERS}")
    if t <= 0.0:
        raise ArgumentError(f"hard-edge domain is t > 0, got {t}")
    r = math.sqrt(t)
    sign = 1.0 if a == -0.5 else -1.0
    return (1.0 + sign * float(sinc(2.0 * r))) / (2.0 * math.pi * r)


def _eval_array(spec: KernelSpec, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if spec.variant == SINE_BULK:
        return sinc(np.pi * (x - y))
    if spec.variant == SINE_EVEN:
        return 0.5 * (sinc(np.pi * (x - y)) + sinc(np.pi * (x + y)))
    if spec.variant == SINE_ODD:
        return 0.5 * (sinc(np.pi * (x - y)) - sinc(np.pi * (x + y)))
    if spec.variant == HARD_EDGE_BESSEL:
        if np.any(x <= 0.0) or np.any(y <= 0.0):
            raise ArgumentError("hard-edge kernel domain is x, y > 0")
        p, q = np.sqrt(x), np.sqrt(y)
        sign = 1.0 if spec.a == -0.5 else -1.0
        return (sinc(p - q) + sign * sinc(p + q)) / (2.0 * np.pi * np.sqrt(p * q))
    if spec.variant == SPECTRUM_SINGULARITY:
        if spec.a == 0.0:
            return sinc(np.pi * (x - y))
        return sinc(np.pi * (x - y)) - sinc(np.pi * x) * sinc(np.pi * y)
    raise UnsupportedError(spec.variant)


def evaluate(spec: KernelSpec, x: float, y: float) -> float:
    """Kernel value at a point; the diagonal is the analytic limit."""
    return float(_eval_array(spec, x, y))


def kernel_matrix(spec: KernelSpec, nodes: np.ndarray) -> np.ndarray:
    """Dense symmetric matrix [K(x_i, x_j)] over a node set."""
    x = np.asarray(nodes, dtype=float)
    return _eval_array(spec, x[:, None], x[None, :])

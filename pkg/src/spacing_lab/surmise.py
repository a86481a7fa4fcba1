"""Closed-form reference spacing densities.

Two small-matrix families live here.  The power-law ansatz
p(s) = c1 s^beta exp(-c2 s^(beta+1)/(beta+1)) is solved for any beta > -1;
it reproduces the exponential law at beta = 0 and the classic beta = 1
surmise.  The beta = 2 and beta = 4 closed forms have a Gaussian tail
instead (they come from the 2x2 ensembles directly, not from the power-law
ansatz), so they are generated by a separate coefficient rule; beta = 1 is
the case where the two families coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ArgumentError, UnsupportedError


def poisson_p(n: int, s: float) -> float:
    """Poisson spacing ladder: s^n e^{-s} / n!."""
    if n < 0:
        raise ArgumentError(f"n must be >= 0, got {n}")
    if s < 0.0:
        raise ArgumentError(f"s must be >= 0, got {s}")
    if s == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(s) - s - math.lgamma(n + 1))


@dataclass(frozen=True)
class SurmiseCoefficients:
    """Normalization pair for p(s) = c1 s^beta exp(-c2 s^(beta+1)/(beta+1)).

    Both the integral and the mean of the density are 1 by construction.
    """

    beta: float
    c1: float
    c2: float

    def density(self, s: float) -> float:
        if s < 0.0:
            raise ArgumentError(f"s must be >= 0, got {s}")
        if s == 0.0:
            return self.c1 if self.beta == 0.0 else 0.0
        return self.c1 * s ** self.beta * math.exp(
            -self.c2 * s ** (self.beta + 1.0) / (self.beta + 1.0))


def solve_ansatz(beta: float) -> SurmiseCoefficients:
    """Coefficients of the power-law repulsion ansatz with unit mass and mean.

    Closing the two moment conditions in Gamma functions gives
    c1 = c2 = (beta+1) * Gamma(1 + 1/(beta+1))^(beta+1).
    """
    if beta <= -1.0:
        raise ArgumentError(f"beta must exceed -1, got {beta}")
    q = beta + 1.0
    c = q * math.gamma(1.0 + 1.0 / q) ** q
    return SurmiseCoefficients(beta=float(beta), c1=c, c2=c)


def gaussian_class_coefficients(beta: float):
    """(c1, c2) of the Gaussian-tail family p = c1 s^beta exp(-c2 s^2).

    Unit mass and unit mean force c2 = (Gamma((beta+2)/2)/Gamma((beta+1)/2))^2
    and c1 = 2 Gamma((beta+2)/2)^(beta+1) / Gamma((beta+1)/2)^(beta+2).
    """
    if beta <= -1.0:
        raise ArgumentError(f"beta must exceed -1, got {beta}")
    top = math.gamma((beta + 2.0) / 2.0)
    bot = math.gamma((beta + 1.0) / 2.0)
    return 2.0 * top ** (beta + 1.0) / bot ** (beta + 2.0), (top / bot) ** 2


def wigner_surmise(beta: int, s: float) -> float:
    """The 2x2-ensemble spacing density for beta in {1, 2, 4}.

    beta=1: (pi/2) s exp(-pi s^2/4); beta=2: (32/pi^2) s^2 exp(-4 s^2/pi);
    beta=4: (2^18/3^6 pi^3) s^4 exp(-64 s^2/(9 pi)).
    """
    if beta not in (1, 2, 4):
        raise UnsupportedError(f"surmise defined for beta in {{1,2,4}}, got {beta}")
    if s < 0.0:
        raise ArgumentError(f"s must be >= 0, got {s}")
    c1, c2 = gaussian_class_coefficients(float(beta))
    return c1 * s ** beta * math.exp(-c2 * s * s)


def p1_spacing1_approx(s: float) -> float:
    """Surmise stand-in for the beta=1 next-nearest spacing: (1/2) p4(0; s/2)."""
    if s < 0.0:
        raise ArgumentError(f"s must be >= 0, got {s}")
    return 0.5 * wigner_surmise(4, s / 2.0)

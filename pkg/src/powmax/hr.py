"""Gumbel law and the Husler-Reiss max-stable family.

The exponent measure is the primitive; the CDF is exp(-exponent), which
avoids catastrophic loss when the distribution value is near 1.
"""

from __future__ import annotations

import math

from .norming import DependenceRegime
from .special import std_normal_cdf

# Outside this band the finite-lam formula degenerates numerically while the
# limit formulas are already exact to machine precision.
LAM_LOWER_BAND = 1e-8
LAM_UPPER_BAND = 1e8


def gumbel_log(x: float) -> float:
    """log of the Gumbel distribution function: exactly -exp(-x)."""
    return -math.exp(-x)


def gumbel(x: float) -> float:
    """Gumbel distribution function exp(-exp(-x))."""
    return math.exp(gumbel_log(x))


def hr_exponent(lam: float, x: float, y: float) -> float:
    """Exponent measure mass E(lam, x, y) with cdf = exp(-E).

    Finite lam:  Phi(lam + (x-y)/(2 lam)) e^{-y} + Phi(lam + (y-x)/(2 lam)) e^{-x};
    lam = 0 gives e^{-min(x, y)} and lam = inf gives e^{-x} + e^{-y}.
    """
    if lam < 0.0 or math.isnan(lam):
        raise ValueError(f"dependence parameter must be in [0, inf], got {lam}")
    if lam < LAM_LOWER_BAND:
        return math.exp(-min(x, y))
    if lam > LAM_UPPER_BAND:
        return math.exp(-x) + math.exp(-y)
    half = (x - y) / (2.0 * lam)
    return (
        std_normal_cdf(lam + half) * math.exp(-y)
        + std_normal_cdf(lam - half) * math.exp(-x)
    )


def hr_cdf(lam: float, x: float, y: float) -> float:
    """Husler-Reiss max-stable distribution H_lam(x, y)."""
    return math.exp(-hr_exponent(lam, x, y))


def hr_cdf_regime(regime: DependenceRegime, x: float, y: float) -> float:
    return hr_cdf(regime.lam, x, y)


def hr_exponent_regime(regime: DependenceRegime, x: float, y: float) -> float:
    return hr_exponent(regime.lam, x, y)

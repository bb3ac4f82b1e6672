"""Norming constants, the power transform omega, and dependence sequences.

Two conventions for the base constant b_n are supported:

* ``survival``: 1 - Phi(b_n) = 1/n, the textbook choice.  This is the
  default for the functions in this module.
* ``density``: n phi(b_n) = b_n (equivalently 2 pi b_n^2 exp(b_n^2) = n^2).

The two differ by about b_n^{-3}, which is invisible at first order but
shifts every second-order quantity by Theta(b_n^{-2}).  The closed-form
correction terms produced by the expansions module are exact only under the
density convention, so the rate-verification modules default to ``density``
while everything here stays available under either rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .special import mills_ratio, std_normal_quantile, std_normal_sf_log

BN_RULES = ("survival", "density")
_LOG_2PI = math.log(2.0 * math.pi)

MAX_N = 1e24  # beyond this the per-observation tails fall under the accuracy floor


@dataclass(frozen=True)
class NormingScheme:
    """Normalization family: standard (any t > 0) or starred (t = 2 only)."""

    kind: str = "standard"
    t: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("standard", "starred"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if not self.t > 0.0:
            raise ValueError(f"power index must be positive, got {self.t}")
        if self.kind == "starred" and self.t != 2.0:
            raise ValueError("the starred scheme is defined only for t = 2")


def standard(t: float = 1.0) -> NormingScheme:
    return NormingScheme("standard", t)


def starred() -> NormingScheme:
    return NormingScheme("starred", 2.0)


@dataclass(frozen=True)
class NormingConstants:
    """Solved constants for one sample size under one scheme."""

    n: float
    b_n: float
    c: float
    d: float
    scheme: NormingScheme
    bn_rule: str = "survival"


@dataclass(frozen=True)
class DependenceRegime:
    """Dependence parameter lam in [0, inf] plus the second-order alpha.

    lam == 0 is the complete-dependence limit, lam == inf the independence
    limit; alpha matters only for finite positive lam.
    """

    lam: float
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.lam < 0.0 or math.isnan(self.lam):
            raise ValueError(f"dependence parameter must be in [0, inf], got {self.lam}")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if self.lam in (0.0, math.inf) and self.alpha != 0.0:
            raise ValueError("alpha is meaningful only for finite positive lam")

    @property
    def is_zero(self) -> bool:
        return self.lam == 0.0

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.lam)

    @property
    def is_finite(self) -> bool:
        return not (self.is_zero or self.is_infinite)


@dataclass(frozen=True)
class RhoSequenceSpec:
    """How the row correlation rho_n is generated along the n-ladder.

    kinds:
      * ``lambda-alpha``: rho_n = 1 - 2 lam_n^2 / b_n^2 with
        lam_n = lam + alpha / b_n^2 taken from the regime.
      * ``constant``: rho_n = value for every n.
      * ``bn-pow6``: rho_n = 1 - value * b_n^-6   (lam -> 0 side condition).
      * ``bn-pow14``: rho_n = 1 - value * b_n^-14 (lam -> 0, starred).
      * ``log-ratio``: rho_n = 1 - (log b_n)^2 / b_n^2, the canonical
        sequence with log(b_n) / (b_n^2 (1 - rho_n)) -> 0 (lam -> inf side).
    """

    kind: str = "lambda-alpha"
    value: float = 0.0

    def __post_init__(self) -> None:
        kinds = ("lambda-alpha", "constant", "bn-pow6", "bn-pow14", "log-ratio")
        if self.kind not in kinds:
            raise ValueError(f"unknown rho sequence kind {self.kind!r}")
        if self.kind == "constant" and not -1.0 <= self.value <= 1.0:
            raise ValueError(f"constant correlation must lie in [-1, 1], got {self.value}")
        if self.kind in ("bn-pow6", "bn-pow14") and self.value < 0.0:
            raise ValueError("sequence coefficient must be nonnegative")


def _validate_n(n: float) -> float:
    n = float(n)
    if math.isnan(n) or n <= 2.0:
        raise ValueError(f"sample size must be at least 3, got {n}")
    if n > MAX_N:
        raise ValueError(f"sample size beyond {MAX_N:g} is not supported, got {n}")
    return n


def solve_bn(n: float, rule: str = "survival") -> float:
    """Base norming constant b_n for sample size n (n >= 3).

    Under ``survival`` this is the 1 - 1/n quantile, solved through the
    log-domain survival inverse so n up to 1e24 keeps full accuracy; under
    ``density`` it solves n phi(b) = b.
    """
    n = _validate_n(n)
    log_n = math.log(n)
    if rule == "survival":
        if n < 1e15:
            b = std_normal_quantile(1.0 - 1.0 / n)
        else:
            b = math.sqrt(2.0 * log_n - math.log(4.0 * math.pi * log_n))
        # Newton on log(sf(b)) + log(n) = 0; derivative is -1/mills(b).
        for _ in range(60):
            g = std_normal_sf_log(b) + log_n
            if b > 0.0:
                step = g * mills_ratio(b)
            else:
                step = g * 1.4  # sf'(b)/sf(b) ~ -0.8 near b = 0
            b += step
            if abs(step) < 1e-15 * max(1.0, abs(b)):
                break
        return b
    if rule == "density":
        # Solve b^2/2 + log(b) = log(n) - log(2 pi)/2, increasing in b.
        target = log_n - 0.5 * _LOG_2PI
        b = math.sqrt(max(2.0 * log_n - math.log(4.0 * math.pi * log_n), 0.25))
        for _ in range(60):
            g = 0.5 * b * b + math.log(b) - target
            step = g / (b + 1.0 / b)
            b_new = b - step
            if b_new <= 0.0:
                b_new = 0.5 * b
            b = b_new
            if abs(step) < 1e-15 * max(1.0, abs(b)):
                break
        return b
    raise ValueError(f"unknown bn rule {rule!r}; expected one of {BN_RULES}")


def make_norming(n: float, scheme: NormingScheme, rule: str = "survival") -> NormingConstants:
    """Solve b_n and assemble the (c, d) constants for the given scheme."""
    b = solve_bn(n, rule)
    t = scheme.t
    if scheme.kind == "standard":
        c = t * b ** (t - 2.0)
        d = b ** t
    else:
        c = 2.0 - 2.0 / (b * b)
        d = b * b - 2.0 / (b * b)
    return NormingConstants(float(n), b, c, d, scheme, rule)


def omega(nc: NormingConstants, x: float) -> float:
    """Power-transform threshold (c x + d)^(1/t); strictly increasing in x."""
    arg = nc.c * x + nc.d
    if arg <= 0.0:
        raise ValueError(
            f"threshold argument c*x + d = {arg} is not positive at x = {x} (n = {nc.n:g})"
        )
    return arg ** (1.0 / nc.scheme.t)


def rho_at(spec: RhoSequenceSpec, n: float, regime: DependenceRegime,
           rule: str = "survival") -> float:
    """Row correlation rho_n prescribed by `spec` at sample size n."""
    b = solve_bn(n, rule)
    b2 = b * b
    if spec.kind == "lambda-alpha":
        if not regime.is_finite:
            raise ValueError("lambda-alpha sequences need a finite positive lam")
        lam_n = regime.lam + regime.alpha / b2
        rho = 1.0 - 2.0 * lam_n * lam_n / b2
        if rho < -1.0:
            raise ValueError(
                f"rho_n = {rho} falls below -1 at n = {n:g}; "
                "the dependence parameter is too large for this sample size"
            )
        return rho
    if spec.kind == "constant":
        return spec.value
    if spec.kind == "bn-pow6":
        return 1.0 - spec.value * b ** -6
    if spec.kind == "bn-pow14":
        return 1.0 - spec.value * b ** -14
    # log-ratio
    lb = math.log(b)
    return 1.0 - (lb * lb) / b2

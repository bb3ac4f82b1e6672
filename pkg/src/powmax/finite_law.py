"""Exact finite-n joint law of powered maxima and its discrepancies.

The per-observation law is assembled exclusively from survival-form
primitives (never by differencing CDF values) and raised to the n through
n * log1p(-s), which keeps the n = 1e20 ladder inside ~1e-10 absolute error.
The lower-tail rectangle corners are retained exactly even though they are
asymptotically negligible, so the suite can verify that negligibility
instead of assuming it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .expansions import TheoremLimit, theorem_limit
from .hr import hr_cdf
from .norming import (
    DependenceRegime,
    NormingScheme,
    RhoSequenceSpec,
    make_norming,
    omega,
    rho_at,
)
from .special import bvn_upper_log, std_normal_sf, std_normal_sf_log

# Relative accuracy carried by each survival-form primitive.
_PRIMITIVE_REL_ERR = 1e-12


def _log_cdf_pair(a: float, b: float, rho: float) -> float:
    """log P(X <= a, Y <= b) for standard bivariate normal, corr rho.

    Upper-box corners go through the exceedance complement (relative
    accuracy on 1 - F); everything else maps to a direct joint upper tail
    by reflecting both coordinates (relative accuracy on F itself).
    """
    sfa = std_normal_sf(a)
    sfb = std_normal_sf(b)
    if sfa + sfb <= 0.1:
        s = sfa + sfb - math.exp(bvn_upper_log(a, b, rho))
        return math.log1p(-s)
    return bvn_upper_log(-a, -b, rho)


@dataclass(frozen=True)
class FiniteLawPoint:
    """Exact joint probability of the powered-maxima box event."""

    n: float
    rho: float
    t: float
    scheme: NormingScheme
    x: float
    y: float
    prob: float
    log_prob: float
    accuracy_estimate: float


@dataclass(frozen=True)
class DeltaResult:
    """Discrepancy between the finite-n law and its max-stable limit."""

    n: float
    b_n: float
    rho_n: float
    delta: float
    delta_tilde: float
    scaled_logn: float
    scaled_bn2: float
    limit: float
    residual: float
    scale_exponent: int
    accuracy_estimate: float


@dataclass(frozen=True)
class RateTable:
    """Ladder of scaled discrepancies plus a 1/log(n) extrapolation."""

    rows: list[DeltaResult]
    failures: list[tuple[float, str]]
    limit: float
    scale_exponent: int
    extrapolated: float | None


def per_obs_joint_survival(n: float, rho: float, scheme: NormingScheme,
                           x: float, y: float, bn_rule: str = "density") -> float:
    """n * P(X > omega(x), Y > omega(y)) for one observation pair."""
    nc = make_norming(n, scheme, bn_rule)
    wx, wy = omega(nc, x), omega(nc, y)
    return math.exp(math.log(n) + bvn_upper_log(wx, wy, rho))


def univariate_powered_max_cdf(n: float, scheme: NormingScheme, x: float,
                               bn_rule: str = "density") -> float:
    """P(|M_n|^t <= c x + d) for a single Gaussian coordinate."""
    nc = make_norming(n, scheme, bn_rule)
    w = omega(nc, x)
    upper = math.exp(n * math.log1p(-std_normal_sf(w)))
    lower = math.exp(n * std_normal_sf_log(w))  # Phi(-w)^n = P(M_n <= -omega)
    return upper - lower


def joint_powered_max_cdf(n: float, rho: float, scheme: NormingScheme,
                          x: float, y: float,
                          bn_rule: str = "density") -> FiniteLawPoint:
    """Exact P(|M_n1|^t <= c x + d, |M_n2|^t <= c y + d).

    Four rectangle corners of the per-observation law, each powered to the
    n in log domain, assembled with the alternating signs of the
    absolute-value event.
    """
    if not -1.0 <= rho <= 1.0:
        raise ValueError(f"correlation must lie in [-1, 1], got {rho}")
    nc = make_norming(n, scheme, bn_rule)
    wx, wy = omega(nc, x), omega(nc, y)

    log_pp = n * _log_cdf_pair(wx, wy, rho)
    log_pm = n * _log_cdf_pair(wx, -wy, rho)
    log_mp = n * _log_cdf_pair(-wx, wy, rho)
    log_mm = n * _log_cdf_pair(-wx, -wy, rho)

    t_pp = math.exp(log_pp)
    small = math.exp(log_pm) + math.exp(log_mp) - math.exp(log_mm)
    prob = t_pp - small
    if prob > 0.0 and t_pp > 0.0:
        log_prob = log_pp + math.log1p(-small / t_pp)
    else:
        log_prob = -math.inf
        prob = max(prob, 0.0)

    sfx = std_normal_sf(wx)
    sfy = std_normal_sf(wy)
    acc = prob * n * (sfx + sfy) * 2.0 * _PRIMITIVE_REL_ERR + 4e-16
    return FiniteLawPoint(float(n), rho, scheme.t, scheme, x, y, prob, log_prob, acc)


def _check_consistency(spec: RhoSequenceSpec, regime: DependenceRegime) -> None:
    kind = spec.kind
    if kind == "lambda-alpha" and not regime.is_finite:
        raise ValueError("lambda-alpha sequences require a finite positive lam regime")
    if kind in ("bn-pow6", "bn-pow14") and not regime.is_zero:
        raise ValueError(f"{kind} sequences drive rho_n -> 1 and require the lam = 0 regime")
    if kind == "log-ratio" and not regime.is_infinite:
        raise ValueError("log-ratio sequences require the lam = inf regime")
    if kind == "constant":
        if spec.value == 1.0 and not regime.is_zero:
            raise ValueError("constant rho = 1 corresponds to the lam = 0 regime")
        if spec.value < 1.0 and not regime.is_infinite:
            raise ValueError("constant rho < 1 corresponds to the lam = inf regime")


def delta_at(n: float, spec: RhoSequenceSpec, regime: DependenceRegime,
             scheme: NormingScheme, x: float, y: float,
             bn_rule: str = "density") -> DeltaResult:
    """Discrepancy Delta at one sample size, with both scalings.

    delta uses the absolute-value (four-rectangle) law; delta_tilde uses
    only the upper rectangle.  scaled_logn applies (log n)^p, scaled_bn2
    applies (b_n^2 / 2)^p, where p is the scale exponent of the governing
    limit.  residual = scaled_logn - limit.
    """
    _check_consistency(spec, regime)
    rho_n = rho_at(spec, n, regime, bn_rule)
    nc = make_norming(n, scheme, bn_rule)
    point = joint_powered_max_cdf(n, rho_n, scheme, x, y, bn_rule)
    h = hr_cdf(regime.lam, x, y)

    wx, wy = omega(nc, x), omega(nc, y)
    upper_only = math.exp(n * _log_cdf_pair(wx, wy, rho_n))

    tl: TheoremLimit = theorem_limit(regime, scheme, x, y)
    p = tl.scale_exponent
    delta = point.prob - h
    delta_tilde = upper_only - h
    scaled_logn = math.log(n) ** p * delta
    scaled_bn2 = (0.5 * nc.b_n * nc.b_n) ** p * delta
    return DeltaResult(
        n=float(n),
        b_n=nc.b_n,
        rho_n=rho_n,
        delta=delta,
        delta_tilde=delta_tilde,
        scaled_logn=scaled_logn,
        scaled_bn2=scaled_bn2,
        limit=tl.limit_value,
        residual=scaled_logn - tl.limit_value,
        scale_exponent=p,
        accuracy_estimate=point.accuracy_estimate,
    )


def richardson_extrapolate(rows: list[DeltaResult]) -> float | None:
    """Eliminate the leading 1/log(n) error from the last two ladder rows."""
    if len(rows) < 2:
        return None
    r1, r2 = rows[-2], rows[-1]
    l1, l2 = math.log(r1.n), math.log(r2.n)
    slope = (r1.scaled_logn - r2.scaled_logn) / (1.0 / l1 - 1.0 / l2)
    return r2.scaled_logn - slope / l2


def rate_table(spec: RhoSequenceSpec, regime: DependenceRegime,
               scheme: NormingScheme, x: float, y: float,
               n_ladder: list[float], bn_rule: str = "density") -> RateTable:
    """One DeltaResult per ladder entry plus the 1/log(n) extrapolation.

    Rows are independent: a failure at one n is recorded and the rest of
    the ladder still runs.
    """
    if not n_ladder:
        raise ValueError("the n ladder must be nonempty")
    if any(b <= a for a, b in zip(n_ladder[:-1], n_ladder[1:])):
        raise ValueError("the n ladder must be strictly increasing")
    rows: list[DeltaResult] = []
    failures: list[tuple[float, str]] = []
    for n in n_ladder:
        try:
            rows.append(delta_at(n, spec, regime, scheme, x, y, bn_rule))
        except (ValueError, ArithmeticError) as exc:
            failures.append((float(n), str(exc)))
    tl = theorem_limit(regime, scheme, x, y)
    return RateTable(
        rows=rows,
        failures=failures,
        limit=tl.limit_value,
        scale_exponent=tl.scale_exponent,
        extrapolated=richardson_extrapolate(rows),
    )

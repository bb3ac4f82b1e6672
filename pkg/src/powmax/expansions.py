"""Closed-form first- and second-order correction terms.

All formulas are implemented exactly as printed in their source; the
quadrature oracle (module `quadrature`) is the authority whenever a closed
form and a defining integral disagree, and the test-suite compares the two
routes rather than trusting either blindly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .hr import hr_cdf
from .norming import DependenceRegime, NormingScheme, make_norming, omega
from .quadrature import QuadResult, quad_semi_infinite
from .special import std_normal_cdf, std_normal_pdf, std_normal_sf, std_normal_sf_log

LIMIT_FAMILIES = (
    "finite-standard",
    "finite-starred",
    "independent-standard",
    "dependent-standard",
    "independent-starred",
    "dependent-starred",
)


def mu(t: float, x: float) -> float:
    """First-order univariate correction (1 + x + (2-t)/2 x^2) e^{-x}."""
    if t <= 0.0:
        raise ValueError(f"power index must be positive, got {t}")
    return (1.0 + x + 0.5 * (2.0 - t) * x * x) * math.exp(-x)


def nu(x: float) -> float:
    """Starred-scheme univariate correction -(7/2 + 3x + x^2) e^{-x}."""
    return -(3.5 + 3.0 * x + x * x) * math.exp(-x)


def _phi_arg(lam: float, x: float, y: float) -> float:
    return lam + (y - x) / (2.0 * lam)


def chi(alpha: float, lam: float, x: float, y: float) -> float:
    """Second-order term surviving under the starred scheme at finite lam."""
    if lam <= 0.0 or math.isinf(lam):
        raise ValueError("chi requires a finite positive dependence parameter")
    coeff = 2.0 * alpha - (x + y + 2.0) * lam - lam ** 3
    return coeff * math.exp(-x) * std_normal_pdf(_phi_arg(lam, x, y))


def tau(alpha: float, lam: float, x: float, y: float, t: float) -> float:
    """Full second-order term under the standard scheme at finite lam."""
    if lam <= 0.0 or math.isinf(lam):
        raise ValueError("tau requires a finite positive dependence parameter")
    half = (x - y) / (2.0 * lam)
    return (
        mu(t, x) * std_normal_cdf(lam - half)
        + mu(t, y) * std_normal_cdf(lam + half)
        + chi(alpha, lam, x, y)
    )


def kappa1(alpha: float, lam: float, x: float, y: float, t: float) -> float:
    """Closed form of the first correction integral.

    kappa1 = 2((2-t) lam^4 - (2-t) lam^2 x + (1-t) lam^2) sfbar(v0) e^{-x}
           + (2 alpha - (5-2t) lam^3 + (1-t) lam (x + y)) phi(v0) e^{-x},
    v0 = lam + (y-x)/(2 lam).
    """
    v0 = _phi_arg(lam, x, y)
    ex = math.exp(-x)
    line1 = 2.0 * ((2.0 - t) * lam ** 4 - (2.0 - t) * lam * lam * x + (1.0 - t) * lam * lam)
    line2 = 2.0 * alpha - (5.0 - 2.0 * t) * lam ** 3 + (1.0 - t) * lam * (x + y)
    return line1 * std_normal_sf(v0) * ex + line2 * std_normal_pdf(v0) * ex


def kappa2(alpha: float, lam: float, x: float, y: float, t: float) -> float:
    """Closed form of the weight-correction integral.

    alpha is accepted for signature symmetry with kappa1 but does not enter.
    """
    del alpha
    v0 = _phi_arg(lam, x, y)
    ex = math.exp(-x)
    ey = math.exp(-y)
    lineA = -(0.5 * (2.0 - t) * y * y + y + 1.0) * std_normal_cdf(lam + (x - y) / (2.0 * lam)) * ey
    lineB = (
        2.0 * (2.0 - t) * lam ** 4
        - 2.0 * (2.0 - t) * lam * lam * x
        + 2.0 * (1.0 - t) * lam * lam
        + 0.5 * (2.0 - t) * x * x
        + x
        + 1.0
    ) * std_normal_sf(v0) * ex
    lineC = -(
        2.0 * (2.0 - t) * lam ** 3 - (2.0 - t) * lam * (x + y) - 2.0 * lam
    ) * std_normal_pdf(v0) * ex
    return lineA + lineB + lineC


def i_k(lam: float, x: float, y: float, k: int,
        rel_tol: float = 1e-11, abs_tol: float = 1e-12) -> QuadResult:
    """Moment integral int_y^inf phi(lam + (x-z)/(2 lam)) e^{-z} z^k dz.

    Quadrature-backed; `i_k_closed` holds the Gaussian-shift reduction, but
    this value is the authoritative one.
    """
    if k not in (0, 1, 2):
        raise ValueError(f"moment order must be 0, 1 or 2, got {k}")
    if lam <= 0.0 or math.isinf(lam):
        raise ValueError("moment integrals require finite positive lam")

    def integrand(z: float) -> float:
        return std_normal_pdf(lam + (x - z) / (2.0 * lam)) * math.exp(-z) * z ** k

    return quad_semi_infinite(integrand, y, rel_tol=rel_tol, abs_tol=abs_tol)


def i_k_closed(lam: float, x: float, y: float, k: int) -> float:
    """Gaussian-shift closed forms for the moment integrals.

    Substituting v = lam + (z-x)/(2 lam) turns the integrand into a plain
    normal density times a polynomial, so each moment reduces to sfbar and
    phi at v0 = lam + (y-x)/(2 lam).
    """
    v0 = _phi_arg(lam, x, y)
    q = std_normal_sf(v0)
    p = std_normal_pdf(v0)
    e = 2.0 * lam * math.exp(-x)
    if k == 0:
        return e * q
    a = x - 2.0 * lam * lam
    if k == 1:
        return e * (a * q + 2.0 * lam * p)
    if k == 2:
        return e * ((a * a + 4.0 * lam * lam) * q + (4.0 * lam * a + 4.0 * lam * lam * v0) * p)
    raise ValueError(f"moment order must be 0, 1 or 2, got {k}")


def kappa1_from_integrals(alpha: float, lam: float, x: float, y: float, t: float,
                          use_quadrature: bool = True) -> float:
    """Assemble kappa1 from the moment integrals I_0, I_1, I_2.

    Combination: (alpha - lam^3/2 - alpha x/(2 lam^2) - lam x/4
                  - (1-t) x^2/(4 lam)) I_0
                 - (3 lam/4 - alpha/(2 lam^2)) I_1 + (1-t)/(4 lam) I_2.
    """
    if use_quadrature:
        ik = [i_k(lam, x, y, k).value for k in (0, 1, 2)]
    else:
        ik = [i_k_closed(lam, x, y, k) for k in (0, 1, 2)]
    c0 = (
        alpha
        - 0.5 * lam ** 3
        - 0.5 * alpha * x / (lam * lam)
        - 0.25 * lam * x
        - (1.0 - t) * x * x / (4.0 * lam)
    )
    c1 = -(0.75 * lam - 0.5 * alpha / (lam * lam))
    c2 = (1.0 - t) / (4.0 * lam)
    return c0 * ik[0] + c1 * ik[1] + c2 * ik[2]


def kappa2_integral(lam: float, x: float, y: float, t: float,
                    rel_tol: float = 1e-11, abs_tol: float = 1e-12) -> QuadResult:
    """Defining integral of kappa2:

    int_y^inf Phi(lam + (x-z)/(2 lam)) e^{-z} ((1-t) z - (2-t)/2 z^2) dz.
    """

    def integrand(z: float) -> float:
        g = (1.0 - t) * z - 0.5 * (2.0 - t) * z * z
        return std_normal_cdf(lam + (x - z) / (2.0 * lam)) * math.exp(-z) * g

    return quad_semi_infinite(integrand, y, rel_tol=rel_tol, abs_tol=abs_tol)


def exact_upper_tail(n: float, scheme: NormingScheme, x: float,
                     bn_rule: str = "density") -> float:
    """Exact scaled tail n * (1 - Phi(omega(x))), computed in log domain."""
    nc = make_norming(n, scheme, bn_rule)
    w = omega(nc, x)
    return math.exp(math.log(n) + std_normal_sf_log(w))


def univariate_second_order(n: float, scheme: NormingScheme, x: float,
                            bn_rule: str = "density") -> float:
    """Two-term approximation of n * (1 - Phi(omega(x))).

    e^{-x} - b_n^{-2} mu(x) under the standard scheme and
    e^{-x} - b_n^{-4} nu(x) under the starred scheme.
    """
    nc = make_norming(n, scheme, bn_rule)
    b2 = nc.b_n * nc.b_n
    if scheme.kind == "standard":
        return math.exp(-x) - mu(scheme.t, x) / b2
    return math.exp(-x) - nu(x) / (b2 * b2)


@dataclass(frozen=True)
class TheoremLimit:
    """Theoretical limit of the scaled discrepancy for one configuration.

    scale_exponent is the power p such that (log n)^p Delta converges;
    family names which regime/scheme combination produced the value.
    """

    scale_exponent: int
    limit_value: float
    family: str


def theorem_limit(regime: DependenceRegime, scheme: NormingScheme,
                  x: float, y: float) -> TheoremLimit:
    """Dispatch the limiting value of the scaled discrepancy.

    Finite lam: (log n) Delta -> tau/2 * H_lam (standard) or chi/2 * H_lam
    (starred).  lam = inf: (mu(x)+mu(y))/2 * H_inf at scale 1, or
    (nu(x)+nu(y))/4 * H_inf at scale 2 under the starred scheme.  lam = 0:
    same shapes with mu(min)/2 and nu(min)/4 against H_0.
    """
    t = scheme.t
    starred = scheme.kind == "starred"
    if regime.is_finite:
        h = hr_cdf(regime.lam, x, y)
        if starred:
            return TheoremLimit(1, 0.5 * chi(regime.alpha, regime.lam, x, y) * h,
                                "finite-starred")
        return TheoremLimit(1, 0.5 * tau(regime.alpha, regime.lam, x, y, t) * h,
                            "finite-standard")
    if regime.is_infinite:
        h = hr_cdf(math.inf, x, y)
        if starred:
            return TheoremLimit(2, 0.25 * (nu(x) + nu(y)) * h, "independent-starred")
        return TheoremLimit(1, 0.5 * (mu(t, x) + mu(t, y)) * h, "independent-standard")
    # regime.is_zero
    h = hr_cdf(0.0, x, y)
    m = min(x, y)
    if starred:
        return TheoremLimit(2, 0.25 * nu(m) * h, "dependent-starred")
    return TheoremLimit(1, 0.5 * mu(t, m) * h, "dependent-standard")

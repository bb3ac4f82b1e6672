"""Powered maxima of bivariate Gaussian triangular arrays.

Evaluates the Husler-Reiss max-stable limit law, the closed-form first- and
second-order correction terms, and the exact finite-n joint law of powered
maxima, and materializes the convergence-rate theory as verifiable ladders
of scaled discrepancies.
"""

from .expansions import (
    TheoremLimit,
    chi,
    exact_upper_tail,
    i_k,
    i_k_closed,
    kappa1,
    kappa1_from_integrals,
    kappa2,
    kappa2_integral,
    mu,
    nu,
    tau,
    theorem_limit,
    univariate_second_order,
)
from .finite_law import (
    DeltaResult,
    FiniteLawPoint,
    RateTable,
    delta_at,
    joint_powered_max_cdf,
    per_obs_joint_survival,
    rate_table,
    richardson_extrapolate,
    univariate_powered_max_cdf,
)
from .hr import gumbel, gumbel_log, hr_cdf, hr_exponent
from .montecarlo import (
    PairBudgetError,
    SimConfig,
    SimEstimate,
    SimSummary,
    draw_row,
    empirical_vs_exact,
    simulate_powered_maxima,
)
from .norming import (
    BN_RULES,
    DependenceRegime,
    NormingConstants,
    NormingScheme,
    RhoSequenceSpec,
    make_norming,
    omega,
    rho_at,
    solve_bn,
    standard,
    starred,
)
from .quadrature import QuadResult, quad_semi_infinite, verify_identity_32
from .special import (
    bvn_upper,
    bvn_upper_log,
    mills_ratio,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_pdf_log,
    std_normal_quantile,
    std_normal_sf,
    std_normal_sf_log,
)

__version__ = "0.1.0"

__all__ = [
    "BN_RULES",
    "DeltaResult",
    "DependenceRegime",
    "FiniteLawPoint",
    "NormingConstants",
    "NormingScheme",
    "PairBudgetError",
    "QuadResult",
    "RateTable",
    "RhoSequenceSpec",
    "SimConfig",
    "SimEstimate",
    "SimSummary",
    "TheoremLimit",
    "bvn_upper",
    "bvn_upper_log",
    "chi",
    "delta_at",
    "draw_row",
    "empirical_vs_exact",
    "exact_upper_tail",
    "gumbel",
    "gumbel_log",
    "hr_cdf",
    "hr_exponent",
    "i_k",
    "i_k_closed",
    "joint_powered_max_cdf",
    "kappa1",
    "kappa1_from_integrals",
    "kappa2",
    "kappa2_integral",
    "make_norming",
    "mills_ratio",
    "mu",
    "nu",
    "omega",
    "per_obs_joint_survival",
    "quad_semi_infinite",
    "rate_table",
    "rho_at",
    "richardson_extrapolate",
    "simulate_powered_maxima",
    "solve_bn",
    "standard",
    "starred",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_pdf_log",
    "std_normal_quantile",
    "std_normal_sf",
    "std_normal_sf_log",
    "tau",
    "theorem_limit",
    "univariate_powered_max_cdf",
    "univariate_second_order",
    "verify_identity_32",
]

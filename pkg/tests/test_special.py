"""Standard normal primitives against independent oracles."""

import math

import numpy as np
import pytest

from powmax.special import (
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
from powmax.quadrature import quad_semi_infinite

from oracles import bvn_tensor_quad, mills_continued_fraction

# Frozen from the erf-series bisection oracle (tests/oracles.py, 40 digits).
QUANTILE_09 = 1.281551565544600467
# Frozen from 50-digit arithmetic: 1/sqrt(2 pi) and -800 - log(sqrt(2 pi)).
PDF_AT_0 = 0.39894228040143267794
LOG_PDF_AT_40 = -800.91893853320467274
# Frozen from the 40-digit conditional-integral reference (mp_bvn_upper).
BVN_TINY_REFS = {
    (10.0, 10.0, 0.5): 4.4169782315529204127e-32,
    (3.0, 3.0, -0.9): 3.269436016883931726e-43,
}


class TestCdf:
    def test_center(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_reflection_identity(self):
        """cdf(z) + cdf(-z) = 1 within 1e-15 for all z."""
        rng = np.random.default_rng(7)
        zs = np.concatenate([np.linspace(-9, 9, 181), rng.normal(0, 3, 500)])
        for z in zs:
            assert abs(std_normal_cdf(z) + std_normal_cdf(-z) - 1.0) <= 1e-15

    def test_derived_quantile_point(self):
        assert abs(std_normal_cdf(1.2815515655) - 0.9) <= 1e-9


class TestPdf:
    def test_center_value(self):
        assert abs(std_normal_pdf(0.0) - PDF_AT_0) <= 1e-16

    def test_evenness(self):
        for z in np.linspace(0.0, 12.0, 49):
            assert std_normal_pdf(z) == std_normal_pdf(-z)

    def test_far_tail_log_form(self):
        """At z = 40 the density only exists in log form."""
        assert abs(std_normal_pdf_log(40.0) - LOG_PDF_AT_40) <= 1e-10


class TestSurvivalLog:
    def test_center(self):
        assert abs(std_normal_sf_log(0.0) - math.log(0.5)) <= 1e-16

    def test_against_mills_continued_fraction(self):
        """log sf(10) agrees with log(phi(10) * mills(10)) from the CF oracle."""
        ref = std_normal_pdf_log(10.0) + math.log(mills_continued_fraction(10.0))
        assert abs(std_normal_sf_log(10.0) - ref) <= 1e-10 * abs(ref)

    def test_monotone_decreasing(self):
        zs = np.linspace(-12.0, 12.0, 241)
        vals = [std_normal_sf_log(z) for z in zs]
        assert all(a > b for a, b in zip(vals[:-1], vals[1:]))

    def test_negative_branch_matches_complement(self):
        for z in (-0.3, -2.0, -7.5):
            assert abs(math.exp(std_normal_sf_log(z)) - (1.0 - std_normal_cdf(z))) <= 1e-16


class TestQuantile:
    def test_median(self):
        assert std_normal_quantile(0.5) == 0.0

    def test_derived_bisection_point(self):
        assert abs(std_normal_quantile(0.9) - QUANTILE_09) <= 1e-9

    def test_round_trip_identity(self):
        """quantile(cdf(z)) = z within 1e-12 wherever float64 permits.

        For z beyond ~4.2 the rounding of cdf(z) to the double just below 1
        already moves z by up to ulp(1)/2/phi(z), so the tolerance widens to
        that representability floor.
        """
        for z in np.linspace(-8.0, 8.0, 65):
            floor = 1.2e-16 / std_normal_pdf(z) if z > 0 else 0.0
            tol = max(1e-12, floor)
            assert abs(std_normal_quantile(std_normal_cdf(z)) - z) <= tol

    def test_round_trip_identity_core_range(self):
        for z in np.linspace(-8.0, 4.0, 61):
            assert abs(std_normal_quantile(std_normal_cdf(z)) - z) <= 1e-12

    def test_round_trip_probability(self):
        """|cdf(quantile(p)) - p| <= 1e-13 down to p = 1e-12."""
        rng = np.random.default_rng(11)
        ps = np.concatenate([
            10.0 ** np.linspace(-12, -0.31, 60),
            1.0 - 10.0 ** np.linspace(-12, -0.31, 60),
            rng.uniform(0.001, 0.999, 200),
        ])
        for p in ps:
            assert abs(std_normal_cdf(std_normal_quantile(p)) - p) <= 1e-13

    def test_domain(self):
        for p in (0.0, 1.0, -0.1, 1.1):
            with pytest.raises(ValueError):
                std_normal_quantile(p)


class TestMillsRatio:
    def test_definitional_identity(self):
        """mills(z) * phi(z) = sf(z) on [0.5, 30].

        Base tolerance 1e-13 relative, plus the conditioning of exp at
        argument z^2/2 (about z^2 * eps/2), which dominates past z ~ 20.
        """
        for z in np.linspace(0.5, 30.0, 60):
            lhs = mills_ratio(z) * std_normal_pdf(z)
            rhs = std_normal_sf(z)
            assert abs(lhs - rhs) <= (1e-13 + z * z * 3e-16) * rhs

    def test_classical_bounds(self):
        """z/(z^2+1) < mills(z) < 1/z for all z > 0."""
        for z in np.concatenate([np.linspace(0.05, 5, 100), np.linspace(5, 60, 56)]):
            m = mills_ratio(z)
            assert z / (z * z + 1.0) < m < 1.0 / z

    def test_against_quadrature_oracle(self):
        """mills(5) equals the adaptive quadrature of the normalized tail."""
        ref = quad_semi_infinite(
            lambda u: math.exp(-0.5 * u * u + 12.5), 5.0, rel_tol=1e-13, abs_tol=1e-15
        )
        assert abs(mills_ratio(5.0) - ref.value) <= 1e-12 * ref.value

    def test_domain(self):
        with pytest.raises(ValueError):
            mills_ratio(0.0)
        with pytest.raises(ValueError):
            mills_ratio(-1.0)


class TestBvnUpper:
    def test_quadrant_independence(self):
        assert abs(bvn_upper(0.0, 0.0, 0.0) - 0.25) <= 1e-15

    def test_comonotone_center(self):
        assert abs(bvn_upper(0.0, 0.0, 1.0) - 0.5) <= 1e-15

    def test_closed_form_center(self):
        """P(X>0, Y>0) = 1/4 + asin(rho)/(2 pi)."""
        for rho in (-0.9, -0.3, 0.2, 0.5, 0.95):
            ref = 0.25 + math.asin(rho) / (2.0 * math.pi)
            assert abs(bvn_upper(0.0, 0.0, rho) - ref) <= 1e-14

    def test_against_tensor_grid_oracle(self):
        """Conditional quadrature matches 2-D brute force at (1, 1, 0.5)."""
        ref = bvn_tensor_quad(1.0, 1.0, 0.5)
        assert abs(bvn_upper(1.0, 1.0, 0.5) - ref) <= 1e-12

    def test_tiny_values_keep_relative_accuracy(self):
        """Relative accuracy survives down to 1e-43 (frozen references)."""
        for (h, k, rho), ref in BVN_TINY_REFS.items():
            val = bvn_upper(h, k, rho)
            assert abs(val - ref) <= 1e-12 * ref
            assert abs(bvn_upper_log(h, k, rho) - math.log(ref)) <= 1e-12

    def test_exchange_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(60):
            h, k = rng.uniform(-3, 4, 2)
            rho = rng.uniform(-0.98, 0.98)
            a, b = bvn_upper(h, k, rho), bvn_upper(k, h, rho)
            assert abs(a - b) <= 1e-13 * max(a, 1e-300)

    def test_independence_factorization(self):
        for h in (-2.0, 0.0, 1.5, 4.0):
            for k in (-1.0, 0.5, 3.0):
                ref = std_normal_sf(h) * std_normal_sf(k)
                assert abs(bvn_upper(h, k, 0.0) - ref) <= 1e-13 * ref

    def test_monotone_in_thresholds(self):
        for rho in (-0.7, 0.0, 0.7):
            vals = [bvn_upper(h, 0.3, rho) for h in np.linspace(-3, 3, 25)]
            assert all(a >= b for a, b in zip(vals[:-1], vals[1:]))
            vals = [bvn_upper(0.3, k, rho) for k in np.linspace(-3, 3, 25)]
            assert all(a >= b for a, b in zip(vals[:-1], vals[1:]))

    def test_degenerate_correlations_exact(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            h, k = rng.uniform(-3, 3, 2)
            como = std_normal_sf(max(h, k))
            anti = max(0.0, 1.0 - std_normal_cdf(h) - std_normal_cdf(k))
            assert abs(bvn_upper(h, k, 1.0) - como) <= 1e-15
            assert abs(bvn_upper(h, k, -1.0) - anti) <= 1e-15

    def test_near_degenerate_rho_routed(self):
        h, k = 1.0, 0.5
        assert bvn_upper(h, k, 1.0 - 1e-15) == std_normal_sf(1.0)
        assert bvn_upper(h, k, -1.0 + 1e-15) == max(
            0.0, 1.0 - std_normal_cdf(h) - std_normal_cdf(k)
        )

    def test_domain(self):
        with pytest.raises(ValueError):
            bvn_upper(0.0, 0.0, 1.5)
        with pytest.raises(ValueError):
            bvn_upper_log(0.0, 0.0, -1.0001)

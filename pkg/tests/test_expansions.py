"""Closed-form correction terms against the quadrature oracle."""

import math

import numpy as np
import pytest

from powmax.expansions import (
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
from powmax.norming import DependenceRegime, solve_bn, standard, starred
from powmax.special import std_normal_cdf, std_normal_pdf, std_normal_sf

# Quadrature-assembled tau at (lam=1, t=1, x=0.5, y=-0.5), frozen from
# mu(x) + kappa1(I_k quadrature) - kappa2(defining integral).
TAU_ORACLE_A0 = 1.0025079379247062
TAU_ORACLE_A05 = 1.2160463528290004
HALF_TAU_H_A05 = 0.0858193924861296

SMALL_GRID = [(a, l, t, x, y)
              for a in (0.0, 1.0)
              for l in (0.5, 2.0)
              for t in (1.0, 3.0)
              for x in (-1.0, 1.5)
              for y in (0.0, 1.5)]


class TestMuNu:
    def test_mu_at_zero(self):
        for t in (0.5, 1.0, 2.0, 3.0):
            assert mu(t, 0.0) == 1.0

    def test_mu_t2_quadratic_vanishes(self):
        for x in (-2.0, 0.3, 1.7):
            assert abs(mu(2.0, x) - (1.0 + x) * math.exp(-x)) <= 1e-15 * abs(mu(2.0, x))

    def test_mu_t1_point(self):
        assert abs(mu(1.0, 1.0) - 2.5 / math.e) <= 1e-16

    def test_nu_at_zero(self):
        assert nu(0.0) == -3.5

    def test_nu_at_minus_one(self):
        assert abs(nu(-1.0) - (-1.5 * math.e)) <= 1e-15

    def test_nu_negative_everywhere(self):
        """The quadratic 7/2 + 3x + x^2 has negative discriminant."""
        for x in np.linspace(-10.0, 10.0, 201):
            assert nu(x) < 0.0

    def test_mu_domain(self):
        with pytest.raises(ValueError):
            mu(0.0, 1.0)


class TestTauChi:
    def test_exchange_symmetry(self):
        for a, l, t, x, y in SMALL_GRID:
            assert abs(tau(a, l, x, y, t) - tau(a, l, y, x, t)) <= 1e-13
            assert abs(chi(a, l, x, y) - chi(a, l, y, x)) <= 1e-13

    def test_alpha_root_collapses_tau(self):
        """At x = y = 0 and alpha = (2 lam + lam^3)/2 only the mu terms survive."""
        for lam in (0.5, 1.0, 2.0):
            for t in (1.0, 2.0, 3.0):
                a = (2.0 * lam + lam ** 3) / 2.0
                assert abs(tau(a, lam, 0.0, 0.0, t) - 2.0 * std_normal_cdf(lam)) <= 1e-13

    def test_chi_root(self):
        for lam in (0.5, 1.5):
            for x, y in ((-1.0, 0.5), (0.2, 0.2)):
                a = ((x + y + 2.0) * lam + lam ** 3) / 2.0
                assert abs(chi(a, lam, x, y)) <= 1e-14

    def test_decomposition_identity(self):
        """tau = mu(x) Phi(lam + (y-x)/2lam) + mu(y) Phi(lam + (x-y)/2lam) + chi."""
        for a in (-0.5, 0.0, 1.0):
            for lam in (0.3, 0.8, 1.0, 2.0, 5.0):
                for t in (1.0, 2.0, 3.0):
                    for x in (-1.0, 0.0, 0.7):
                        for y in (-0.3, 0.0, 1.5):
                            parts = (
                                mu(t, x) * std_normal_cdf(lam + (y - x) / (2 * lam))
                                + mu(t, y) * std_normal_cdf(lam + (x - y) / (2 * lam))
                                + chi(a, lam, x, y)
                            )
                            assert abs(tau(a, lam, x, y, t) - parts) <= 1e-13

    def test_oracle_value(self):
        assert abs(tau(0.0, 1.0, 0.5, -0.5, 1.0) - TAU_ORACLE_A0) <= 1e-12

    def test_domain(self):
        with pytest.raises(ValueError):
            tau(0.0, 0.0, 0.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            chi(0.0, math.inf, 0.0, 0.0)


class TestMomentIntegrals:
    def test_even_orders_nonnegative(self):
        for lam in (0.5, 1.0, 2.0):
            for y in (-1.0, 0.0, 1.5):
                assert i_k(lam, 0.0, y, 0).value >= 0.0
                assert i_k(lam, 0.0, y, 2).value >= 0.0

    def test_vanishing_tail(self):
        for k in (0, 1, 2):
            assert abs(i_k(1.0, 0.0, 40.0, k).value) < 1e-12

    def test_candidate_closed_form_for_i0(self):
        """I_0 = 2 lam e^{-x} Phi((x-y)/(2 lam) - lam); quadrature is the judge."""
        for lam in (0.5, 1.0, 2.0):
            for x in (-1.0, 0.0, 1.5):
                for y in (-1.0, 0.0, 1.5):
                    cand = 2.0 * lam * math.exp(-x) * std_normal_cdf((x - y) / (2 * lam) - lam)
                    assert abs(i_k(lam, x, y, 0).value - cand) <= 1e-9

    def test_closed_forms_match_quadrature(self):
        for lam in (0.5, 1.0, 2.0):
            for x in (-1.0, 1.5):
                for y in (-1.0, 0.0):
                    for k in (0, 1, 2):
                        q = i_k(lam, x, y, k)
                        assert q.converged
                        assert abs(q.value - i_k_closed(lam, x, y, k)) <= 1e-9

    def test_order_validation(self):
        with pytest.raises(ValueError):
            i_k(1.0, 0.0, 0.0, 3)


class TestKappaAssembly:
    def test_kappa1_closed_vs_quadrature_assembly(self):
        for a, l, t, x, y in SMALL_GRID:
            closed = kappa1(a, l, x, y, t)
            assembled = kappa1_from_integrals(a, l, x, y, t)
            assert abs(closed - assembled) <= 1e-8

    def test_kappa2_closed_vs_defining_integral(self):
        for a, l, t, x, y in SMALL_GRID:
            closed = kappa2(a, l, x, y, t)
            integral = kappa2_integral(l, x, y, t)
            assert integral.converged
            assert abs(closed - integral.value) <= 1e-8

    def test_lemma_assembly_reproduces_tau(self):
        """mu(x) + kappa1 - kappa2 = tau, with both kappas quadrature-backed."""
        for a, l, t, x, y in SMALL_GRID:
            assembled = (mu(t, x) + kappa1_from_integrals(a, l, x, y, t)
                         - kappa2_integral(l, x, y, t).value)
            assert abs(assembled - tau(a, l, x, y, t)) <= 1e-8

    def test_kappa1_t2_x0_coefficient_collapse(self):
        """At t = 2, x = 0 the sfbar line reduces to -2 lam^2 sfbar(lam + y/2lam)."""
        for lam in (0.5, 1.0, 2.0):
            for y in (-1.0, 0.0, 1.5):
                for a in (0.0, 1.0):
                    v0 = lam + y / (2.0 * lam)
                    phi_line = (2.0 * a - lam ** 3 - lam * y) * std_normal_pdf(v0)
                    expected = -2.0 * lam * lam * std_normal_sf(v0) + phi_line
                    assert abs(kappa1(a, lam, 0.0, y, 2.0) - expected) <= 1e-13


class TestUnivariateSecondOrder:
    def test_plug_in_form(self):
        """Standard, t = 1, x = 0: approximation is 1 - 1/b_n^2."""
        b = solve_bn(1e6, "density")
        val = univariate_second_order(1e6, standard(1.0), 0.0)
        assert abs(val - (1.0 - 1.0 / b ** 2)) <= 1e-15

    def test_standard_residual_order(self):
        """|n sf(omega(x)) - two-term| = O(b^-4): scaled residual bounded."""
        for t in (1.0, 2.0, 3.0):
            for x in (-1.0, 0.0, 2.0):
                scaled = []
                for n in (1e4, 1e8, 1e16):
                    b = solve_bn(n, "density")
                    r = exact_upper_tail(n, standard(t), x) - univariate_second_order(
                        n, standard(t), x)
                    scaled.append(abs(r) * b ** 4)
                assert max(scaled) / min(scaled) < 3.0

    def test_starred_residual_order(self):
        for x in (-1.0, 0.0, 2.0):
            scaled = []
            for n in (1e4, 1e8, 1e16):
                b = solve_bn(n, "density")
                r = exact_upper_tail(n, starred(), x) - univariate_second_order(
                    n, starred(), x)
                scaled.append(abs(r) * b ** 6)
            assert max(scaled) / min(scaled) < 3.0


class TestTheoremLimit:
    def test_dependent_starred_point(self):
        tl = theorem_limit(DependenceRegime(0.0), starred(), 0.0, 0.0)
        assert tl.scale_exponent == 2
        assert abs(tl.limit_value - (-0.875 * math.exp(-1.0))) <= 1e-15
        assert tl.family == "dependent-starred"

    def test_independent_standard_point(self):
        tl = theorem_limit(DependenceRegime(math.inf), standard(2.0), 0.0, 0.0)
        assert tl.scale_exponent == 1
        assert abs(tl.limit_value - math.exp(-2.0)) <= 1e-15

    def test_finite_standard_matches_tau_oracle(self):
        tl = theorem_limit(DependenceRegime(1.0, 0.5), standard(1.0), 0.5, -0.5)
        assert tl.scale_exponent == 1
        assert abs(tl.limit_value - HALF_TAU_H_A05) <= 1e-12

    def test_scale_exponent_two_only_for_degenerate_starred(self):
        cases = [
            (DependenceRegime(1.0, 0.0), standard(1.0), 1),
            (DependenceRegime(1.0, 0.0), starred(), 1),
            (DependenceRegime(0.0), standard(2.0), 1),
            (DependenceRegime(math.inf), standard(1.0), 1),
            (DependenceRegime(0.0), starred(), 2),
            (DependenceRegime(math.inf), starred(), 2),
        ]
        for regime, scheme, expo in cases:
            assert theorem_limit(regime, scheme, 0.3, -0.2).scale_exponent == expo

    def test_continuity_toward_independence(self):
        """Finite-lam limit at lam = 50 approaches the independent-case limit."""
        for x in (-1.0, 0.0, 1.0):
            for y in (-1.0, 0.0, 1.0):
                fin = theorem_limit(DependenceRegime(50.0, 0.0), standard(1.0), x, y)
                ind = theorem_limit(DependenceRegime(math.inf), standard(1.0), x, y)
                assert abs(fin.limit_value - ind.limit_value) <= 1e-4

"""
Tests for thinning, convolution, geometric compounding, Poisson mixing,
the self-decomposability quotient and Bernoulli factorisation.

Both the scalar (handle) route and the series route are exercised and
compared against each other.
"""

import math

import numpy as np
import pytest

from lattice.errors import DomainError, FactorizationInvalid, TransformKindError
from lattice.laws import (
    LawFamily,
    PsiFunction,
    alpha_bernoulli,
    alpha_poisson,
    bernoulli,
    binomial,
    degenerate_at_one,
    dml,
    dsml,
    exponential_lt,
    geometric0,
    geometric_shifted,
    make_pgf,
    pgf_eval,
    pgf_handle,
    pmf,
    pmf_series,
    point_mass_lt,
    poisson,
)
from lattice.operators import (
    GeometricConvention,
    bernoulli_factorize,
    convolve_n,
    dtype_equal,
    geometric_compound,
    mixture_pmf_by_quadrature,
    poisson_mixture,
    selfdecomp_quotient,
    thin,
)
from lattice.series import BoundedSeries, TruncatedSeries, eval_series, mul

GRID = np.linspace(0.0, 1.0, 51)


# ---------------------------------------------------------------------------
# thin
# ---------------------------------------------------------------------------

class TestThin:
    def test_handle_poisson(self):
        thinned = thin(pgf_handle(poisson(2.0)), 0.3)
        np.testing.assert_allclose(thinned(GRID), pgf_eval(poisson(0.6), GRID), atol=1e-15)

    def test_handle_alpha_poisson(self):
        lam, alpha, c = 1.2, 0.6, 0.45
        thinned = thin(pgf_handle(alpha_poisson(lam, alpha)), c)
        np.testing.assert_allclose(thinned(GRID), pgf_eval(alpha_poisson(lam * c ** alpha, alpha), GRID), atol=1e-14)

    def test_law_degenerate_becomes_bernoulli(self):
        assert thin(degenerate_at_one(), 0.3) == bernoulli(0.3)

    def test_series_route(self):
        result = thin(pmf(poisson(2.0), order=64), 0.3)
        assert isinstance(result, BoundedSeries)
        assert result.series.max_abs_diff(pmf(poisson(0.6), order=64).series) <= result.tail_bound + 1e-13

    def test_semigroup(self):
        P = pgf_handle(dml(1.5, 0.7))
        twice = thin(thin(P, 0.6), 0.5)
        once = thin(P, 0.3)
        assert np.max(np.abs(twice(GRID) - once(GRID))) < 1e-12

    @pytest.mark.parametrize("c", [0.0, 1.0, 1.3])
    def test_open_interval(self, c):
        with pytest.raises(DomainError):
            thin(pgf_handle(poisson(1.0)), c)

    def test_tiny_thinning_keeps_precision(self):
        c = 1e-10
        thinned = thin(pgf_handle(dml(1.0, 0.3)), c)
        expected = 1.0 / (1.0 + (c * (1.0 - GRID)) ** 0.3)
        np.testing.assert_allclose(thinned(GRID), expected, rtol=1e-14, atol=0.0)
        assert thinned.complement(0.5) == pytest.approx(1.0 / (1.0 + (0.5 * c) ** 0.3), rel=1e-14)

    def test_handle_without_complement(self):
        P = make_pgf(lambda s: np.exp(2.0 * (np.asarray(s) - 1.0)), label='poisson-by-hand')
        thinned = thin(P, 0.3)
        assert thinned.complement is None
        np.testing.assert_allclose(thinned(GRID), pgf_eval(poisson(0.6), GRID), atol=1e-15)

    def test_lt_rejected(self):
        with pytest.raises(TransformKindError):
            thin(exponential_lt(1.0), 0.5)

    def test_unsupported_type(self):
        with pytest.raises(TypeError):
            thin([0.5, 0.5], 0.5)


# ---------------------------------------------------------------------------
# convolve_n
# ---------------------------------------------------------------------------

class TestConvolve:
    def test_identity(self):
        P = pgf_handle(dml(1.0, 0.5))
        np.testing.assert_allclose(convolve_n(P, 1)(GRID), P(GRID))

    def test_bernoulli_to_binomial(self):
        series = convolve_n(pmf(bernoulli(0.3), order=6).series, 6)
        np.testing.assert_allclose(series.coeffs, pmf(binomial(6, 0.3), order=6).coeffs, atol=1e-15)

    def test_alpha_poisson_law(self):
        assert convolve_n(alpha_poisson(0.5, 0.6), 4) == alpha_poisson(2.0, 0.6)

    def test_alpha_poisson_handle(self):
        P = convolve_n(pgf_handle(alpha_poisson(0.5, 0.6)), 4)
        np.testing.assert_allclose(P(GRID), pgf_eval(alpha_poisson(2.0, 0.6), GRID), atol=1e-15)

    def test_law_without_closed_form_gives_handle(self):
        P = convolve_n(dml(1.0, 0.5), 2)
        np.testing.assert_allclose(P(GRID), pgf_eval(dml(1.0, 0.5), GRID) ** 2)

    def test_bounded_series_keeps_tail(self):
        result = convolve_n(pmf(alpha_poisson(1.0, 0.5), order=64), 2)
        assert result.tail_bound >= 1.0 - result.coeffs.sum() - 1e-15

    @pytest.mark.parametrize("n", [0, -2, 1.5])
    def test_bad_power(self, n):
        with pytest.raises(DomainError):
            convolve_n(pgf_handle(poisson(1.0)), n)


# ---------------------------------------------------------------------------
# geometric_compound
# ---------------------------------------------------------------------------

class TestGeometricCompound:
    def test_degenerate_gives_shifted_geometric(self):
        assert geometric_compound(degenerate_at_one(), 0.4) == geometric_shifted(0.4)

    def test_degenerate_handle(self):
        P = geometric_compound(pgf_handle(degenerate_at_one()), 0.4)
        np.testing.assert_allclose(P(GRID), pgf_eval(geometric_shifted(0.4), GRID), atol=1e-15)

    def test_zero_based_degenerate_gives_geometric0(self):
        law = geometric_compound(degenerate_at_one(), 0.25, GeometricConvention.ZERO_BASED)
        assert law.family is LawFamily.GEOMETRIC0
        assert law['lambda'] == pytest.approx(3.0)

    def test_thinned_dml_is_fixed_point(self):
        lam, alpha, p = 1.0, 0.5, 0.25
        b = p ** (1.0 / alpha)
        P = geometric_compound(thin(pgf_handle(dml(lam, alpha)), b), p)
        assert np.max(np.abs(P(GRID) - pgf_eval(dml(lam, alpha), GRID))) < 1e-12

    def test_dml_law_rate_divides(self):
        assert geometric_compound(dml(1.0, 0.5), 0.5) == dml(2.0, 0.5)

    def test_dsml_law_stays_in_family(self):
        psi = PsiFunction(alpha=0.6, b=0.3, A=0.4)
        compounded = geometric_compound(dsml(psi), 0.5)
        expected = geometric_compound(pgf_handle(dsml(psi)), 0.5)
        np.testing.assert_allclose(pgf_eval(compounded, GRID), expected(GRID), atol=1e-14)

    def test_p_near_one_is_identity(self):
        P = pgf_handle(poisson(1.0))
        np.testing.assert_allclose(geometric_compound(P, 1.0 - 1e-9)(GRID), P(GRID), atol=1e-8)

    @pytest.mark.parametrize("convention", list(GeometricConvention))
    def test_series_matches_handle(self, convention):
        law = alpha_poisson(0.8, 0.7)
        series = geometric_compound(pmf_series(law, 256), 0.3, convention)
        handle = geometric_compound(pgf_handle(law), 0.3, convention)
        s = np.linspace(0.0, 0.9, 10)
        assert np.max(np.abs(eval_series(series, s) - handle(s))) < 1e-14

    @pytest.mark.parametrize("p", [0.0, 1.0])
    def test_p_range(self, p):
        with pytest.raises(DomainError):
            geometric_compound(pgf_handle(poisson(1.0)), p)


# ---------------------------------------------------------------------------
# Poisson mixtures
# ---------------------------------------------------------------------------

class TestPoissonMixture:
    def test_exponential_mixing_is_geometric0(self):
        P = poisson_mixture(exponential_lt(1.5))
        np.testing.assert_allclose(P(GRID), pgf_eval(geometric0(1.5), GRID), atol=1e-15)

    def test_point_mass_mixing_is_poisson(self):
        P = poisson_mixture(point_mass_lt(2.0))
        np.testing.assert_allclose(P(GRID), pgf_eval(poisson(2.0), GRID), atol=1e-15)

    def test_quadrature_oracle(self):
        series = mixture_pmf_by_quadrature(lambda w: math.exp(-w), order=20)
        expected = pmf(geometric0(1.0), order=20).coeffs
        np.testing.assert_allclose(series.coeffs, expected, atol=1e-6)


# ---------------------------------------------------------------------------
# selfdecomp_quotient
# ---------------------------------------------------------------------------

class TestSelfdecompQuotient:
    def test_alpha_poisson(self):
        lam, a, alpha = 1.0, 0.6, 0.4
        quotient = selfdecomp_quotient(alpha_poisson(lam, a), alpha, order=128)
        expected = pmf_series(alpha_poisson(lam * (1.0 - alpha ** a), a), 128)
        assert quotient.max_abs_diff(expected) < 1e-12

    def test_poisson(self):
        quotient = selfdecomp_quotient(poisson(2.0), 0.3, order=40)
        assert quotient.max_abs_diff(pmf_series(poisson(1.4), 40)) < 1e-14

    def test_degenerate_is_not_self_decomposable(self):
        alpha = 0.4
        quotient = selfdecomp_quotient(degenerate_at_one(), alpha, order=8)
        assert quotient[1] == pytest.approx(1.0 / (1.0 - alpha))
        assert quotient[2] < 0.0

    def test_product_recovers_law(self):
        law = dml(1.3, 0.6)
        alpha = 0.35
        quotient = selfdecomp_quotient(law, alpha, order=128)
        thinned = pmf_series(thin(law, alpha), 128)
        assert mul(thinned, quotient).max_abs_diff(pmf_series(law, 128)) < 1e-11

    def test_series_input(self):
        series = pmf(poisson(2.0), order=60)
        quotient = selfdecomp_quotient(series, 0.5)
        assert quotient.max_abs_diff(pmf_series(poisson(1.0), 60)) < 1e-12

    def test_shifted_geometric_uses_series_route(self):
        quotient = selfdecomp_quotient(geometric_shifted(0.5), 0.5, order=32)
        assert isinstance(quotient, TruncatedSeries)

    @pytest.mark.parametrize("alpha", [0.0, 1.0])
    def test_alpha_range(self, alpha):
        with pytest.raises(DomainError):
            selfdecomp_quotient(poisson(1.0), alpha)


# ---------------------------------------------------------------------------
# bernoulli_factorize
# ---------------------------------------------------------------------------

class TestBernoulliFactorize:
    def test_dml(self):
        inner, c = bernoulli_factorize(dml(0.5, 0.5), 0.25)
        assert inner == dml(2.0, 0.5)
        assert c == pytest.approx(0.0625)
        np.testing.assert_allclose(pgf_eval(thin(inner, c), GRID), pgf_eval(dml(0.5, 0.5), GRID), atol=1e-12)

    def test_alpha_bernoulli(self):
        inner, c = bernoulli_factorize(alpha_bernoulli(0.3, 1.0), 0.6)
        assert inner == alpha_bernoulli(0.6, 1.0)
        assert c == pytest.approx(0.5)

    def test_alpha_bernoulli_invalid(self):
        with pytest.raises(FactorizationInvalid):
            bernoulli_factorize(alpha_bernoulli(0.3, 0.5), 0.2)

    @pytest.mark.parametrize("law", [alpha_poisson(0.7, 0.4), poisson(1.1), geometric0(0.9)], ids=str)
    def test_round_trip(self, law):
        inner, c = bernoulli_factorize(law, 0.3)
        thinned = thin(pgf_handle(inner), c)
        assert np.max(np.abs(thinned(GRID) - pgf_eval(law, GRID))) < 1e-12

    def test_unsupported_family(self):
        with pytest.raises(DomainError):
            bernoulli_factorize(binomial(3, 0.5), 0.5)


# ---------------------------------------------------------------------------
# dtype_equal
# ---------------------------------------------------------------------------

class TestDtypeEqual:
    def test_thinned_pair_passes(self):
        lam, alpha, c = 1.0, 0.6, 0.4
        report = dtype_equal(alpha_poisson(lam * c ** alpha, alpha), alpha_poisson(lam, alpha), c)
        assert report.passed
        assert report.residual < 1e-12

    def test_same_law_fails(self):
        report = dtype_equal(dml(1.0, 0.5), dml(1.0, 0.5), 0.5)
        assert not report.passed

    def test_distinct_families_fail(self):
        report = dtype_equal(poisson(1.0), geometric0(1.0), 0.5)
        assert not report.passed
        assert report.residual > 0.01

    def test_series_route(self):
        lam, alpha, c = 1.0, 0.6, 0.4
        report = dtype_equal(pmf(alpha_poisson(lam * c ** alpha, alpha), order=256), alpha_poisson(lam, alpha), c)
        assert report.passed
        assert report.tolerance > 1e-8

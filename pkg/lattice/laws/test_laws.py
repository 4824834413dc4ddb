"""
Tests for the law catalog, semi-stable exponents and the PGF/LT bridge.

Covers:
- PsiFunction: evaluation, the functional equation, (a, b) construction, dilation
- TransformHandle: normalisation, kind errors, the two bridge directions
- LawSpec: validation, aliases, grammar parsing
- pgf_eval / pmf: worked values and series-vs-scalar agreement per family
- thin_law / convolve_law closed forms
"""

import math

import numpy as np
import pytest
from scipy import stats

from lattice.errors import DomainError, LawSpecParseError, NotAValidPMF, TransformKindError
from lattice.laws import (
    LawFamily,
    LawSpec,
    PsiFunction,
    TransformKind,
    alpha_bernoulli,
    alpha_binomial,
    alpha_poisson,
    bernoulli,
    binomial,
    convolve_law,
    degenerate_at_one,
    degenerate_lt,
    dml,
    dsml,
    dss,
    exponential_lt,
    geometric0,
    geometric_shifted,
    lt_from_pgf,
    make_pgf,
    parse_law_spec,
    parse_law_tokens,
    pgf_eval,
    pgf_formula,
    pgf_from_lt,
    pgf_handle,
    pgf_of_complement,
    pmf,
    point_mass_lt,
    poisson,
    psi_eval,
    stable_lt,
    thin_law,
)
from lattice.series import eval_series

GRID = np.linspace(0.0, 1.0, 21)


# ---------------------------------------------------------------------------
# PsiFunction
# ---------------------------------------------------------------------------

class TestPsiFunction:
    def test_power_law_value(self):
        assert psi_eval(PsiFunction(alpha=0.5, b=0.25), 4.0) == pytest.approx(2.0)

    def test_value_at_one(self):
        assert psi_eval(PsiFunction(alpha=0.7, b=0.4, A=0.3), 1.0) == pytest.approx(0.7)

    def test_non_positive_argument(self):
        with pytest.raises(DomainError):
            psi_eval(PsiFunction(alpha=0.5, b=0.25), 0.0)

    def test_scale_relation(self):
        psi = PsiFunction(alpha=0.6, b=0.3, A=0.4)
        assert psi.a * psi.b ** psi.alpha == pytest.approx(1.0, abs=1e-12)
        assert psi.a > 1.0
        assert psi.k == pytest.approx(-2.0 * math.pi / math.log(0.3))

    @pytest.mark.parametrize("A,phase", [(0.0, 0.0), (0.3, 0.0), (0.9, 1.7)])
    def test_functional_equation(self, A, phase):
        psi = PsiFunction(alpha=0.55, b=0.2, A=A, phase=phase)
        u = np.linspace(0.01, 1.0, 100)
        residual = np.max(np.abs(psi(u) - psi.a * psi(psi.b * u)))
        assert residual < 1e-12

    def test_halved_frequency_breaks_equation(self):
        good = PsiFunction(alpha=0.5, b=0.25, A=0.3)
        bad = PsiFunction(alpha=0.5, b=0.25, A=0.3, k=good.k / 2.0)
        u = np.linspace(0.05, 1.0, 50)
        assert np.max(np.abs(bad(u) - bad.a * bad(bad.b * u))) > 1e-3
        assert not bad.period_matched

    def test_from_scale(self):
        psi = PsiFunction.from_scale(a=2.0, b=0.3, A=0.5)
        assert psi.alpha == pytest.approx(math.log(2.0) / -math.log(0.3))
        assert psi.a == pytest.approx(2.0)

    def test_from_scale_rejects_ab_above_one(self):
        with pytest.raises(DomainError):
            PsiFunction.from_scale(a=4.0, b=0.5)

    @pytest.mark.parametrize("kwargs", [
        {'alpha': 0.0, 'b': 0.5},
        {'alpha': 1.2, 'b': 0.5},
        {'alpha': 0.5, 'b': 1.0},
        {'alpha': 0.5, 'b': 0.5, 'A': 1.0},
        {'alpha': 0.5, 'b': 0.5, 'scale': 0.0},
    ])
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(DomainError):
            PsiFunction(**kwargs)

    def test_dilate(self):
        psi = PsiFunction(alpha=0.6, b=0.3, A=0.4, scale=1.5)
        c = 0.37
        u = np.linspace(0.01, 1.0, 40)
        np.testing.assert_allclose(psi.dilate(c)(u), psi(c * u), rtol=1e-12)

    def test_series_matches_scalar(self):
        psi = PsiFunction(alpha=0.5, b=0.25, A=0.3, scale=2.0, phase=0.4)
        s = np.linspace(0.0, 0.8, 9)
        np.testing.assert_allclose(eval_series(psi.series(400), s), psi(1.0 - s), atol=1e-10)


# ---------------------------------------------------------------------------
# Transform handles
# ---------------------------------------------------------------------------

class TestTransforms:
    def test_complement_form(self):
        P = pgf_handle(geometric_shifted(0.4))
        np.testing.assert_allclose(P.complement(1.0 - GRID), P(GRID), atol=1e-15)
        assert pgf_of_complement(dml(1.0, 0.5), 1e-20) == pytest.approx(1.0 / (1.0 + 1e-10), rel=1e-15)
        assert pgf_of_complement(degenerate_at_one(), 0.25) == 0.75

    def test_bridges_keep_complement(self):
        phi = stable_lt(1.3, 0.6)
        assert pgf_from_lt(phi).complement is phi.evaluator
        P = pgf_handle(dml(2.0, 0.5))
        assert lt_from_pgf(P).evaluator is P.complement

    def test_unnormalised_handle_rejected(self):
        with pytest.raises(DomainError):
            make_pgf(lambda s: 0.5 * np.asarray(s))

    def test_exponential_gives_geometric0(self):
        P = pgf_from_lt(exponential_lt(2.0))
        assert P.kind is TransformKind.PGF
        np.testing.assert_allclose(P(GRID), pgf_eval(geometric0(2.0), GRID), atol=1e-15)

    def test_stable_gives_alpha_poisson(self):
        P = pgf_from_lt(stable_lt(1.3, 0.6))
        np.testing.assert_allclose(P(GRID), pgf_eval(alpha_poisson(1.3, 0.6), GRID), atol=1e-15)

    def test_degenerate_gives_mass_at_zero(self):
        np.testing.assert_allclose(pgf_from_lt(degenerate_lt())(GRID), 1.0)

    def test_point_mass_gives_poisson(self):
        P = pgf_from_lt(point_mass_lt(1.7))
        np.testing.assert_allclose(P(GRID), pgf_eval(poisson(1.7), GRID), atol=1e-15)

    def test_wrong_kinds(self):
        with pytest.raises(TransformKindError):
            pgf_from_lt(pgf_handle(poisson(1.0)))
        with pytest.raises(TransformKindError):
            lt_from_pgf(exponential_lt(1.0))

    def test_candidate_lt_is_provisional(self):
        phi = lt_from_pgf(pgf_handle(poisson(1.0)))
        assert phi.provisional
        assert phi.kind is TransformKind.LT
        assert phi(2.0) == pytest.approx(math.exp(-2.0))

    def test_alpha_bernoulli_candidate_goes_negative(self):
        phi = lt_from_pgf(pgf_handle(alpha_bernoulli(0.5, 0.5)))
        assert phi(5.0) == pytest.approx(1.0 - 0.5 * math.sqrt(5.0))
        assert phi(5.0) < 0.0

    def test_round_trip(self):
        P = pgf_handle(dml(2.0, 0.5))
        back = pgf_from_lt(lt_from_pgf(P))
        assert np.max(np.abs(back(GRID) - P(GRID))) < 1e-14

    def test_lt_domain_enforced(self):
        with pytest.raises(DomainError):
            exponential_lt(1.0)(-0.5)


# ---------------------------------------------------------------------------
# LawSpec and the grammar
# ---------------------------------------------------------------------------

class TestLawSpec:
    def test_missing_parameter(self):
        with pytest.raises(DomainError):
            LawSpec.create(LawFamily.DML, {'lambda': 1.0})

    def test_unknown_parameter(self):
        with pytest.raises(DomainError):
            LawSpec.create(LawFamily.POISSON, {'lambda': 1.0, 'alpha': 0.5})

    @pytest.mark.parametrize("factory,args", [
        (poisson, (0.0,)),
        (alpha_poisson, (1.0, 1.5)),
        (bernoulli, (1.5,)),
        (binomial, (2.5, 0.3)),
        (dml, (-1.0, 0.5)),
        (geometric_shifted, (0.0,)),
    ])
    def test_ranges(self, factory, args):
        with pytest.raises(DomainError):
            factory(*args)

    def test_geometric0_from_p(self):
        law = LawSpec.create(LawFamily.GEOMETRIC0, p=0.25)
        assert law['lambda'] == pytest.approx(3.0)

    def test_semi_law_from_a(self):
        law = LawSpec.create(LawFamily.DSML, {'b': 0.3, 'a': 2.0, 'A': 0.5})
        assert law.psi.a == pytest.approx(2.0)

    def test_semi_law_rejects_ab_above_one(self):
        with pytest.raises(DomainError):
            LawSpec.create(LawFamily.DSS, {'b': 0.6, 'a': 3.0})

    def test_value_semantics(self):
        assert alpha_poisson(1.0, 0.5) == alpha_poisson(1.0, 0.5)
        assert hash(dml(1.0, 0.5)) == hash(dml(1.0, 0.5))

    def test_parse(self):
        law = parse_law_spec("alpha-poisson lambda=1.0 alpha=0.7")
        assert law == alpha_poisson(1.0, 0.7)

    def test_parse_reserved(self):
        law, extras = parse_law_tokens(["poisson", "lambda=2", "n=16", "seed=3"], reserved=("n", "seed"))
        assert law == poisson(2.0)
        assert extras == {'n': '16', 'seed': '3'}

    @pytest.mark.parametrize("text,token", [
        ("gamma lambda=1", "gamma"),
        ("poisson lambda", "lambda"),
        ("poisson lambda=abc", "lambda=abc"),
        ("poisson lambda=1 lambda=2", "lambda=2"),
    ])
    def test_parse_errors_name_token(self, text, token):
        with pytest.raises(LawSpecParseError) as info:
            parse_law_spec(text)
        assert info.value.token == token

    def test_parse_rejects_misspelled_key(self):
        with pytest.raises(LawSpecParseError):
            parse_law_spec("dml lambda=1 alhpa=0.5")

    def test_parse_error_is_domain_error(self):
        with pytest.raises(DomainError):
            parse_law_spec("")


# ---------------------------------------------------------------------------
# pgf_eval
# ---------------------------------------------------------------------------

ALL_LAWS = [
    bernoulli(0.3),
    binomial(4, 0.6),
    alpha_bernoulli(0.5, 0.5),
    alpha_binomial(0.4, 0.7, 3),
    poisson(1.5),
    alpha_poisson(1.0, 0.6),
    geometric0(2.0),
    geometric_shifted(0.35),
    dml(2.0, 0.5),
    dss(PsiFunction(alpha=0.7, b=0.4, A=0.2)),
    dsml(PsiFunction(alpha=0.6, b=0.3, A=0.4)),
    degenerate_at_one(),
]


class TestPgfEval:
    def test_alpha_one_is_poisson(self):
        assert pgf_eval(alpha_poisson(1.0, 1.0), 0.0) == pytest.approx(math.exp(-1.0))

    def test_dml_at_zero(self):
        assert pgf_eval(dml(2.0, 0.5), 0.0) == pytest.approx(1.0 / 3.0)

    @pytest.mark.parametrize("law", ALL_LAWS, ids=str)
    def test_normalised(self, law):
        assert pgf_eval(law, 1.0) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("s", [-0.1, 1.01, float('nan')])
    def test_outside_unit_interval(self, s):
        with pytest.raises(DomainError):
            pgf_eval(poisson(1.0), s)

    def test_vectorised(self):
        values = pgf_eval(geometric_shifted(0.5), np.array([0.0, 0.5, 1.0]))
        np.testing.assert_allclose(values, [0.0, 0.25 / 0.75, 1.0])


# ---------------------------------------------------------------------------
# pmf
# ---------------------------------------------------------------------------

def _random_law(family: LawFamily, rng) -> LawSpec:
    alpha = rng.uniform(0.2, 1.0)
    lam = rng.uniform(0.1, 4.0)
    if family is LawFamily.BERNOULLI:
        return bernoulli(rng.uniform(0.05, 1.0))
    if family is LawFamily.BINOMIAL:
        return binomial(int(rng.integers(1, 12)), rng.uniform(0.05, 1.0))
    if family is LawFamily.ALPHA_BERNOULLI:
        return alpha_bernoulli(rng.uniform(0.05, 1.0), alpha)
    if family is LawFamily.ALPHA_BINOMIAL:
        return alpha_binomial(rng.uniform(0.05, 1.0), alpha, int(rng.integers(1, 8)))
    if family is LawFamily.POISSON:
        return poisson(lam)
    if family is LawFamily.ALPHA_POISSON:
        return alpha_poisson(lam, alpha)
    if family is LawFamily.GEOMETRIC0:
        return geometric0(lam)
    if family is LawFamily.GEOMETRIC_SHIFTED:
        return geometric_shifted(rng.uniform(0.1, 1.0))
    if family is LawFamily.DML:
        return dml(lam, alpha)
    if family in (LawFamily.DSS, LawFamily.DSML):
        psi = PsiFunction(alpha=alpha, b=rng.uniform(0.1, 0.9), scale=lam)
        return dss(psi) if family is LawFamily.DSS else dsml(psi)
    return degenerate_at_one()


class TestPmf:
    def test_alpha_bernoulli_values(self):
        result = pmf(alpha_bernoulli(0.5, 0.5), order=3)
        np.testing.assert_allclose(result.coeffs, [0.5, 0.25, 0.0625, 0.03125], atol=1e-15)

    @pytest.mark.parametrize("lam", [0.5, 2.0])
    def test_alpha_one_is_poisson(self, lam):
        result = pmf(alpha_poisson(lam, 1.0), order=40)
        np.testing.assert_allclose(result.coeffs, stats.poisson.pmf(np.arange(41), lam), atol=1e-15)

    def test_dml_alpha_one_is_geometric(self):
        lam = 1.5
        result = pmf(dml(lam, 1.0), order=30)
        expected = (1.0 / (1.0 + lam)) * (lam / (1.0 + lam)) ** np.arange(31)
        np.testing.assert_allclose(result.coeffs, expected, atol=1e-15)

    def test_geometric_shifted_support(self):
        result = pmf(geometric_shifted(0.4), order=20)
        assert result.coeffs[0] == 0.0
        np.testing.assert_allclose(result.coeffs[1:], 0.4 * 0.6 ** np.arange(20), atol=1e-15)

    def test_alpha_poisson_first_ratio(self):
        lam, alpha = 1.3, 0.45
        c = pmf(alpha_poisson(lam, alpha), order=8).coeffs
        assert c[1] / c[0] == pytest.approx(lam * alpha, rel=1e-12)

    def test_tail_bound(self):
        result = pmf(alpha_poisson(1.0, 0.5), order=64)
        assert result.tail_bound == pytest.approx(1.0 - result.coeffs.sum())
        assert result.tail_bound > 0.0

    @pytest.mark.slow
    @pytest.mark.parametrize("family", [f for f in LawFamily], ids=lambda f: f.value)
    def test_series_agrees_with_scalar(self, family):
        rng = np.random.default_rng(sum(map(ord, family.value)))
        s = np.linspace(0.0, 1.0, 21)
        for _ in range(100):
            law = _random_law(family, rng)
            result = pmf(law, order=256)
            assert np.all(result.coeffs >= 0.0)
            gap = np.max(np.abs(eval_series(result.series, s) - pgf_eval(law, s)))
            assert gap <= result.tail_bound + 1e-10, str(law)

    def test_dss_with_zero_amplitude_is_alpha_poisson(self):
        psi = PsiFunction(alpha=0.6, b=0.35, scale=1.4)
        lhs = pmf(dss(psi), order=128).series
        rhs = pmf(alpha_poisson(1.4, 0.6), order=128).series
        assert lhs.max_abs_diff(rhs) < 1e-12

    def test_dsml_with_zero_amplitude_is_dml(self):
        psi = PsiFunction(alpha=0.6, b=0.35, scale=1.4)
        lhs = pmf(dsml(psi), order=128).series
        rhs = pmf(dml(1.4, 0.6), order=128).series
        assert lhs.max_abs_diff(rhs) < 1e-12

    def test_periodic_dsml_with_near_pole_is_not_a_pmf(self):
        # 1 + psi(1 - s) nearly vanishes inside the unit disk
        law = dsml(PsiFunction(alpha=0.7, b=0.3, A=0.4))
        with pytest.raises(NotAValidPMF):
            pmf(law, order=64)

    def test_periodic_dsml_agrees_with_scalar(self):
        law = dsml(PsiFunction(alpha=0.7, b=0.01, A=0.05))
        result = pmf(law, order=512)
        s = np.linspace(0.0, 1.0, 21)
        assert np.max(np.abs(result(s) - pgf_eval(law, s))) <= result.tail_bound + 1e-10


# ---------------------------------------------------------------------------
# Closed-form thinning and convolution
# ---------------------------------------------------------------------------

THINNABLE = [law for law in ALL_LAWS if law.family is not LawFamily.GEOMETRIC_SHIFTED]


class TestThinLaw:
    @pytest.mark.parametrize("law", THINNABLE, ids=str)
    def test_matches_substitution(self, law):
        c = 0.4
        thinned = thin_law(law, c)
        np.testing.assert_allclose(pgf_eval(thinned, GRID), pgf_formula(law, 1.0 - c + c * GRID), atol=1e-14)

    def test_poisson(self):
        assert thin_law(poisson(2.0), 0.25) == poisson(0.5)

    def test_alpha_poisson(self):
        assert thin_law(alpha_poisson(1.0, 0.5), 0.25)['lambda'] == pytest.approx(0.5)

    def test_degenerate_becomes_bernoulli(self):
        assert thin_law(degenerate_at_one(), 0.3) == bernoulli(0.3)

    def test_shifted_geometric_has_no_closed_form(self):
        with pytest.raises(DomainError):
            thin_law(geometric_shifted(0.5), 0.5)

    @pytest.mark.parametrize("c", [0.0, 1.5])
    def test_probability_range(self, c):
        with pytest.raises(DomainError):
            thin_law(poisson(1.0), c)


class TestConvolveLaw:
    def test_bernoulli_gives_binomial(self):
        assert convolve_law(bernoulli(0.3), 5) == binomial(5, 0.3)

    def test_alpha_poisson_scales_rate(self):
        assert convolve_law(alpha_poisson(0.7, 0.5), 3)['lambda'] == pytest.approx(2.1)

    def test_dss_power(self):
        law = dss(PsiFunction(alpha=0.6, b=0.3, A=0.3))
        np.testing.assert_allclose(pgf_eval(convolve_law(law, 2), GRID), pgf_eval(law, GRID) ** 2, atol=1e-14)

    def test_no_closed_form(self):
        assert convolve_law(dml(1.0, 0.5), 2) is None

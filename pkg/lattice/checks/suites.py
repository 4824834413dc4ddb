"""
Verification suites.

Each suite evaluates one distributional identity or membership property
and returns a CheckReport. Identity suites evaluate the scalar route on a
grid of [0, 1] and, where the law has a series form, repeat the identity
on exact coefficient series; the two routes must reach the same verdict
(condition ``routes_agree``).

Nothing here draws random numbers, so verdicts are reproducible bit for bit.
"""

import logging
import math
from dataclasses import replace
from typing import Any, Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from config.lattice_config import lattice_config
from lattice.checks.limits import linear_growth_limit, log_growth_limit
from lattice.checks.report import CheckReport
from lattice.errors import DomainError, SeriesRangeError, SingularSeriesError
from lattice.laws.catalog import (
    LawFamily,
    LawSpec,
    alpha_poisson,
    dml,
    pgf_handle,
    pmf_series,
    thin_law,
)
from lattice.laws.psi import PsiFunction
from lattice.laws.transforms import TransformHandle, make_pgf
from lattice.operators.compounding import geometric_compound
from lattice.operators.thinning import (
    bernoulli_factorize,
    convolve_n,
    default_grid,
    dtype_equal,
    selfdecomp_quotient,
    thin,
)
from lattice.series.power_series import (
    BoundedSeries,
    TruncatedSeries,
    exp_series,
    lumped_total_variation,
    pow_int,
    reciprocal_series,
)

logger = logging.getLogger(__name__)

CM_NOTE = ("finite-difference test of a necessary condition: a pass is consistent "
           "with complete monotonicity, not a proof of it")
TRUNCATION_NOTE = "verdict holds at the stated truncation order; it is evidence, not proof"
SERIES_NOT_APPLICABLE_NOTE = ("series route not applied: a side of the identity is not a pmf at the "
                              "truncation order, so its coefficients carry no absolute scale")
MONOTONE_SLACK = 1.1
MONOTONE_FLOOR = 1e-13


def _grid(grid: Optional[Sequence[float]]) -> np.ndarray:
    return default_grid() if grid is None else np.asarray(grid, dtype=np.float64)


def _order(order: Optional[int]) -> int:
    return lattice_config.truncation_order if order is None else int(order)


def _handle_tol(tolerance: Optional[float]) -> float:
    return lattice_config.handle_tol if tolerance is None else float(tolerance)


def _evaluate(f: Callable[[Any], Any], x: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(f(x), dtype=np.float64)
    except TypeError:
        values = None
    if values is None or values.shape != x.shape:
        values = np.vectorize(lambda t: float(f(float(t))))(x)
    return values


def _series_is_pmf(series: TruncatedSeries, tol: float) -> bool:
    c = series.coeffs
    return bool(c.min() >= -tol and c.max() <= 1.0 + tol)


def _with_series_route(report: CheckReport,
                       build: Callable[[], Tuple[TruncatedSeries, TruncatedSeries]]) -> CheckReport:
    """
    Attach the series route and require both routes to agree.

    The series route applies only when both sides are pmfs at the truncation
    order; otherwise it is recorded as not applicable and the verdict rests
    on the scalar route.
    """
    series_tol = lattice_config.series_tol
    try:
        lhs, rhs = build()
    except (SeriesRangeError, SingularSeriesError) as e:
        logger.info("%s: series route not applicable: %s", report.suite, e)
        lhs = rhs = None
    pmf_tol = lattice_config.pmf_tol
    if lhs is None or not (_series_is_pmf(lhs, pmf_tol) and _series_is_pmf(rhs, pmf_tol)):
        parameters = dict(report.parameters, series_route='not-applicable')
        return replace(report, parameters=parameters, notes=list(report.notes) + [SERIES_NOT_APPLICABLE_NOTE])

    series_residual = lhs.max_abs_diff(rhs)
    agree = report.residual <= report.tolerance
    agree = agree == (series_residual <= series_tol)
    conditions = dict(report.conditions, routes_agree=agree)
    parameters = dict(report.parameters, series_route='applied', series_residual=float(series_residual),
                      series_tolerance=series_tol)
    if not agree:
        logger.warning("%s: scalar and series routes disagree (series residual %.3e)",
                       report.suite, series_residual)
    return replace(report, conditions=conditions, parameters=parameters)


def _is_monotone(distances: Sequence[float], floor: float = MONOTONE_FLOOR) -> bool:
    """Non-increasing up to MONOTONE_SLACK; distances at or below floor count as converged."""
    d = list(distances)
    return all(b <= MONOTONE_SLACK * a or b <= floor for a, b in zip(d, d[1:]))



# ---------------------------------------------------------------------------
# Monotonicity checks
# ---------------------------------------------------------------------------

def abs_monotone_check(series: Union[TruncatedSeries, BoundedSeries], pmf_tol: Optional[float] = None,
                       label: Optional[str] = None) -> CheckReport:
    """
    Absolute monotonicity on (0, 1) through coefficient nonnegativity.

    residual = -min coefficient (0 when all are nonnegative).
    """
    if isinstance(series, BoundedSeries):
        series = series.series
    tol = lattice_config.pmf_tol if pmf_tol is None else pmf_tol
    c = series.coeffs
    worst = int(np.argmin(c))
    residual = max(0.0, -float(c[worst]))
    bad = np.flatnonzero(c < -tol)
    details = [{'index': int(i), 'coefficient': float(c[i])} for i in bad[:50]]
    notes = [f"{bad.size} coefficients below -{tol:g}, first 50 listed"] if bad.size > 50 else []
    return CheckReport('abs-monotone', residual, worst, tol, details=details, notes=notes,
                       parameters={'label': label or '', 'order': series.order})


def _cm_grid(s_max: float) -> np.ndarray:
    geometric = np.geomspace(min(0.01, 0.1 * s_max), s_max, 40)
    integers = np.arange(1.0, math.floor(s_max) + 1.0)
    return np.minimum(np.union1d(geometric, integers), s_max)


def cm_grid_check(f: Callable[[Any], Any], s_max: float = 10.0, depth: int = 6,
                  grid: Optional[Sequence[float]] = None, tolerance: Optional[float] = None) -> CheckReport:
    """
    Complete-monotonicity screen on (0, s_max].

    At each grid point s, with step h = min(s / 4, (s_max - s) / depth),
    requires (-1)**j Delta_h**j f(s) >= -tolerance for j = 0..depth (j = 0
    is f >= 0). The step cap keeps every stencil point inside (0, s_max].
    """
    if not s_max > 0.0:
        raise DomainError(f"s_max must be positive: {s_max}")
    if depth < 0:
        raise DomainError(f"depth cannot be negative: {depth}")
    tol = _handle_tol(tolerance)
    s = _cm_grid(s_max) if grid is None else np.asarray(grid, dtype=np.float64)
    if np.any(s <= 0.0) or np.any(s > s_max):
        raise DomainError("cm grid must lie in (0, s_max]")
    h = np.minimum(0.25 * s, (s_max - s) / max(depth, 1))
    steps = np.arange(depth + 1)
    points = s[:, None] + h[:, None] * steps[None, :]
    F = _evaluate(f, points)

    violations = np.zeros((s.size, depth + 1))
    for j in range(depth + 1):
        weights = (-1.0) ** steps[:j + 1] * special.comb(j, steps[:j + 1])
        signed = F[:, :j + 1] @ weights
        violations[:, j] = np.maximum(0.0, -signed)
    violations = np.where(np.isnan(violations), np.inf, violations)

    i, j = np.unravel_index(int(np.argmax(violations)), violations.shape)
    residual = float(violations[i, j])
    details = [
        {'s': float(s[a]), 'order': int(b), 'violation': float(violations[a, b])}
        for a, b in zip(*np.nonzero(violations > tol))
    ]
    return CheckReport('cm', residual, {'s': float(s[i]), 'order': int(j)}, tol,
                       details=details, notes=[CM_NOTE],
                       parameters={'s_max': s_max, 'depth': depth, 'points': int(s.size),
                                   'label': getattr(f, 'label', '')})


def discrete_class_L_check(law: Union[LawSpec, TruncatedSeries, BoundedSeries],
                           alpha_grid: Optional[Sequence[float]] = None,
                           order: Optional[int] = None,
                           pmf_tol: Optional[float] = None) -> CheckReport:
    """
    Discrete self-decomposability: P(s) / P(1 - alpha + alpha s) must be a
    PGF for every alpha on the grid (default 0.1, 0.2, ..., 0.9).
    """
    alphas = np.round(np.arange(1, 10) / 10.0, 10) if alpha_grid is None else np.asarray(alpha_grid, dtype=np.float64)
    tol = lattice_config.pmf_tol if pmf_tol is None else pmf_tol
    details = []
    worst = None
    residual = 0.0
    for alpha in alphas:
        quotient = selfdecomp_quotient(law, float(alpha), order=order)
        inner = abs_monotone_check(quotient, pmf_tol=tol)
        details.append({'alpha': float(alpha), 'residual': inner.residual,
                        'index': inner.worst_point, 'passed': inner.passed})
        if worst is None or inner.residual > residual:
            residual = inner.residual
            worst = {'alpha': float(alpha), 'index': inner.worst_point}
    label = str(law) if isinstance(law, LawSpec) else 'series'
    logger.info("class-l %s: max negativity %.3e", label, residual)
    return CheckReport('class-l', residual, worst, tol, details=details, notes=[TRUNCATION_NOTE],
                       parameters={'law': label, 'order': _order(order) if isinstance(law, LawSpec) else None})


# ---------------------------------------------------------------------------
# Semi-stable functional equation
# ---------------------------------------------------------------------------

def _functional_residual(psi: PsiFunction, b: float, a: float, u: np.ndarray) -> np.ndarray:
    return np.abs(psi(u) - a * psi(b * u))


def semi_stable_residual(psi: PsiFunction, u_grid: Optional[Sequence[float]] = None,
                         tolerance: Optional[float] = None) -> CheckReport:
    """max |psi(u) - a psi(b u)| over u in (0, 1]."""
    u = default_grid()[1:] if u_grid is None else np.asarray(u_grid, dtype=np.float64)
    if np.any(u <= 0.0):
        raise DomainError("u grid must lie in (0, 1]")
    residuals = _functional_residual(psi, psi.b, psi.a, u)
    return CheckReport.from_residuals('semi-stable', u, residuals, _handle_tol(tolerance), point_name='u',
                                      parameters=psi.to_dict())


def two_scale_check(alpha: float = 0.6, b1: float = 0.3, b2: float = 0.5, A: float = 0.4,
                    u_grid: Optional[Sequence[float]] = None, tolerance: Optional[float] = None,
                    separation: float = 1e-3) -> CheckReport:
    """
    The power law solves psi(u) = a psi(b u) at both scales b1 and b2; a
    periodic psi built for b1 solves it at b1 but not at b2.

    Irrationality of log b1 / log b2 cannot be checked in floating point;
    this demonstrates the two-scale behaviour at the given scales only.
    """
    u = default_grid()[1:] if u_grid is None else np.asarray(u_grid, dtype=np.float64)
    power = PsiFunction(alpha=alpha, b=b1)
    periodic = PsiFunction(alpha=alpha, b=b1, A=A)
    a1, a2 = b1 ** -alpha, b2 ** -alpha
    holding = {
        'power_law_at_b1': float(np.max(_functional_residual(power, b1, a1, u))),
        'power_law_at_b2': float(np.max(_functional_residual(power, b2, a2, u))),
        'periodic_at_b1': float(np.max(_functional_residual(periodic, b1, a1, u))),
    }
    breaking = float(np.max(_functional_residual(periodic, b2, a2, u)))
    name, residual = max(holding.items(), key=lambda kv: kv[1])
    details = [{'case': k, 'residual': v} for k, v in sorted(holding.items())]
    details.append({'case': 'periodic_at_b2', 'residual': breaking})
    return CheckReport(
        'two-scale', residual, name, _handle_tol(tolerance), details=details,
        conditions={'periodic_breaks_at_b2': breaking > separation},
        parameters={'alpha': alpha, 'b1': b1, 'b2': b2, 'A': A, 'separation': separation},
        notes=["irrational scale ratios are not machine-checkable; fixed scales only"],
    )


def iid_sum_dtype_check(psi: PsiFunction, n: int, b: Optional[float] = None,
                        grid: Optional[Sequence[float]] = None, tolerance: Optional[float] = None,
                        order: Optional[int] = None) -> CheckReport:
    """
    exp(-psi(1 - s)) = [exp(-psi(b (1 - s)))]**n: the semi-stable law is the
    law of n i.i.d. copies of its own b-thinning. Holds iff a = n.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer: {n}")
    n = int(n)
    b = psi.b if b is None else float(b)
    if not 0.0 < b < 1.0:
        raise DomainError(f"b must lie in (0, 1): {b}")
    s = _grid(grid)
    u = 1.0 - s
    residuals = np.abs(np.exp(-psi(u)) - np.exp(-psi(b * u)) ** n)
    report = CheckReport.from_residuals('iid-sum-dtype', s, residuals, _handle_tol(tolerance),
                                        parameters=dict(psi.to_dict(), n=n, thinning=b))
    N = _order(order)
    return _with_series_route(report, lambda: (exp_series(-psi.series(N)),
                                               pow_int(exp_series(-psi.dilate(b).series(N)), n)))


# ---------------------------------------------------------------------------
# Alpha-Poisson characterisations
# ---------------------------------------------------------------------------

def alpha_poisson_split_check(lam: float, alpha: float, n: int = 2, b: Optional[float] = None,
                              grid: Optional[Sequence[float]] = None,
                              tolerance: Optional[float] = None,
                              order: Optional[int] = None) -> CheckReport:
    """
    P(s) = [P(1 - b(1 - s))]**n for P alpha-Poisson with b**alpha = 1/n, plus
    the growth condition -log P(s) / (1 - s)**alpha -> lambda.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2: {n}")
    n = int(n)
    law = alpha_poisson(lam, alpha)
    b = (1.0 / n) ** (1.0 / alpha) if b is None else float(b)
    s = _grid(grid)
    P = pgf_handle(law)
    residuals = np.abs(P(s) - P(1.0 - b * (1.0 - s)) ** n)
    growth = log_growth_limit(law, alpha)
    growth_ok = growth.converged and abs(growth.value - lam) <= 1e-3 * lam
    report = CheckReport.from_residuals(
        'alpha-poisson-split', s, residuals, _handle_tol(tolerance),
        conditions={'growth_limit': growth_ok},
        parameters={'lambda': lam, 'alpha': alpha, 'n': n, 'b': b, 'growth_limit': growth.to_dict()},
    )
    N = _order(order)
    return _with_series_route(report, lambda: (pmf_series(law, N), pow_int(pmf_series(thin_law(law, b), N), n)))


def alpha_poisson_mn_check(lam: float, alpha: float, m: int, n: int,
                           grid: Optional[Sequence[float]] = None,
                           tolerance: Optional[float] = None,
                           order: Optional[int] = None) -> CheckReport:
    """[P(s)]**m = [P(1 - b + b s)]**n with b = (m/n)**(1/alpha); needs n > m >= 1."""
    for name, value in (('m', m), ('n', n)):
        if int(value) != value or value < 1:
            raise DomainError(f"{name} must be a positive integer: {value}")
    m, n = int(m), int(n)
    if n <= m:
        raise DomainError(f"n must exceed m: m = {m}, n = {n}")
    law = alpha_poisson(lam, alpha)
    b = (m / n) ** (1.0 / alpha)
    s = _grid(grid)
    P = pgf_handle(law)
    residuals = np.abs(P(s) ** m - P(1.0 - b + b * s) ** n)
    report = CheckReport.from_residuals('alpha-poisson-mn', s, residuals, _handle_tol(tolerance),
                                        parameters={'lambda': lam, 'alpha': alpha, 'm': m, 'n': n, 'b': b})
    N = _order(order)
    return _with_series_route(report, lambda: (pow_int(pmf_series(law, N), m),
                                               pow_int(pmf_series(thin_law(law, b), N), n)))


# ---------------------------------------------------------------------------
# Geometric compounding
# ---------------------------------------------------------------------------

def _as_psi(source: Union[PsiFunction, LawSpec], p: float) -> PsiFunction:
    if isinstance(source, PsiFunction):
        return source
    if source.family is LawFamily.DML:
        alpha = source['alpha']
        return PsiFunction(alpha=alpha, b=p ** (1.0 / alpha), scale=source['lambda'])
    if source.family is LawFamily.DSML:
        return source.psi
    raise DomainError(f"expected a dml or dsml law, got {source.family.value}")


def geometric_dtype_check(source: Union[PsiFunction, LawSpec], p: float, b: Optional[float] = None,
                          grid: Optional[Sequence[float]] = None,
                          tolerance: Optional[float] = None,
                          order: Optional[int] = None) -> CheckReport:
    """
    [1 + psi(1 - s)]**-1 is the shifted-geometric(p) sum of its own
    b-thinned copies when a = 1/p and b = p**(1/alpha).
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1): {p}")
    psi = _as_psi(source, p)
    b = p ** (1.0 / psi.alpha) if b is None else float(b)
    s = _grid(grid)
    P = make_pgf(lambda x: 1.0 / (1.0 + np.asarray(psi(1.0 - np.asarray(x)))), label='semi-mittag-leffler',
                 complement=lambda u: 1.0 / (1.0 + np.asarray(psi(u))))
    compound = geometric_compound(thin(P, b), p)
    residuals = np.abs(P(s) - compound(s))
    report = CheckReport.from_residuals('geometric-dtype', s, residuals, _handle_tol(tolerance),
                                        parameters=dict(psi.to_dict(), p=p, thinning=b))
    N = _order(order)

    def series_sides():
        thinned = reciprocal_series(1.0 + psi.dilate(b).series(N))
        return reciprocal_series(1.0 + psi.series(N)), geometric_compound(thinned, p)

    return _with_series_route(report, series_sides)


def geometric_sum_limit(M: Union[LawSpec, TransformHandle], alpha: Optional[float] = None,
                        lam: Optional[float] = None,
                        p_sequence: Sequence[float] = (0.5, 0.1, 0.01, 0.001),
                        grid: Optional[Sequence[float]] = None,
                        tolerance: float = 5e-3) -> CheckReport:
    """
    Geometric(p) sums of p**(1/alpha)-thinned copies of M approach
    DML(lambda, alpha) as p -> 0, where lambda = lim (1 - M(s)) / (1 - s)**alpha.

    Passes when the sup-distance decreases along p_sequence (10% slack;
    distances already within tolerance count as converged) and the last
    distance is below tolerance. Thinned handles compose on u = 1 - s, so
    small thinning probabilities p**(1/alpha) lose no precision.
    """
    if isinstance(M, LawSpec):
        if alpha is None:
            alpha = M.get('alpha', 1.0)
        handle = pgf_handle(M)
    else:
        handle = M
        alpha = 1.0 if alpha is None else alpha
    growth = linear_growth_limit(handle, alpha)
    lam = growth.value if lam is None else float(lam)
    limit = pgf_handle(dml(lam, alpha))
    s = _grid(grid)
    target = limit(s)
    distances = []
    for p in p_sequence:
        compound = geometric_compound(thin(handle, p ** (1.0 / alpha)), p)
        distances.append(float(np.max(np.abs(compound(s) - target))))
    details = [{'p': float(p), 'distance': d} for p, d in zip(p_sequence, distances)]
    return CheckReport(
        'geometric-sum-limit', distances[-1], {'p': float(p_sequence[-1])}, tolerance,
        details=details,
        conditions={'monotone': _is_monotone(distances, floor=tolerance),
                    'growth_limit_converges': growth.converged},
        parameters={'M': handle.label, 'alpha': alpha, 'lambda': lam, 'growth_limit': growth.to_dict()},
    )


def dml_fixed_point_check(lam: float, alpha: float, p: float, b: Optional[float] = None,
                          grid: Optional[Sequence[float]] = None,
                          tolerance: Optional[float] = None,
                          order: Optional[int] = None) -> CheckReport:
    """
    DML(lambda, alpha) is the shifted-geometric(p) sum of its own b-thinned
    copies with b**alpha = p; b is restricted to b <= p.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1): {p}")
    b = p ** (1.0 / alpha) if b is None else float(b)
    if not 0.0 < b <= p:
        raise DomainError(f"thinning b must lie in (0, p]: b = {b}, p = {p}")
    law = dml(lam, alpha)
    s = _grid(grid)
    P = pgf_handle(law)
    compound = geometric_compound(thin(P, b), p)
    residuals = np.abs(P(s) - compound(s))
    report = CheckReport.from_residuals('dml-fixed-point', s, residuals, _handle_tol(tolerance),
                                        parameters={'lambda': lam, 'alpha': alpha, 'p': p, 'b': b})
    N = _order(order)
    return _with_series_route(report, lambda: (pmf_series(law, N),
                                               geometric_compound(pmf_series(thin_law(law, b), N), p)))


def dml_geometric_pair_check(lam: float, alpha: float, p: float, p0: float,
                             grid: Optional[Sequence[float]] = None,
                             tolerance: Optional[float] = None,
                             order: Optional[int] = None) -> CheckReport:
    """
    Geometric(p0) sums of DML copies equal geometric(p) sums of b-thinned
    copies with b**alpha = p/p0; needs p < p0 <= 1.
    """
    if not 0.0 < p < p0 <= 1.0:
        raise DomainError(f"need 0 < p < p0 <= 1: p = {p}, p0 = {p0}")
    law = dml(lam, alpha)
    b = (p / p0) ** (1.0 / alpha)
    s = _grid(grid)
    P = pgf_handle(law)
    lhs = P if p0 == 1.0 else geometric_compound(P, p0)
    rhs = geometric_compound(thin(P, b), p)
    residuals = np.abs(lhs(s) - rhs(s))
    report = CheckReport.from_residuals('dml-geometric-pair', s, residuals, _handle_tol(tolerance),
                                        parameters={'lambda': lam, 'alpha': alpha, 'p': p, 'p0': p0, 'b': b})
    N = _order(order)

    def series_sides():
        base = pmf_series(law, N)
        lhs_series = base if p0 == 1.0 else geometric_compound(base, p0)
        return lhs_series, geometric_compound(pmf_series(thin_law(law, b), N), p)

    return _with_series_route(report, series_sides)


# ---------------------------------------------------------------------------
# DML -> alpha-Poisson limit
# ---------------------------------------------------------------------------

def dml_power_convergence(lam: float = 1.0, alpha: float = 0.6,
                          n_sequence: Sequence[int] = (1, 10, 100, 1000),
                          grid: Optional[Sequence[float]] = None,
                          tolerance: float = 1e-3,
                          pmf_tolerance: float = 5e-3,
                          order: Optional[int] = None) -> CheckReport:
    """
    [1 + (lambda/n)(1 - s)**alpha]**-n -> exp(-lambda (1 - s)**alpha).

    Conditions: the sup-distance decreases in n, it scales like 1/n between
    consecutive n >= 10 (ratio within 20% of the n ratio), and the truncated
    pmfs at the largest n are within pmf_tolerance in lumped total variation.
    """
    ns = [int(n) for n in n_sequence]
    if any(n < 1 for n in ns) or ns != sorted(ns):
        raise DomainError(f"n_sequence must be increasing positive integers: {n_sequence}")
    s = _grid(grid)
    target_law = alpha_poisson(lam, alpha)
    target = pgf_handle(target_law)(s)
    distances = []
    for n in ns:
        power = convolve_n(pgf_handle(dml(lam / n, alpha)), n)
        distances.append(float(np.max(np.abs(power(s) - target))))

    rates = []
    for (n1, d1), (n2, d2) in zip(zip(ns, distances), zip(ns[1:], distances[1:])):
        if n1 < 10 or d2 == 0.0:
            continue
        rates.append({'from': n1, 'to': n2, 'ratio': (d1 / d2) / (n2 / n1)})
    rate_ok = all(0.8 <= r['ratio'] <= 1.2 for r in rates)

    N = _order(order)
    n_max = ns[-1]
    power_pmf = pow_int(pmf_series(dml(lam / n_max, alpha), N), n_max)
    tv = lumped_total_variation(power_pmf, pmf_series(target_law, N))

    details = [{'n': n, 'distance': d} for n, d in zip(ns, distances)]
    return CheckReport(
        'dml-power-limit', distances[-1], {'n': ns[-1]}, tolerance, details=details,
        conditions={'monotone': _is_monotone(distances), 'rate_one_over_n': rate_ok,
                    'pmf_converges': tv < pmf_tolerance},
        parameters={'lambda': lam, 'alpha': alpha, 'rates': rates, 'pmf_tv': tv, 'order': N},
    )


# ---------------------------------------------------------------------------
# Thinning pairs and Bernoulli factorisation
# ---------------------------------------------------------------------------

def thinning_pair_check(law: LawSpec, c: float, grid: Optional[Sequence[float]] = None,
                        tolerance: Optional[float] = None, order: Optional[int] = None) -> CheckReport:
    """
    The c-thinning of law and law itself are of the same D-type at c,
    checked on the catalog closed form and on the thinned pmf series.
    """
    try:
        thinned = thin(law, c)
    except DomainError:
        thinned = thin(pgf_handle(law), c)
    report = dtype_equal(thinned, law, c, grid=grid, tolerance=tolerance)
    series = thin(BoundedSeries.from_pmf(pmf_series(law, _order(order))), c)
    series_report = dtype_equal(series, law, c, grid=grid)
    conditions = dict(report.conditions, series_route=series_report.passed)
    parameters = dict(report.parameters, law=str(law), series_residual=series_report.residual,
                      series_tolerance=series_report.tolerance)
    return replace(report, conditions=conditions, parameters=parameters)


def bernoulli_factorize_check(law: LawSpec, b: float, grid: Optional[Sequence[float]] = None,
                              tolerance: Optional[float] = None) -> CheckReport:
    """Round trip of bernoulli_factorize: thin(inner, c) must give law back."""
    inner, c = bernoulli_factorize(law, b)
    report = dtype_equal(law, inner, c, grid=grid, tolerance=tolerance)
    return replace(report, suite='factorize',
                   parameters=dict(report.parameters, law=str(law), inner=str(inner), b=b, c=c))

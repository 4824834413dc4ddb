"""
Binomial thinning and the maps built on it.

Each operator accepts the representations a law can take in this library
and returns the same kind:

- TransformHandle (PGF): exact scalar composition
- TruncatedSeries / BoundedSeries: coefficient arithmetic with tail bound
- LawSpec: closed form inside the catalog where one exists

Identity checks run both the scalar and the series route and compare.
"""

import logging
from functools import singledispatch
from typing import Any, Callable, Optional, Sequence, Tuple, Union

import numpy as np

from config.lattice_config import lattice_config
from lattice.checks.report import CheckReport
from lattice.errors import DomainError, FactorizationInvalid, TransformKindError
from lattice.laws.catalog import (
    LawFamily,
    LawSpec,
    alpha_bernoulli,
    convolve_law,
    pgf_handle,
    pmf_series,
    thin_law,
)
from lattice.laws.transforms import TransformHandle, TransformKind, make_pgf
from lattice.series.power_series import (
    BoundedSeries,
    TruncatedSeries,
    affine_substitute,
    eval_series,
    mul,
    pow_int,
    reciprocal_series,
)

logger = logging.getLogger(__name__)

Representation = Union[TransformHandle, TruncatedSeries, BoundedSeries, LawSpec]


def _check_thinning_probability(c: float):
    if not 0.0 < c < 1.0:
        raise DomainError(f"thinning probability must lie in (0, 1): {c}")


def require_pgf(P: TransformHandle, op: str):
    if P.kind is not TransformKind.PGF:
        raise TransformKindError(f"{op} expects a PGF, got a {P.kind.value}")


def default_grid() -> np.ndarray:
    return np.linspace(0.0, 1.0, lattice_config.grid_points)


def as_evaluator(P: Representation) -> Tuple[Callable[[Any], Any], float, str]:
    """
    Scalar PGF evaluator for any representation.

    Returns:
        (evaluator, error bound, label); series carry their tail bound
    """
    if isinstance(P, TransformHandle):
        require_pgf(P, 'as_evaluator')
        return P, 0.0, P.label
    if isinstance(P, LawSpec):
        return pgf_handle(P), 0.0, str(P)
    if isinstance(P, BoundedSeries):
        series, tail = P.series, P.tail_bound
    elif isinstance(P, TruncatedSeries):
        series, tail = P, max(0.0, 1.0 - P.total_mass())
    else:
        raise TypeError(f"cannot evaluate {type(P).__name__} as a PGF")
    return (lambda s: eval_series(series, np.asarray(s, dtype=np.float64))), tail, f"series(order={series.order})"


# ---------------------------------------------------------------------------
# thin
# ---------------------------------------------------------------------------

@singledispatch
def thin(P: Any, c: float):
    """
    c-thinning, P(s) -> P(1 - c + c s), 0 < c < 1.

    The lattice counterpart of scaling a variable by c.
    """
    raise TypeError(f"thin is not defined for {type(P).__name__}")


@thin.register
def _(P: TransformHandle, c: float) -> TransformHandle:
    _check_thinning_probability(c)
    require_pgf(P, 'thin')
    label = f"thin({P.label}, {c:g})"
    if P.complement is not None:
        # P(1 - c + c s) = phi(c u) with u = 1 - s
        phi = P.complement
        return make_pgf(lambda s: phi(c * (1.0 - np.asarray(s, dtype=np.float64))), label=label,
                        provisional=P.provisional, complement=lambda u: phi(c * np.asarray(u, dtype=np.float64)))
    evaluator = P.evaluator
    return make_pgf(lambda s: evaluator(1.0 - c + c * np.asarray(s, dtype=np.float64)),
                    label=label, provisional=P.provisional)


@thin.register(TruncatedSeries)
@thin.register(BoundedSeries)
def _(P, c: float) -> BoundedSeries:
    _check_thinning_probability(c)
    return affine_substitute(P, c)


@thin.register
def _(P: LawSpec, c: float) -> LawSpec:
    _check_thinning_probability(c)
    return thin_law(P, c)


# ---------------------------------------------------------------------------
# convolve_n
# ---------------------------------------------------------------------------

def _check_power(n: int) -> int:
    if int(n) != n or n < 1:
        raise DomainError(f"convolution power must be a positive integer: {n}")
    return int(n)


@singledispatch
def convolve_n(P: Any, n: int):
    """Law of the sum of n i.i.d. copies: P**n."""
    raise TypeError(f"convolve_n is not defined for {type(P).__name__}")


@convolve_n.register
def _(P: TransformHandle, n: int) -> TransformHandle:
    n = _check_power(n)
    require_pgf(P, 'convolve_n')
    evaluator, phi = P.evaluator, P.complement
    complement = None if phi is None else (lambda u: np.asarray(phi(u)) ** n)
    return make_pgf(lambda s: np.asarray(evaluator(s)) ** n, label=f"({P.label})^{n}", provisional=P.provisional,
                    complement=complement)


@convolve_n.register
def _(P: TruncatedSeries, n: int) -> TruncatedSeries:
    return pow_int(P, _check_power(n))


@convolve_n.register
def _(P: BoundedSeries, n: int) -> BoundedSeries:
    n = _check_power(n)
    return BoundedSeries.from_pmf(pow_int(P.series, n), floor=min(1.0, n * P.tail_bound))


@convolve_n.register
def _(P: LawSpec, n: int):
    """Catalog law when the sum stays in the catalog, otherwise a PGF handle."""
    n = _check_power(n)
    closed = convolve_law(P, n)
    if closed is not None:
        return closed
    return convolve_n(pgf_handle(P), n)


# ---------------------------------------------------------------------------
# Self-decomposability quotient
# ---------------------------------------------------------------------------

def _divide(numerator: TruncatedSeries, denominator: TruncatedSeries) -> TruncatedSeries:
    order = min(numerator.order, denominator.order)
    return mul(numerator.with_order(order), reciprocal_series(denominator.with_order(order)), order=order)


def selfdecomp_quotient(P: Union[LawSpec, TruncatedSeries, BoundedSeries], alpha: float,
                        order: Optional[int] = None) -> TruncatedSeries:
    """
    Candidate component P_alpha = P(s) / P(1 - alpha + alpha s).

    The law is discrete self-decomposable iff this is a PGF for every
    alpha in (0, 1); callers decide with abs_monotone_check. A LawSpec with
    a closed-form thinning divides exact series; any other input goes
    through affine_substitute and inherits its tail bound.

    Raises:
        SingularSeriesError: if the thinned series has a zero constant term
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1): {alpha}")
    if isinstance(P, LawSpec):
        order = lattice_config.truncation_order if order is None else order
        numerator = pmf_series(P, order)
        try:
            denominator = pmf_series(thin_law(P, alpha), order)
        except DomainError:
            denominator = affine_substitute(numerator, alpha).series
        return _divide(numerator, denominator)
    series = P.series if isinstance(P, BoundedSeries) else P
    if order is not None:
        series = series.with_order(order)
    return _divide(series, affine_substitute(P, alpha).series.with_order(series.order))


# ---------------------------------------------------------------------------
# Bernoulli factorisation
# ---------------------------------------------------------------------------

def bernoulli_factorize(law: LawSpec, b: float) -> Tuple[LawSpec, float]:
    """
    Write law as a thinning of a wider law: law = thin(inner, c).

    Args:
        law: alpha-poisson, dml, poisson, geometric0 or alpha-bernoulli
        b: Splitting factor in (0, 1)

    Returns:
        (inner, c)

    Raises:
        FactorizationInvalid: alpha-bernoulli with b <= its weight, where the
            required thinning probability would not be below one
    """
    if not 0.0 < b < 1.0:
        raise DomainError(f"b must lie in (0, 1): {b}")
    fam = law.family
    params = law.as_dict()
    if fam in (LawFamily.ALPHA_POISSON, LawFamily.DML):
        alpha = params['alpha']
        params['lambda'] /= b
        return LawSpec.create(fam, params), b ** (1.0 / alpha)
    if fam in (LawFamily.POISSON, LawFamily.GEOMETRIC0):
        params['lambda'] /= b
        return LawSpec.create(fam, params), b
    if fam is LawFamily.ALPHA_BERNOULLI:
        weight, nu = params['b'], params['alpha']
        if b <= weight:
            raise FactorizationInvalid(
                f"alpha-bernoulli weight {weight:g} needs b > {weight:g}, got {b:g}: "
                f"the thinning probability ({weight:g}/{b:g})^(1/{nu:g}) would not be below one"
            )
        return alpha_bernoulli(b, nu), (weight / b) ** (1.0 / nu)
    raise DomainError(f"no Bernoulli factorisation for {fam.value}")


# ---------------------------------------------------------------------------
# D-type comparison
# ---------------------------------------------------------------------------

def dtype_equal(P1: Representation, P2: Representation, c: float,
                grid: Optional[Sequence[float]] = None,
                tolerance: Optional[float] = None) -> CheckReport:
    """
    Residual of P1(s) = P2(1 - c + c s) on a grid of [0, 1].

    Passing means P1 is the c-thinning of P2, i.e. the two laws are of the
    same D-type at c. Series inputs widen the tolerance by their tail bounds
    plus the series slack.
    """
    _check_thinning_probability(c)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    f1, e1, label1 = as_evaluator(P1)
    f2, e2, label2 = as_evaluator(P2)
    if tolerance is None:
        tolerance = lattice_config.handle_tol
        if isinstance(P1, (TruncatedSeries, BoundedSeries)) or isinstance(P2, (TruncatedSeries, BoundedSeries)):
            tolerance = e1 + e2 + lattice_config.series_tol
    residuals = np.abs(f1(grid) - f2(1.0 - c + c * grid))
    return CheckReport.from_residuals(
        'dtype', grid, residuals, tolerance,
        parameters={'P1': label1, 'P2': label2, 'c': c},
    )

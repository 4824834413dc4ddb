"""
Geometric compounding and Poisson mixing.
"""

import logging
from enum import Enum
from functools import singledispatch
from typing import Any, Callable, Optional

import numpy as np
from scipy import integrate, stats

from config.lattice_config import lattice_config
from lattice.errors import DomainError
from lattice.laws.catalog import LawFamily, LawSpec, geometric_shifted, pgf_handle
from lattice.laws.transforms import TransformHandle, make_pgf, pgf_from_lt
from lattice.operators.thinning import require_pgf
from lattice.series.power_series import (
    BoundedSeries,
    TruncatedSeries,
    mul,
    reciprocal_series,
)

logger = logging.getLogger(__name__)


class GeometricConvention(str, Enum):
    """Count law of the compounding: N >= 1 with PGF p s/(1 - q s), or N >= 0 with p/(1 - q s)."""
    SHIFTED = 'shifted'
    ZERO_BASED = 'zero-based'


def _check_p(p: float):
    if not 0.0 < p < 1.0:
        raise DomainError(f"geometric parameter p must lie in (0, 1): {p}")


@singledispatch
def geometric_compound(P: Any, p: float, convention: GeometricConvention = GeometricConvention.SHIFTED):
    """
    Law of X_1 + ... + X_N with N geometric(p) independent of the i.i.d. X_i.

    Shifted: p P / (1 - q P). Zero-based: p / (1 - q P).
    """
    raise TypeError(f"geometric_compound is not defined for {type(P).__name__}")


@geometric_compound.register
def _(P: TransformHandle, p: float, convention: GeometricConvention = GeometricConvention.SHIFTED) -> TransformHandle:
    _check_p(p)
    require_pgf(P, 'geometric_compound')
    convention = GeometricConvention(convention)
    q = 1.0 - p
    evaluator, phi = P.evaluator, P.complement

    def apply(v):
        v = np.asarray(v, dtype=np.float64)
        head = p * v if convention is GeometricConvention.SHIFTED else p
        return head / (1.0 - q * v)

    complement = None if phi is None else (lambda u: apply(phi(u)))
    return make_pgf(lambda s: apply(evaluator(s)), label=f"geometric[{convention.value}, p={p:g}]({P.label})",
                    provisional=P.provisional, complement=complement)


def _compound_series(series: TruncatedSeries, p: float, convention: GeometricConvention) -> TruncatedSeries:
    q = 1.0 - p
    denominator = reciprocal_series(1.0 - q * series)
    if convention is GeometricConvention.SHIFTED:
        return p * mul(series, denominator)
    return p * denominator


@geometric_compound.register
def _(P: TruncatedSeries, p: float, convention: GeometricConvention = GeometricConvention.SHIFTED) -> TruncatedSeries:
    _check_p(p)
    return _compound_series(P, p, GeometricConvention(convention))


@geometric_compound.register
def _(P: BoundedSeries, p: float, convention: GeometricConvention = GeometricConvention.SHIFTED) -> BoundedSeries:
    _check_p(p)
    result = _compound_series(P.series, p, GeometricConvention(convention))
    # E[N] <= 1/p copies each carry the input error.
    return BoundedSeries.from_pmf(result, floor=min(1.0, P.tail_bound / p))


@geometric_compound.register
def _(P: LawSpec, p: float, convention: GeometricConvention = GeometricConvention.SHIFTED):
    """
    Catalog law where the compound stays in the catalog, otherwise a PGF handle.

    Shifted compounding maps 1/(1 + x) to 1/(1 + x/p), so dml, dsml and
    geometric0 stay in their families with the rate divided by p.
    """
    _check_p(p)
    convention = GeometricConvention(convention)
    fam = P.family
    if convention is GeometricConvention.SHIFTED:
        if fam is LawFamily.DEGENERATE_AT_ONE:
            return geometric_shifted(p)
        if fam is LawFamily.GEOMETRIC_SHIFTED:
            return geometric_shifted(p * P['p'])
        if fam in (LawFamily.DML, LawFamily.GEOMETRIC0):
            params = P.as_dict()
            params['lambda'] /= p
            return LawSpec.create(fam, params)
        if fam is LawFamily.DSML:
            return LawSpec.from_psi(fam, P.psi.scaled(1.0 / p))
    elif fam is LawFamily.DEGENERATE_AT_ONE:
        return LawSpec.create(LawFamily.GEOMETRIC0, p=p)
    return geometric_compound(pgf_handle(P), p, convention)


# ---------------------------------------------------------------------------
# Poisson mixtures
# ---------------------------------------------------------------------------

def poisson_mixture(phi: TransformHandle) -> TransformHandle:
    """
    PGF of a Poisson law whose rate is drawn from the law with LT phi.

    E[exp(-W (1 - s))] = phi(1 - s), so this is pgf_from_lt; the separate
    name documents the mixture reading.
    """
    P = pgf_from_lt(phi)
    return make_pgf(P.evaluator, label=f"poisson-mixture[{phi.label}]", provisional=P.provisional)


def mixture_pmf_by_quadrature(density: Callable[[float], float], order: Optional[int] = None,
                              lower: float = 0.0, upper: float = np.inf) -> TruncatedSeries:
    """
    p_k = integral of Poisson(w) pmf at k times density(w) dw, by quadrature.

    An independent oracle for poisson_mixture and the catalog pmfs.
    """
    order = lattice_config.truncation_order if order is None else order
    coeffs = np.zeros(order + 1)
    for k in range(order + 1):
        value, err = integrate.quad(lambda w: stats.poisson.pmf(k, w) * density(w), lower, upper, limit=200)
        coeffs[k] = value
        if err > 1e-8:
            logger.warning("quadrature error %.2e at k=%d", err, k)
    return TruncatedSeries(coeffs)

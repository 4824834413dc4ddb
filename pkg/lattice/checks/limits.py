"""
Growth-limit validators at s -> 1.

    log growth:     -log P(s) / (1 - s)**alpha  -> lambda
    linear growth:  (1 - P(s)) / (1 - s)**alpha -> lambda

Both are evaluated on u_j = 1 - s_j = 2**-j, j = 4..20, and count as
converged when the last two ratios agree to a relative 1e-3. Handles that
carry their complement form are evaluated at u directly; for those the
linear refinement continues until u**alpha reaches DEEP_TARGET, which
removes the O(u**alpha) bias that the s-grid leaves for small alpha.
"""

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Sequence

import numpy as np

from lattice.errors import DomainError
from lattice.laws.catalog import LawSpec, pgf_handle

REFINEMENT_EXPONENTS = tuple(range(4, 21))
RELATIVE_CONVERGENCE = 1e-3
DEEP_TARGET = 1e-8


@dataclass(frozen=True)
class LimitEstimate:
    """Ratios along the refinement; ``points`` holds u = 1 - s."""
    points: Sequence[float]
    ratios: Sequence[float]
    relative_change: float

    @property
    def value(self) -> float:
        return float(self.ratios[-1])

    @property
    def converged(self) -> bool:
        return bool(np.isfinite(self.relative_change)) and self.relative_change <= RELATIVE_CONVERGENCE

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': self.value,
            'converged': self.converged,
            'relative_change': float(self.relative_change),
            'ratios': [float(r) for r in self.ratios],
            'smallest_u': float(self.points[-1]),
        }


def refinement_points(exponents: Sequence[int] = REFINEMENT_EXPONENTS) -> np.ndarray:
    return 1.0 - 2.0 ** -np.asarray(exponents, dtype=np.float64)


def _handle(P):
    return pgf_handle(P) if isinstance(P, LawSpec) else P


def _complement_evaluator(handle) -> Callable[[Any], Any]:
    phi = getattr(handle, 'complement', None)
    if phi is not None:
        return phi
    return lambda u: handle(1.0 - u)


def _exponents(handle, alpha: float, deep: bool) -> Sequence[int]:
    if not deep or getattr(handle, 'complement', None) is None:
        return REFINEMENT_EXPONENTS
    last = max(REFINEMENT_EXPONENTS[-1], math.ceil(-math.log2(DEEP_TARGET) / alpha))
    return tuple(range(REFINEMENT_EXPONENTS[0], last + 1))


def _estimate(numerator: np.ndarray, u: np.ndarray, alpha: float) -> LimitEstimate:
    ratios = numerator / u ** alpha
    last, prev = ratios[-1], ratios[-2]
    change = abs(last - prev) / abs(last) if last != 0.0 else np.inf
    return LimitEstimate(points=u.tolist(), ratios=ratios.tolist(), relative_change=float(change))


def _check_index(alpha: float):
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1]: {alpha}")


def log_growth_limit(P, alpha: float) -> LimitEstimate:
    """Limit of -log P(s) / (1 - s)**alpha along the refinement."""
    _check_index(alpha)
    handle = _handle(P)
    u = 2.0 ** -np.asarray(_exponents(handle, alpha, deep=False), dtype=np.float64)
    values = np.asarray(_complement_evaluator(handle)(u), dtype=np.float64)
    return _estimate(-np.log(values), u, alpha)


def linear_growth_limit(P, alpha: float) -> LimitEstimate:
    """Limit of (1 - P(s)) / (1 - s)**alpha along the refinement."""
    _check_index(alpha)
    handle = _handle(P)
    u = 2.0 ** -np.asarray(_exponents(handle, alpha, deep=True), dtype=np.float64)
    values = np.asarray(_complement_evaluator(handle)(u), dtype=np.float64)
    return _estimate(1.0 - values, u, alpha)

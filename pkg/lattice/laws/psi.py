"""
Semi-stable exponents.

    psi(u) = scale * u**alpha * (1 - A cos(k log u + phase)),   k = -2 pi / log b

satisfies psi(u) = a psi(b u) with a = b**(-alpha) for every u > 0, because
k log b = -2 pi. A = 0 gives the power law scale * u**alpha behind the
alpha-Poisson and discrete Mittag-Leffler laws.
"""

import math
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional

import numpy as np

from lattice.errors import DomainError
from lattice.series.power_series import TruncatedSeries, log_cos_compose

# a * b**alpha = 1 is exact by construction; this is the slack accepted when
# alpha is recovered from a user-supplied a.
SCALE_RELATION_TOL = 1e-12


@dataclass(frozen=True)
class PsiFunction:
    """
    Exponent of a discrete semi-stable or semi Mittag-Leffler law.

    Args:
        alpha: Index in (0, 1]
        b: Contraction in (0, 1)
        A: Periodic amplitude in [0, 1)
        scale: Multiplier lambda > 0
        phase: Phase of the periodic factor
        k: Frequency; defaults to -2 pi / log b. Any other value breaks the
            functional equation and exists to build counterexamples.
    """
    alpha: float
    b: float
    A: float = 0.0
    scale: float = 1.0
    phase: float = 0.0
    k: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1]: {self.alpha}")
        if not 0.0 < self.b < 1.0:
            raise DomainError(f"b must lie in (0, 1): {self.b}")
        if not 0.0 <= self.A < 1.0:
            raise DomainError(f"amplitude A must lie in [0, 1): {self.A}")
        if not self.scale > 0.0:
            raise DomainError(f"scale must be positive: {self.scale}")
        if self.k is None:
            object.__setattr__(self, 'k', -2.0 * math.pi / math.log(self.b))
        elif not self.k > 0.0:
            raise DomainError(f"frequency k must be positive: {self.k}")

    @classmethod
    def from_scale(cls, a: float, b: float, A: float = 0.0, scale: float = 1.0, phase: float = 0.0) -> 'PsiFunction':
        """
        Build from (a, b) with a * b**alpha = 1, i.e. alpha = log a / (-log b).

        A solution with alpha <= 1 exists only when a * b <= 1.
        """
        if not 0.0 < b < 1.0:
            raise DomainError(f"b must lie in (0, 1): {b}")
        if not a > 1.0:
            raise DomainError(f"a must exceed 1: {a}")
        alpha = math.log(a) / -math.log(b)
        if alpha > 1.0 + SCALE_RELATION_TOL:
            raise DomainError(f"a * b = {a * b:.6g} > 1 admits no exponent alpha <= 1")
        return cls(alpha=min(alpha, 1.0), b=b, A=A, scale=scale, phase=phase)

    @property
    def a(self) -> float:
        return self.b ** -self.alpha

    @property
    def is_power_law(self) -> bool:
        return self.A == 0.0

    @property
    def period_matched(self) -> bool:
        """True when k equals -2 pi / log b, so the functional equation holds."""
        return math.isclose(self.k, -2.0 * math.pi / math.log(self.b), rel_tol=1e-15)

    def __call__(self, u):
        """Evaluate on u >= 0 (psi(0) = 0); accepts scalars or arrays."""
        u_arr = np.asarray(u, dtype=np.float64)
        if np.any(u_arr < 0.0):
            raise DomainError("psi is defined for u >= 0")
        with np.errstate(divide='ignore', invalid='ignore'):
            logu = np.log(u_arr)
            vals = self.scale * u_arr ** self.alpha * (1.0 - self.A * np.cos(self.k * logu + self.phase))
        vals = np.where(u_arr == 0.0, 0.0, vals)
        return float(vals) if vals.ndim == 0 else vals

    def dilate(self, c: float) -> 'PsiFunction':
        """
        The exponent u -> psi(c u), c > 0.

        Same alpha, b, A and k; scale becomes scale * c**alpha and the phase
        moves by k log c.
        """
        if not c > 0.0:
            raise DomainError(f"dilation factor must be positive: {c}")
        phase = math.fmod(self.phase + self.k * math.log(c), 2.0 * math.pi)
        return replace(self, scale=self.scale * c ** self.alpha, phase=phase)

    def scaled(self, factor: float) -> 'PsiFunction':
        """The exponent factor * psi."""
        if not factor > 0.0:
            raise DomainError(f"scale factor must be positive: {factor}")
        return replace(self, scale=self.scale * factor)

    def series(self, order: int) -> TruncatedSeries:
        """Coefficients of psi(1 - s) in s."""
        return self.scale * log_cos_compose(self.alpha, self.A, self.k, order, phase=self.phase)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'alpha': self.alpha,
            'b': self.b,
            'a': self.a,
            'A': self.A,
            'k': self.k,
            'scale': self.scale,
            'phase': self.phase,
        }


def psi_eval(psi: PsiFunction, u):
    """
    psi(u) for u > 0.

    Raises:
        DomainError: if any u <= 0
    """
    if np.any(np.asarray(u) <= 0.0):
        raise DomainError(f"psi_eval needs u > 0: {u}")
    return psi(u)

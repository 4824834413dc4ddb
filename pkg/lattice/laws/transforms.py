"""
Scalar transform handles and the bridge P(s) = phi(1 - s).

A TransformHandle wraps a vectorised evaluator and remembers whether it is a
probability generating function or a Laplace transform. Going from an LT to
a PGF always yields a PGF. The reverse direction only yields a candidate,
flagged provisional, whose complete monotonicity has to be checked
separately.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Optional, Tuple

import numpy as np

from lattice.errors import DomainError, TransformKindError
from lattice.laws.psi import PsiFunction

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-12


class TransformKind(str, Enum):
    PGF = 'PGF'
    LT = 'LT'


@dataclass(frozen=True)
class TransformHandle:
    """
    Evaluable PGF or LT.

    Args:
        kind: PGF or LT
        evaluator: Vectorised function of one real argument
        domain: Closed interval the evaluator accepts
        provisional: Set when validity still has to be confirmed
        label: Human-readable name used in reports and logs
        complement: For a PGF, the same function of u = 1 - s, so that
            P(s) = complement(1 - s); operators compose on u directly and
            keep precision for s near 1
    """
    kind: TransformKind
    evaluator: Callable[[Any], Any]
    domain: Tuple[float, float]
    provisional: bool = False
    label: str = ''
    complement: Optional[Callable[[Any], Any]] = None

    def __post_init__(self):
        anchor = 1.0 if self.kind is TransformKind.PGF else 0.0
        value = float(self.evaluator(anchor))
        if abs(value - 1.0) > NORMALIZATION_TOL:
            raise DomainError(
                f"{self.kind.value} handle {self.label or '<anonymous>'} is not normalised: "
                f"value {value!r} at {anchor}"
            )

    def __call__(self, x):
        arr = np.asarray(x, dtype=np.float64)
        lo, hi = self.domain
        if np.any(arr < lo) or np.any(arr > hi):
            raise DomainError(f"{self.label or self.kind.value} evaluated outside [{lo}, {hi}]")
        out = np.asarray(self.evaluator(arr), dtype=np.float64)
        return float(out) if out.ndim == 0 else out

    def describe(self) -> str:
        flag = ' (provisional)' if self.provisional else ''
        return f"{self.kind.value} {self.label}{flag}".strip()


PGF_DOMAIN = (-math.inf, 1.0)
LT_DOMAIN = (0.0, math.inf)


def make_pgf(evaluator: Callable[[Any], Any], label: str = '', provisional: bool = False,
             complement: Optional[Callable[[Any], Any]] = None) -> TransformHandle:
    return TransformHandle(TransformKind.PGF, evaluator, PGF_DOMAIN, provisional, label, complement)


def make_lt(evaluator: Callable[[Any], Any], label: str = '', provisional: bool = False) -> TransformHandle:
    return TransformHandle(TransformKind.LT, evaluator, LT_DOMAIN, provisional, label)


def _require(handle: TransformHandle, kind: TransformKind, op: str):
    if not isinstance(handle, TransformHandle):
        raise TransformKindError(f"{op} expects a TransformHandle, got {type(handle).__name__}")
    if handle.kind is not kind:
        raise TransformKindError(f"{op} expects a {kind.value}, got a {handle.kind.value}")


def pgf_from_lt(phi: TransformHandle) -> TransformHandle:
    """s -> phi(1 - s); always a PGF when phi is a genuine LT."""
    _require(phi, TransformKind.LT, 'pgf_from_lt')
    evaluator = phi.evaluator
    return make_pgf(lambda s: evaluator(1.0 - np.asarray(s, dtype=np.float64)),
                    label=f"pgf[{phi.label}]", provisional=phi.provisional, complement=evaluator)


def lt_from_pgf(P: TransformHandle) -> TransformHandle:
    """
    s -> P(1 - s) on s >= 0, flagged provisional.

    Whether the result is completely monotone, hence an LT, is decided by
    checks.cm_grid_check; the alpha-Bernoulli PGFs are PGFs whose candidate
    goes negative for large s.
    """
    _require(P, TransformKind.PGF, 'lt_from_pgf')
    evaluator = P.evaluator
    logger.debug("lt_from_pgf: %s gives a provisional LT", P.label)
    if P.complement is not None:
        return make_lt(P.complement, label=f"lt[{P.label}]", provisional=True)
    return make_lt(lambda s: evaluator(1.0 - np.asarray(s, dtype=np.float64)),
                   label=f"lt[{P.label}]", provisional=True)


# ---------------------------------------------------------------------------
# Continuous LT catalog
# ---------------------------------------------------------------------------

def _positive(name: str, value: float):
    if not value > 0.0:
        raise DomainError(f"{name} must be positive: {value}")


def _index(alpha: float):
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1]: {alpha}")


def exponential_lt(lam: float = 1.0) -> TransformHandle:
    """Exponential law with mean lam: 1 / (1 + lam s)."""
    _positive('lambda', lam)
    return make_lt(lambda s: 1.0 / (1.0 + lam * s), label=f"exponential(lambda={lam:g})")


def stable_lt(lam: float, alpha: float) -> TransformHandle:
    """Positive stable law: exp(-lam s**alpha)."""
    _positive('lambda', lam)
    _index(alpha)
    return make_lt(lambda s: np.exp(-lam * np.asarray(s) ** alpha), label=f"stable(lambda={lam:g}, alpha={alpha:g})")


def mittag_leffler_lt(lam: float, alpha: float) -> TransformHandle:
    """Mittag-Leffler law: 1 / (1 + lam s**alpha)."""
    _positive('lambda', lam)
    _index(alpha)
    return make_lt(lambda s: 1.0 / (1.0 + lam * np.asarray(s) ** alpha),
                   label=f"mittag-leffler(lambda={lam:g}, alpha={alpha:g})")


def point_mass_lt(w: float) -> TransformHandle:
    """Unit mass at w >= 0: exp(-w s)."""
    if w < 0.0:
        raise DomainError(f"point mass location must be >= 0: {w}")
    return make_lt(lambda s: np.exp(-w * np.asarray(s)), label=f"point-mass({w:g})")


def degenerate_lt() -> TransformHandle:
    """Unit mass at 0: identically one."""
    return make_lt(lambda s: np.ones_like(np.asarray(s, dtype=np.float64)), label='degenerate-at-zero')


def semi_stable_lt(psi: PsiFunction) -> TransformHandle:
    """exp(-psi(s))."""
    return make_lt(lambda s: np.exp(-np.asarray(psi(s))), label=f"semi-stable(alpha={psi.alpha:g}, A={psi.A:g})")


def semi_mittag_leffler_lt(psi: PsiFunction) -> TransformHandle:
    """1 / (1 + psi(s))."""
    return make_lt(lambda s: 1.0 / (1.0 + np.asarray(psi(s))),
                   label=f"semi-mittag-leffler(alpha={psi.alpha:g}, A={psi.A:g})")

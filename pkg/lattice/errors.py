"""
Exception hierarchy for the lattice-law library.

Every error raised on purpose by the library derives from LatticeError, and
most also derive from the matching builtin so callers that only know about
ValueError / TypeError / ZeroDivisionError keep working.
"""

from typing import Any, Dict, List, Optional, Sequence


class LatticeError(Exception):
    """Root of all library errors."""

    def to_dict(self) -> Dict[str, Any]:
        return {'type': type(self).__name__, 'message': str(self)}


class DomainError(LatticeError, ValueError):
    """A parameter or argument lies outside its admissible range."""


class SeriesRangeError(LatticeError, OverflowError):
    """A series operation overflowed double precision."""


class SingularSeriesError(LatticeError, ZeroDivisionError):
    """Division by a series whose constant term is zero."""


class TransformKindError(LatticeError, TypeError):
    """A PGF was passed where an LT is required, or the other way round."""


class FactorizationInvalid(LatticeError, ValueError):
    """A Bernoulli factorisation would need a thinning probability >= 1."""


class TailTooHeavy(LatticeError):
    """The truncated pmf leaves too much mass untracked to sample from."""

    def __init__(self, tail_mass: float, threshold: float, order: int):
        self.tail_mass = tail_mass
        self.threshold = threshold
        self.order = order
        super().__init__(
            f"tail mass {tail_mass:.3e} above {threshold:.3e} at order {order}; "
            f"raise the truncation order"
        )

    def to_dict(self) -> Dict[str, Any]:
        out = super().to_dict()
        out.update({'tail_mass': self.tail_mass, 'threshold': self.threshold, 'order': self.order})
        return out


class NotAValidPMF(LatticeError):
    """Coefficients fail nonnegativity (beyond pmf_tol) or sum above 1 + pmf_tol."""

    def __init__(
        self,
        offending_indices: Sequence[int],
        min_coefficient: float,
        total_mass: float,
        pmf_tol: float,
        label: Optional[str] = None,
    ):
        self.offending_indices: List[int] = [int(i) for i in offending_indices]
        self.min_coefficient = float(min_coefficient)
        self.total_mass = float(total_mass)
        self.pmf_tol = float(pmf_tol)
        self.label = label
        shown = self.offending_indices[:10]
        more = '' if len(self.offending_indices) <= 10 else f' (+{len(self.offending_indices) - 10} more)'
        prefix = f"{label}: " if label else ''
        super().__init__(
            f"{prefix}not a valid pmf: negative coefficients at {shown}{more}, "
            f"min {self.min_coefficient:.3e}, total mass {self.total_mass:.12f}"
        )

    def to_dict(self) -> Dict[str, Any]:
        out = super().to_dict()
        out.update({
            'offending_indices': self.offending_indices,
            'min_coefficient': self.min_coefficient,
            'total_mass': self.total_mass,
            'pmf_tol': self.pmf_tol,
        })
        return out


class LawSpecParseError(DomainError):
    """A law specification string could not be parsed."""

    def __init__(self, message: str, token: Optional[str] = None):
        self.token = token
        super().__init__(f"{message}: {token!r}" if token is not None else message)

    def to_dict(self) -> Dict[str, Any]:
        out = super().to_dict()
        out['token'] = self.token
        return out

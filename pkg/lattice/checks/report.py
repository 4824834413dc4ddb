"""
CheckReport: the outcome of one verification suite.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np


def _plain(value: Any) -> Any:
    """numpy scalars/arrays to built-ins so reports serialise deterministically."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass(frozen=True)
class CheckReport:
    """
    Result of a verification suite.

    The verdict is pass iff residual <= tolerance and every named side
    condition holds. worst_point is where the residual is attained (a grid
    location, a coefficient index, or a dict of both).
    """
    suite: str
    residual: float
    worst_point: Any
    tolerance: float
    details: List[Dict[str, Any]] = field(default_factory=list)
    conditions: Dict[str, bool] = field(default_factory=dict)
    parameters: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if math.isnan(self.residual):
            return False
        return self.residual <= self.tolerance and all(self.conditions.values())

    @property
    def verdict(self) -> str:
        return 'pass' if self.passed else 'fail'

    @classmethod
    def from_residuals(
        cls,
        suite: str,
        points: Sequence[Any],
        residuals: Sequence[float],
        tolerance: float,
        point_name: str = 's',
        **kwargs,
    ) -> 'CheckReport':
        """Build from a per-point residual table; NaN counts as an infinite residual."""
        r = np.asarray(residuals, dtype=np.float64)
        r = np.where(np.isnan(r), np.inf, r)
        if r.size == 0:
            return cls(suite, 0.0, None, tolerance, **kwargs)
        i = int(np.argmax(r))
        details = kwargs.pop('details', None)
        if details is None:
            details = [{point_name: _plain(p), 'residual': float(v)} for p, v in zip(points, r)]
        return cls(suite, float(r[i]), _plain(points[i]), tolerance, details=details, **kwargs)

    def to_dict(self, include_details: bool = True) -> Dict[str, Any]:
        out = {
            'suite': self.suite,
            'residual': self.residual,
            'worst_point': self.worst_point,
            'tolerance': self.tolerance,
            'verdict': self.verdict,
            'conditions': self.conditions,
            'parameters': self.parameters,
            'notes': self.notes,
        }
        if include_details:
            out['details'] = self.details
        return _plain(out)

    def to_json(self, indent: Optional[int] = 2, include_details: bool = True) -> str:
        return json.dumps(self.to_dict(include_details), indent=indent, sort_keys=True)

    def to_text(self) -> str:
        lines = [
            f"{self.suite}: {self.verdict.upper()}",
            f"  residual    {self.residual:.3e}  (tolerance {self.tolerance:.1e})",
            f"  worst point {self.worst_point}",
        ]
        for name, ok in sorted(self.conditions.items()):
            lines.append(f"  {'ok  ' if ok else 'FAIL'} {name}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return '\n'.join(lines)

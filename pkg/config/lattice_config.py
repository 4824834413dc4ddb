"""
Lattice Configuration Module

This module holds the numeric defaults shared by the series kernel, the law
catalog, the verification suites, the samplers and the command line.
"""

import logging
import os
import sys
from typing import List, Optional, Tuple

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value.strip() == '':
        return default
    return int(value)


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    if value is None or value.strip() == '':
        return default
    return float(value)


class LatticeConfig:
    """Configuration class for truncation orders, tolerances and logging."""

    def __init__(self):
        # Values are picked up from:
        # 1. Environment variables (LATTICE_*)
        # 2. A .env file in the working directory
        # 3. The defaults below
        self.truncation_order = _env_int('LATTICE_TRUNCATION_ORDER', 256)
        self.sampling_order = _env_int('LATTICE_SAMPLING_ORDER', 4096)

        # Tolerances
        self.pmf_tol = _env_float('LATTICE_PMF_TOL', 1e-9)
        self.handle_tol = _env_float('LATTICE_HANDLE_TOL', 1e-10)
        self.series_tol = _env_float('LATTICE_SERIES_TOL', 1e-8)

        # Identity-check grid s in {0, 0.02, ..., 1}
        self.grid_points = _env_int('LATTICE_GRID_POINTS', 51)

        # Sampling refuses laws whose untracked tail exceeds this mass
        self.max_sampling_tail = _env_float('LATTICE_MAX_SAMPLING_TAIL', 0.01)

        # Logging
        self.log_level = os.getenv('LATTICE_LOG_LEVEL', 'WARNING').upper()
        self.log_file: Optional[str] = os.getenv('LATTICE_LOG_FILE') or None

    def validate_config(self) -> Tuple[bool, List[str], List[str]]:
        """
        Validate that the configured values are usable.

        Returns:
            Tuple of (is_valid, list_of_problems, list_of_warnings)
        """
        problems = []
        warnings = []

        if self.truncation_order < 1:
            problems.append('LATTICE_TRUNCATION_ORDER must be >= 1')
        if self.sampling_order < 1:
            problems.append('LATTICE_SAMPLING_ORDER must be >= 1')
        for name, value in (
            ('LATTICE_PMF_TOL', self.pmf_tol),
            ('LATTICE_HANDLE_TOL', self.handle_tol),
            ('LATTICE_SERIES_TOL', self.series_tol),
            ('LATTICE_MAX_SAMPLING_TAIL', self.max_sampling_tail),
        ):
            if not value > 0:
                problems.append(f'{name} must be positive')
        if self.grid_points < 2:
            problems.append('LATTICE_GRID_POINTS must be >= 2')
        if not isinstance(logging.getLevelName(self.log_level), int):
            problems.append(f'LATTICE_LOG_LEVEL unknown: {self.log_level}')

        # Large orders are legal but slow: every series recurrence is O(N^2)
        if self.truncation_order > 8192:
            warnings.append('LATTICE_TRUNCATION_ORDER above 8192 (slow)')
        if self.pmf_tol > 1e-6:
            warnings.append('LATTICE_PMF_TOL above 1e-6 hides genuine negative coefficients')

        return len(problems) == 0, problems, warnings

    def configure_logging(self, level: Optional[str] = None) -> None:
        """Configure root logging: stderr always, plus LATTICE_LOG_FILE when set."""
        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
        if self.log_file:
            handlers.append(logging.FileHandler(self.log_file))
        logging.basicConfig(
            level=(level or self.log_level).upper(),
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=handlers,
            force=True,
        )


# Global config instance
lattice_config = LatticeConfig()

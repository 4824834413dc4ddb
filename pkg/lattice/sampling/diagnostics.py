"""
Empirical summaries of samples.

All comparisons are pmf based: the alpha < 1 laws have no mean, so no
moment is ever used as a check.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from lattice.errors import DomainError
from lattice.sampling.samplers import RngState
from lattice.series.power_series import BoundedSeries, TruncatedSeries, lumped_total_variation

DEFAULT_SEEDS = (20231, 20232, 20233)


@dataclass(frozen=True)
class EmpiricalPmf:
    """
    Normalised histogram of integer samples.

    Args:
        series: Frequencies of 0..order
        counts: Raw counts of 0..order
        size: Number of samples
        tail: Fraction of samples above order
    """
    series: TruncatedSeries
    counts: np.ndarray
    size: int
    tail: float

    @property
    def order(self) -> int:
        return self.series.order

    def standard_error(self, k: int) -> float:
        p = float(self.series[k]) if k <= self.order else 0.0
        return float(np.sqrt(p * (1.0 - p) / self.size))


def empirical_pmf(samples, order: Optional[int] = None) -> EmpiricalPmf:
    """Histogram over 0..order (default: the largest observed value)."""
    x = np.asarray(samples, dtype=np.int64).ravel()
    if x.size == 0:
        raise DomainError("empirical_pmf needs at least one sample")
    if np.any(x < 0):
        raise DomainError("samples must be nonnegative integers")
    order = int(x.max()) if order is None else int(order)
    counts = np.bincount(x[x <= order], minlength=order + 1)
    freq = counts / x.size
    return EmpiricalPmf(TruncatedSeries(freq), counts, int(x.size), float(np.count_nonzero(x > order) / x.size))


Pmf = Union[TruncatedSeries, BoundedSeries, EmpiricalPmf]


def total_variation(a: Pmf, b: Pmf) -> float:
    """Lumped total variation; see lumped_total_variation."""
    a = a.series if isinstance(a, EmpiricalPmf) else a
    b = b.series if isinstance(b, EmpiricalPmf) else b
    return lumped_total_variation(a, b)


def laplace_transform_estimate(samples, t: float) -> Tuple[float, float]:
    """Monte Carlo mean of exp(-t S) and its standard error."""
    values = np.exp(-t * np.asarray(samples, dtype=np.float64))
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(values.size))


def majority_of_seeds(criterion: Callable[[RngState], bool], seeds: Iterable[int] = DEFAULT_SEEDS,
                      required: int = 2) -> Tuple[bool, Dict[int, bool]]:
    """
    Run a statistical criterion once per seed.

    Returns:
        (at least ``required`` seeds passed, outcome per seed)
    """
    outcomes: Dict[int, bool] = {}
    for seed in seeds:
        outcomes[int(seed)] = bool(criterion(RngState(seed)))
    return sum(outcomes.values()) >= required, outcomes


def batch_means(samples, batches: int = 4) -> List[float]:
    """
    Median block mean for block sizes growing by a factor 4.

    The largest blocks are a quarter of the data, the smallest 4**-batches
    of it. With a finite mean the medians settle on it; for an alpha < 1
    law with no mean they grow roughly like size**(1/alpha - 1).
    """
    x = np.asarray(samples, dtype=np.float64)
    if batches < 1 or x.size < 4 ** batches:
        raise DomainError(f"need at least {4 ** batches} samples for {batches} batches, got {x.size}")
    medians = []
    for i in range(batches):
        size = x.size // 4 ** (batches - i)
        blocks = x[:(x.size // size) * size].reshape(-1, size)
        medians.append(float(np.median(blocks.mean(axis=1))))
    return medians


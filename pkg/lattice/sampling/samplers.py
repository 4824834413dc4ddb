"""
Random variates for the catalog laws.

Routes:
    alpha-poisson   Poisson(Lambda), Lambda = lambda**(1/alpha) S
    dml             Poisson(Lambda), Lambda = (lambda W)**(1/alpha) S, W ~ Exp(1)
    bernoulli, binomial, poisson, geometric0, geometric-shifted: numpy draws
    alpha-bernoulli, alpha-binomial, dss, dsml: inverse CDF over the pmf series

S is one-sided stable with E[exp(-t S)] = exp(-t**alpha), drawn with
Kanter's representation. The inverse-CDF route redraws any uniform that
lands in the untracked tail mass instead of clamping it to the last atom.

Generators are Philox streams keyed by (seed, stream); changing the bit
generator changes every recorded sample and is a breaking change.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from config.lattice_config import lattice_config
from lattice.errors import DomainError, TailTooHeavy
from lattice.laws.catalog import LawFamily, LawSpec, pmf
from lattice.operators.compounding import GeometricConvention

logger = logging.getLogger(__name__)

# numpy's Poisson sampler rejects rates above ~1e19; far below that the
# normal approximation is exact to the last integer digit that matters.
POISSON_NORMAL_SWITCH = 1e12
MAX_COUNT = np.iinfo(np.int64).max // 4

Size = Optional[int]


@dataclass(frozen=True)
class RngState:
    """
    One reproducible random stream.

    Args:
        seed: 64-bit seed
        stream: Stream counter; distinct streams are independent
    """
    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream),))
        return np.random.Generator(np.random.Philox(seq))

    def spawn(self, stream: int) -> 'RngState':
        return RngState(self.seed, stream)


def _as_generator(rng: Union[RngState, np.random.Generator]) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngState) else rng


def _finish(values: np.ndarray, size: Size):
    values = np.asarray(values, dtype=np.int64)
    return int(values[0]) if size is None else values


# ---------------------------------------------------------------------------
# Continuous building blocks
# ---------------------------------------------------------------------------

def sample_positive_stable(alpha: float, rng: Union[RngState, np.random.Generator], size: Size = None):
    """
    One-sided stable variates with Laplace transform exp(-t**alpha).

    Raises:
        DomainError: unless 0 < alpha < 1; alpha = 1 is the point mass at 1
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"positive stable index must lie in (0, 1): {alpha}; use the point mass at 1 for alpha = 1")
    gen = _as_generator(rng)
    n = 1 if size is None else int(size)
    u = np.pi * (1.0 - gen.random(n))
    e = gen.standard_exponential(n)
    s = (np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha)) * (np.sin((1.0 - alpha) * u) / e) ** ((1.0 - alpha) / alpha)
    return float(s[0]) if size is None else s


def _poisson_of_rates(rates: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    # Kanter variates overflow to inf (or nan) when the uniform angle hits the edge
    rates = np.nan_to_num(np.asarray(rates, dtype=np.float64), nan=MAX_COUNT, posinf=MAX_COUNT)
    out = np.empty(rates.shape, dtype=np.int64)
    small = rates < POISSON_NORMAL_SWITCH
    out[small] = gen.poisson(rates[small])
    if not np.all(small):
        big = rates[~small]
        logger.debug("normal approximation for %d Poisson rates above %.0e", big.size, POISSON_NORMAL_SWITCH)
        draws = np.rint(gen.normal(big, np.sqrt(big)))
        out[~small] = np.minimum(draws, MAX_COUNT).astype(np.int64)
    return out


# ---------------------------------------------------------------------------
# Inverse CDF over the pmf series
# ---------------------------------------------------------------------------

def sample_by_inverse_cdf(law: LawSpec, rng: Union[RngState, np.random.Generator], size: Size = None,
                          order: Optional[int] = None):
    """
    Inverse-CDF draws over the validated pmf series of the law.

    Raises:
        NotAValidPMF: when the law's series is not a pmf (some dss choices)
        TailTooHeavy: when more than max_sampling_tail of the mass lies above order
    """
    order = lattice_config.sampling_order if order is None else order
    table = pmf(law, order)
    threshold = lattice_config.max_sampling_tail
    if table.tail_bound > threshold:
        raise TailTooHeavy(table.tail_bound, threshold, order)
    gen = _as_generator(rng)
    cdf = np.cumsum(table.coeffs)
    tracked = cdf[-1]
    n = 1 if size is None else int(size)
    out = np.empty(n, dtype=np.int64)
    pending = np.arange(n)
    while pending.size:
        u = gen.random(pending.size)
        hit = u < tracked
        out[pending[hit]] = np.searchsorted(cdf, u[hit], side='right')
        pending = pending[~hit]
    return _finish(out, size)


# ---------------------------------------------------------------------------
# Catalog sampler
# ---------------------------------------------------------------------------

def sample(law: LawSpec, rng: Union[RngState, np.random.Generator], size: Size = None,
           order: Optional[int] = None):
    """
    Draw from a catalog law.

    Args:
        law: The law to draw from
        rng: RngState or an existing numpy Generator
        size: Number of draws; None returns a single int
        order: Series order for the inverse-CDF route

    Returns:
        int or int64 array
    """
    gen = _as_generator(rng)
    n = 1 if size is None else int(size)
    fam = law.family
    if fam is LawFamily.BERNOULLI:
        values = gen.binomial(1, law['p'], n)
    elif fam is LawFamily.BINOMIAL:
        values = gen.binomial(law['trials'], law['p'], n)
    elif fam is LawFamily.POISSON:
        values = gen.poisson(law['lambda'], n)
    elif fam is LawFamily.GEOMETRIC0:
        values = gen.geometric(1.0 / (1.0 + law['lambda']), n) - 1
    elif fam is LawFamily.GEOMETRIC_SHIFTED:
        values = gen.geometric(law['p'], n)
    elif fam is LawFamily.DEGENERATE_AT_ONE:
        values = np.ones(n, dtype=np.int64)
    elif fam is LawFamily.ALPHA_POISSON:
        lam, alpha = law['lambda'], law['alpha']
        if alpha == 1.0:
            values = gen.poisson(lam, n)
        else:
            values = _poisson_of_rates(lam ** (1.0 / alpha) * sample_positive_stable(alpha, gen, n), gen)
    elif fam is LawFamily.DML:
        lam, alpha = law['lambda'], law['alpha']
        w = lam * gen.standard_exponential(n)
        if alpha == 1.0:
            rates = w
        else:
            rates = w ** (1.0 / alpha) * sample_positive_stable(alpha, gen, n)
        values = _poisson_of_rates(rates, gen)
    else:
        return sample_by_inverse_cdf(law, gen, size, order)
    return _finish(values, size)


def thin_sample(x, c: float, rng: Union[RngState, np.random.Generator]):
    """Binomial(x, c) thinning of nonnegative integer draws."""
    if not 0.0 <= c <= 1.0:
        raise DomainError(f"thinning probability must lie in [0, 1]: {c}")
    gen = _as_generator(rng)
    arr = np.asarray(x, dtype=np.int64)
    if np.any(arr < 0):
        raise DomainError("thinning needs nonnegative counts")
    out = gen.binomial(arr, c)
    return int(out) if np.ndim(out) == 0 else np.asarray(out, dtype=np.int64)


def geometric_sum_sample(law: LawSpec, p: float, convention: GeometricConvention = GeometricConvention.SHIFTED,
                         rng: Union[RngState, np.random.Generator, None] = None, size: Size = None,
                         thinning: Optional[float] = None, order: Optional[int] = None):
    """
    X_1 + ... + X_N with N geometric(p) under the given convention and the
    X_i i.i.d. draws of law, each optionally thinned by ``thinning``.
    """
    if not 0.0 < p <= 1.0:
        raise DomainError(f"geometric parameter p must lie in (0, 1]: {p}")
    if rng is None:
        raise DomainError("geometric_sum_sample needs an rng")
    convention = GeometricConvention(convention)
    gen = _as_generator(rng)
    n = 1 if size is None else int(size)
    counts = gen.geometric(p, n)
    if convention is GeometricConvention.ZERO_BASED:
        counts = counts - 1
    total = int(counts.sum())
    draws = sample(law, gen, size=total, order=order) if total else np.zeros(0, dtype=np.int64)
    if thinning is not None:
        draws = thin_sample(draws, thinning, gen)
    owner = np.repeat(np.arange(n), counts)
    sums = np.zeros(n, dtype=np.int64)
    np.add.at(sums, owner, draws)
    return _finish(sums, size)

"""
Truncated formal power series in s.

A TruncatedSeries holds the coefficients c_0..c_N of

    f(s) = c_0 + c_1*s + c_2*s**2 + ... + c_N*s**N + O(s**(N+1))

and doubles as a pmf on {0, 1, ..., N} when the coefficients are nonnegative
and sum to at most one. Every pmf extraction and identity check in the
library reduces to the arithmetic in this module:

- add / mul / pow_int: ring operations, truncated at order N
- exp_series / log_series / reciprocal_series: O(N^2) derivative recurrences
- binomial_series: (1 - s)**alpha through the generalized binomial product recurrence
- log_cos_compose: the series of psi(1 - s) = (1 - s)**alpha * (1 - A cos(k log(1 - s) + phase))
- affine_substitute: s -> 1 - c + c*s, i.e. binomial thinning of a pmf

All values are immutable; all functions are pure.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import stats

from config.lattice_config import lattice_config
from lattice.errors import (
    DomainError,
    NotAValidPMF,
    SeriesRangeError,
    SingularSeriesError,
)

logger = logging.getLogger(__name__)

Scalar = Union[int, float, np.floating]


class TruncatedSeries(object):
    """
    Power series truncated at order N.

    ``TruncatedSeries(c)`` has order ``len(c) - 1``. Passing ``order`` pads
    ``c`` with zeros or cuts it. Coefficients are stored as a read-only
    float64 array and must be finite.

    Args:
        coeffs: Power series coefficients (optional if order is given)
        order: Highest power kept
    """

    __slots__ = ('_c',)

    def __init__(self, coeffs: Optional[Sequence[float]] = None, order: Optional[int] = None):
        if isinstance(coeffs, TruncatedSeries):
            coeffs = coeffs.coeffs
        if coeffs is None:
            if order is None:
                raise DomainError("either coeffs or order must be given")
            coeffs = []
        c = np.asarray(coeffs, dtype=np.float64).ravel()
        if order is None:
            if len(c) == 0:
                raise DomainError("empty coefficient array")
            order = len(c) - 1
        if order < 0:
            raise DomainError(f"order cannot be less than zero: order = {order}")
        arr = np.zeros(order + 1, dtype=np.float64)
        n = min(len(c), order + 1)
        arr[:n] = c[:n]
        if not np.all(np.isfinite(arr)):
            raise SeriesRangeError("series coefficients must be finite")
        arr.flags.writeable = False
        self._c = arr

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, order: int) -> 'TruncatedSeries':
        return cls(order=order)

    @classmethod
    def unit(cls, order: int) -> 'TruncatedSeries':
        """The series 1 (point mass at 0)."""
        return cls([1.0], order=order)

    @classmethod
    def variable(cls, order: int) -> 'TruncatedSeries':
        """The series s (point mass at 1)."""
        if order < 1:
            return cls(order=order)
        return cls([0.0, 1.0], order=order)

    # -- access ------------------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return len(self._c) - 1

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, i):
        return self._c[i]

    def __iter__(self) -> Iterator[float]:
        return iter(self._c)

    def to_list(self) -> list:
        return self._c.tolist()

    def total_mass(self) -> float:
        return float(np.sum(self._c))

    def with_order(self, order: int) -> 'TruncatedSeries':
        return TruncatedSeries(self._c, order=order)

    def shifted(self, k: int = 1) -> 'TruncatedSeries':
        """Multiply by s**k, keeping the order."""
        if k < 0:
            raise DomainError(f"shift must be non-negative: {k}")
        out = np.zeros_like(self._c)
        if k <= self.order:
            out[k:] = self._c[:len(self._c) - k]
        return TruncatedSeries(out)

    def max_abs_diff(self, other: 'TruncatedSeries') -> float:
        order = max(self.order, other.order)
        return float(np.max(np.abs(self.with_order(order).coeffs - other.with_order(order).coeffs)))

    def allclose(self, other: 'TruncatedSeries', atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    # -- arithmetic --------------------------------------------------------

    def __add__(self, x):
        if isinstance(x, TruncatedSeries):
            return add(self, x)
        ans = np.array(self._c)
        ans[0] += x
        return TruncatedSeries(ans)

    def __radd__(self, x):
        return self + x

    def __neg__(self):
        return TruncatedSeries(-self._c)

    def __sub__(self, x):
        return self + (-x)

    def __rsub__(self, x):
        return -self + x

    def __mul__(self, x):
        if isinstance(x, TruncatedSeries):
            return mul(self, x)
        return TruncatedSeries(x * self._c)

    def __rmul__(self, x):
        return self * x

    def __truediv__(self, x):
        if isinstance(x, TruncatedSeries):
            order = min(self.order, x.order)
            return mul(self, reciprocal_series(x.with_order(order)), order=order)
        return TruncatedSeries(self._c / x)

    def __call__(self, s):
        return eval_series(self, s)

    def __repr__(self):
        return "TruncatedSeries(%s)" % str(self._c.tolist())

    def __str__(self):
        return str(self._c)


@dataclass(frozen=True)
class BoundedSeries:
    """
    A series plus the mass it does not track.

    ``tail_bound`` is 1 - sum(c_k) for a truncated pmf; downstream checks add
    it to their tolerance.
    """
    series: TruncatedSeries
    tail_bound: float

    @classmethod
    def from_pmf(cls, series: TruncatedSeries, floor: float = 0.0) -> 'BoundedSeries':
        return cls(series, max(float(floor), 0.0, 1.0 - series.total_mass()))

    @property
    def coeffs(self) -> np.ndarray:
        return self.series.coeffs

    @property
    def order(self) -> int:
        return self.series.order

    def __call__(self, s):
        return eval_series(self.series, s)


# ---------------------------------------------------------------------------
# Ring operations
# ---------------------------------------------------------------------------

def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Coefficient-wise sum; the shorter operand is padded with zeros."""
    order = max(a.order, b.order)
    return TruncatedSeries(a.with_order(order).coeffs + b.with_order(order).coeffs)


def mul(a: TruncatedSeries, b: TruncatedSeries, order: Optional[int] = None) -> TruncatedSeries:
    """Cauchy product truncated at ``order`` (default: the larger operand order)."""
    if order is None:
        order = max(a.order, b.order)
    ans = np.convolve(a.coeffs[:order + 1], b.coeffs[:order + 1])
    return TruncatedSeries(ans, order=order)


def pow_int(a: TruncatedSeries, n: int) -> TruncatedSeries:
    """a**n for integer n >= 1 by repeated squaring, truncated at a.order."""
    if int(n) != n or n < 1:
        raise DomainError(f"power must be a positive integer: {n}")
    n = int(n)
    result = None
    base = a
    while n > 0:
        if n & 1:
            result = base if result is None else mul(result, base, order=a.order)
        n >>= 1
        if n:
            base = mul(base, base, order=a.order)
    return result


def eval_series(a: TruncatedSeries, s):
    """Horner evaluation at a scalar or an array of points."""
    return npoly.polyval(s, a.coeffs)


# ---------------------------------------------------------------------------
# Elementary functions of series
# ---------------------------------------------------------------------------

def binomial_series(alpha: float, order: int) -> TruncatedSeries:
    """
    Coefficients of (1 - s)**alpha for 0 < alpha <= 1.

    c_0 = 1, c_k = c_{k-1} * (k - 1 - alpha) / k, which is (-1)**k times the
    generalized binomial coefficient C(alpha, k). For alpha < 1 every c_k
    with k >= 1 is negative.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1]: {alpha}")
    if order < 0:
        raise DomainError(f"order cannot be less than zero: order = {order}")
    k = np.arange(1, order + 1, dtype=np.float64)
    factors = (k - 1.0 - alpha) / k
    return TruncatedSeries(np.concatenate(([1.0], np.cumprod(factors))))


def exp_series(u: TruncatedSeries) -> TruncatedSeries:
    """
    g = exp(u) through g' = u' g:  n g_n = sum_{k=1..n} k u_k g_{n-k},  g_0 = e^{u_0}.
    """
    order = u.order
    try:
        g0 = math.exp(u[0])
    except OverflowError:
        raise SeriesRangeError(f"exp of constant term {u[0]} overflows")
    ku = np.arange(order + 1, dtype=np.float64) * u.coeffs
    g = np.zeros(order + 1)
    g[0] = g0
    for n in range(1, order + 1):
        g[n] = np.dot(ku[1:n + 1], g[n - 1::-1]) / n
    logger.debug("exp_series order=%d g0=%.6g", order, g0)
    return TruncatedSeries(g)


def log_series(u: TruncatedSeries) -> TruncatedSeries:
    """
    h = log(u) for u_0 > 0 through u h' = u':
    n h_n u_0 = n u_n - sum_{j=1..n-1} j h_j u_{n-j}.
    """
    u0 = u[0]
    if not u0 > 0:
        raise DomainError(f"log needs a positive constant term: {u0}")
    order = u.order
    c = u.coeffs
    jh = np.zeros(order + 1)
    for n in range(1, order + 1):
        jh[n] = (n * c[n] - np.dot(jh[1:n], c[n - 1:0:-1])) / u0
    h = np.zeros(order + 1)
    h[0] = math.log(u0)
    h[1:] = jh[1:] / np.arange(1, order + 1)
    return TruncatedSeries(h)


def reciprocal_series(u: TruncatedSeries) -> TruncatedSeries:
    """g with u * g = 1:  g_0 = 1/u_0,  g_n = -(sum_{k=1..n} u_k g_{n-k}) / u_0."""
    u0 = u[0]
    if u0 == 0.0:
        raise SingularSeriesError("leading coefficient of divisor equals zero")
    order = u.order
    c = u.coeffs
    g = np.zeros(order + 1)
    g[0] = 1.0 / u0
    for n in range(1, order + 1):
        g[n] = -np.dot(c[1:n + 1], g[n - 1::-1]) / u0
    return TruncatedSeries(g)


def _cos_sin_series(v: TruncatedSeries, k: float, phase: float = 0.0):
    """
    cos(k v + phase) and sin(k v + phase) jointly:
    C' = -k v' S,  S' = k v' C.
    """
    order = v.order
    jv = np.arange(order + 1, dtype=np.float64) * v.coeffs
    C = np.zeros(order + 1)
    S = np.zeros(order + 1)
    C[0] = math.cos(k * v[0] + phase)
    S[0] = math.sin(k * v[0] + phase)
    for n in range(1, order + 1):
        C[n] = -k * np.dot(jv[1:n + 1], S[n - 1::-1]) / n
        S[n] = k * np.dot(jv[1:n + 1], C[n - 1::-1]) / n
    return TruncatedSeries(C), TruncatedSeries(S)


def log_one_minus_s(order: int) -> TruncatedSeries:
    """log(1 - s) = -sum_{j>=1} s**j / j."""
    v = np.zeros(order + 1)
    if order >= 1:
        v[1:] = -1.0 / np.arange(1, order + 1)
    return TruncatedSeries(v)


def log_cos_compose(alpha: float, A: float, k: float, order: int, phase: float = 0.0) -> TruncatedSeries:
    """
    Series of psi(1 - s) = (1 - s)**alpha * (1 - A cos(k log(1 - s) + phase)).

    With A = 0 this is binomial_series(alpha, order).
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1]: {alpha}")
    if not 0.0 <= A < 1.0:
        raise DomainError(f"amplitude A must lie in [0, 1): {A}")
    base = binomial_series(alpha, order)
    if A == 0.0:
        return base
    cos_part, _ = _cos_sin_series(log_one_minus_s(order), k, phase)
    return mul(base, 1.0 - A * cos_part, order=order)


# ---------------------------------------------------------------------------
# Thinning
# ---------------------------------------------------------------------------

def affine_substitute(a: Union[TruncatedSeries, BoundedSeries], c: float) -> BoundedSeries:
    """
    Series of s -> P(1 - c + c s), 0 < c <= 1.

    q_j = sum_{k>=j} p_k C(k, j) (1 - c)**(k - j) c**j, i.e. the pmf vector
    pushed through a Binomial(k, c) kernel. Coefficients p_k with k > N are
    unknown, so the result carries the input tail mass as its error bound.
    """
    if not 0.0 < c <= 1.0:
        raise DomainError(f"thinning probability must lie in (0, 1]: {c}")
    floor = 0.0
    if isinstance(a, BoundedSeries):
        floor = a.tail_bound
        a = a.series
    tail = max(floor, 0.0, 1.0 - a.total_mass())
    if c == 1.0:
        return BoundedSeries(a, tail)
    n = np.arange(a.order + 1)
    kernel = stats.binom.pmf(n[None, :], n[:, None], c)
    q = a.coeffs @ kernel
    return BoundedSeries(TruncatedSeries(q), tail)


# ---------------------------------------------------------------------------
# pmf validation
# ---------------------------------------------------------------------------

def validate_pmf(series: TruncatedSeries, pmf_tol: Optional[float] = None, label: Optional[str] = None) -> TruncatedSeries:
    """
    Check the pmf invariant and return the series with values in
    [-pmf_tol, 0) clamped to 0. Larger negatives, or a total mass above
    1 + pmf_tol, raise NotAValidPMF.
    """
    tol = lattice_config.pmf_tol if pmf_tol is None else pmf_tol
    c = series.coeffs
    total = float(np.sum(c))
    bad = np.flatnonzero(c < -tol)
    if bad.size or total > 1.0 + tol:
        raise NotAValidPMF(bad.tolist(), float(np.min(c)), total, tol, label)
    small = (c < 0.0)
    if np.any(small):
        logger.debug("clamping %d coefficients in [-%.1e, 0) to zero", int(np.sum(small)), tol)
        return TruncatedSeries(np.where(small, 0.0, c))
    return series


def lumped_total_variation(a: Union[TruncatedSeries, BoundedSeries],
                           b: Union[TruncatedSeries, BoundedSeries]) -> float:
    """
    Total variation between two pmfs after lumping the mass above
    min(order) into one extra atom.
    """
    if isinstance(a, BoundedSeries):
        a = a.series
    if isinstance(b, BoundedSeries):
        b = b.series
    order = min(a.order, b.order)
    pa, pb = a.coeffs[:order + 1], b.coeffs[:order + 1]
    tails = abs((1.0 - pa.sum()) - (1.0 - pb.sum()))
    return 0.5 * float(np.abs(pa - pb).sum() + tails)

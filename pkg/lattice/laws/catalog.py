"""
Catalog of lattice laws.

Every family is described by a LawSpec (family tag plus validated
parameters) and has three faces:

- pgf_eval: exact scalar evaluation of the closed-form PGF on [0, 1]
- pgf_handle: the same formula as a TransformHandle (domain s <= 1)
- pmf: coefficient extraction through the series kernel, with tail bound

Family    PGF P(s), u = 1 - s
--------  ------------------------------------
bernoulli            1 - p u
binomial             (1 - p u)**trials
alpha-bernoulli      1 - b u**alpha
alpha-binomial       (1 - b u**alpha)**trials
poisson              exp(-lambda u)
alpha-poisson        exp(-lambda u**alpha)
geometric0           1 / (1 + lambda u)
geometric-shifted    p s / (1 - q s)
dml                  1 / (1 + lambda u**alpha)
dss                  exp(-psi(u))
dsml                 1 / (1 + psi(u))
degenerate-at-one    s
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from config.lattice_config import lattice_config
from lattice.errors import DomainError, LawSpecParseError
from lattice.laws.psi import PsiFunction
from lattice.laws.transforms import TransformHandle, make_pgf
from lattice.series.power_series import (
    BoundedSeries,
    TruncatedSeries,
    binomial_series,
    exp_series,
    pow_int,
    reciprocal_series,
    validate_pmf,
)

logger = logging.getLogger(__name__)


class LawFamily(str, Enum):
    BERNOULLI = 'bernoulli'
    BINOMIAL = 'binomial'
    ALPHA_BERNOULLI = 'alpha-bernoulli'
    ALPHA_BINOMIAL = 'alpha-binomial'
    POISSON = 'poisson'
    ALPHA_POISSON = 'alpha-poisson'
    GEOMETRIC0 = 'geometric0'
    GEOMETRIC_SHIFTED = 'geometric-shifted'
    DML = 'dml'
    DSS = 'dss'
    DSML = 'dsml'
    DEGENERATE_AT_ONE = 'degenerate-at-one'


# Required and optional keys per family; optional values are defaults.
_FAMILY_KEYS: Dict[LawFamily, Tuple[Tuple[str, ...], Dict[str, float]]] = {
    LawFamily.BERNOULLI: (('p',), {}),
    LawFamily.BINOMIAL: (('trials', 'p'), {}),
    LawFamily.ALPHA_BERNOULLI: (('b', 'alpha'), {}),
    LawFamily.ALPHA_BINOMIAL: (('b', 'alpha', 'trials'), {}),
    LawFamily.POISSON: (('lambda',), {}),
    LawFamily.ALPHA_POISSON: (('lambda', 'alpha'), {}),
    LawFamily.GEOMETRIC0: (('lambda',), {}),
    LawFamily.GEOMETRIC_SHIFTED: (('p',), {}),
    LawFamily.DML: (('lambda', 'alpha'), {}),
    LawFamily.DSS: (('b', 'alpha'), {'A': 0.0, 'lambda': 1.0, 'phase': 0.0}),
    LawFamily.DSML: (('b', 'alpha'), {'A': 0.0, 'lambda': 1.0, 'phase': 0.0}),
    LawFamily.DEGENERATE_AT_ONE: ((), {}),
}

SEMI_FAMILIES = (LawFamily.DSS, LawFamily.DSML)
INTEGER_KEYS = ('trials',)


def _check_open_unit(name: str, value: float, closed_right: bool = True):
    ok = 0.0 < value <= 1.0 if closed_right else 0.0 < value < 1.0
    if not ok:
        bracket = ']' if closed_right else ')'
        raise DomainError(f"{name} must lie in (0, 1{bracket}: {value}")


def _validate(family: LawFamily, params: Dict[str, float]):
    if 'alpha' in params:
        _check_open_unit('alpha', params['alpha'])
    if 'lambda' in params and not params['lambda'] > 0.0:
        raise DomainError(f"lambda must be positive: {params['lambda']}")
    if 'trials' in params:
        trials = params['trials']
        if int(trials) != trials or trials < 1:
            raise DomainError(f"trials must be a positive integer: {trials}")
    if 'p' in params:
        _check_open_unit('p', params['p'])
    if family in SEMI_FAMILIES:
        # PsiFunction owns the (b, alpha, A) constraints.
        PsiFunction(alpha=params['alpha'], b=params['b'], A=params['A'],
                    scale=params['lambda'], phase=params['phase'])
    elif 'b' in params:
        _check_open_unit('b', params['b'])


@dataclass(frozen=True)
class LawSpec:
    """
    One law from the catalog.

    Build through LawSpec.create (or the family helpers below), which
    resolves aliases and validates ranges; direct construction expects
    canonical params already sorted by key.
    """
    family: LawFamily
    params: Tuple[Tuple[str, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'family', LawFamily(self.family))
        params = dict(self.params)
        required, optional = _FAMILY_KEYS[self.family]
        missing = [key for key in required if key not in params]
        if missing:
            raise DomainError(f"{self.family.value} needs parameters {missing}")
        unknown = sorted(set(params) - set(required) - set(optional))
        if unknown:
            raise DomainError(f"{self.family.value} does not take parameters {unknown}")
        for key, default in optional.items():
            params.setdefault(key, default)
        for key in INTEGER_KEYS:
            if key in params:
                params[key] = int(params[key]) if float(params[key]).is_integer() else params[key]
        _validate(self.family, params)
        object.__setattr__(self, 'params', tuple(sorted(params.items())))

    @classmethod
    def create(cls, family, params: Optional[Mapping[str, float]] = None, **kwargs) -> 'LawSpec':
        """
        Build a validated LawSpec.

        Aliases: geometric0 accepts p in place of lambda (lambda = q / p);
        dss/dsml accept a in place of alpha (alpha = log a / -log b).
        """
        family = LawFamily(family)
        merged: Dict[str, float] = dict(params or {})
        merged.update(kwargs)
        if family is LawFamily.GEOMETRIC0 and 'p' in merged:
            if 'lambda' in merged:
                raise DomainError("geometric0 takes lambda or p, not both")
            p = merged.pop('p')
            _check_open_unit('p', p)
            merged['lambda'] = (1.0 - p) / p
            if merged['lambda'] == 0.0:
                raise DomainError("geometric0 with p = 1 is degenerate at zero")
        if family in SEMI_FAMILIES and 'a' in merged:
            if 'alpha' in merged:
                raise DomainError(f"{family.value} takes alpha or a, not both")
            if 'b' not in merged:
                raise DomainError(f"{family.value} needs b together with a")
            psi = PsiFunction.from_scale(merged.pop('a'), merged['b'])
            merged['alpha'] = psi.alpha
        return cls(family, tuple(sorted(merged.items())))

    @classmethod
    def from_psi(cls, family, psi: PsiFunction) -> 'LawSpec':
        family = LawFamily(family)
        if family not in SEMI_FAMILIES:
            raise DomainError(f"{family.value} is not built from a psi exponent")
        if not psi.period_matched:
            raise DomainError("catalog semi-stable laws need k = -2 pi / log b")
        return cls.create(family, {'b': psi.b, 'alpha': psi.alpha, 'A': psi.A,
                                   'lambda': psi.scale, 'phase': psi.phase})

    def __getitem__(self, key: str) -> float:
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)

    def get(self, key: str, default: Any = None) -> Any:
        try:
            return self[key]
        except KeyError:
            return default

    def as_dict(self) -> Dict[str, float]:
        return dict(self.params)

    @property
    def psi(self) -> PsiFunction:
        if self.family not in SEMI_FAMILIES:
            raise DomainError(f"{self.family.value} has no psi exponent")
        return PsiFunction(alpha=self['alpha'], b=self['b'], A=self['A'],
                           scale=self['lambda'], phase=self['phase'])

    @property
    def is_lt_derived(self) -> bool:
        """True for families built as phi(1 - s) from a continuous LT."""
        return self.family in (
            LawFamily.POISSON, LawFamily.ALPHA_POISSON, LawFamily.GEOMETRIC0,
            LawFamily.DML, LawFamily.DSML,
        )

    def __str__(self) -> str:
        body = ' '.join(f"{k}={v:g}" for k, v in self.params)
        return f"{self.family.value} {body}".strip()


# ---------------------------------------------------------------------------
# Family helpers
# ---------------------------------------------------------------------------

def bernoulli(p: float) -> LawSpec:
    return LawSpec.create(LawFamily.BERNOULLI, p=p)


def binomial(trials: int, p: float) -> LawSpec:
    return LawSpec.create(LawFamily.BINOMIAL, trials=trials, p=p)


def alpha_bernoulli(b: float, alpha: float) -> LawSpec:
    return LawSpec.create(LawFamily.ALPHA_BERNOULLI, b=b, alpha=alpha)


def alpha_binomial(b: float, alpha: float, trials: int) -> LawSpec:
    return LawSpec.create(LawFamily.ALPHA_BINOMIAL, b=b, alpha=alpha, trials=trials)


def poisson(lam: float) -> LawSpec:
    return LawSpec.create(LawFamily.POISSON, {'lambda': lam})


def alpha_poisson(lam: float, alpha: float) -> LawSpec:
    return LawSpec.create(LawFamily.ALPHA_POISSON, {'lambda': lam, 'alpha': alpha})


def geometric0(lam: float) -> LawSpec:
    return LawSpec.create(LawFamily.GEOMETRIC0, {'lambda': lam})


def geometric_shifted(p: float) -> LawSpec:
    return LawSpec.create(LawFamily.GEOMETRIC_SHIFTED, p=p)


def dml(lam: float, alpha: float) -> LawSpec:
    return LawSpec.create(LawFamily.DML, {'lambda': lam, 'alpha': alpha})


def dss(psi: PsiFunction) -> LawSpec:
    return LawSpec.from_psi(LawFamily.DSS, psi)


def dsml(psi: PsiFunction) -> LawSpec:
    return LawSpec.from_psi(LawFamily.DSML, psi)


def degenerate_at_one() -> LawSpec:
    return LawSpec(LawFamily.DEGENERATE_AT_ONE)


# ---------------------------------------------------------------------------
# Law specification grammar:  <family> key=value ...
# ---------------------------------------------------------------------------

def _parse_number(token: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise LawSpecParseError("not a number", token)
    if not math.isfinite(value):
        raise LawSpecParseError("not a finite number", token)
    return value


def parse_law_tokens(tokens: Sequence[str], reserved: Iterable[str] = ()) -> Tuple[LawSpec, Dict[str, str]]:
    """
    Parse ``<family> key=value ...``.

    Args:
        tokens: Family name followed by key=value tokens
        reserved: Keys the caller handles itself (e.g. n, count, seed);
            they are returned raw instead of going to the law

    Returns:
        (law, reserved values)

    Raises:
        LawSpecParseError: naming the offending token
    """
    tokens = list(tokens)
    if not tokens:
        raise LawSpecParseError("empty law specification")
    head = tokens[0].strip().lower()
    try:
        family = LawFamily(head)
    except ValueError:
        known = ', '.join(f.value for f in LawFamily)
        raise LawSpecParseError(f"unknown family (known: {known})", tokens[0])
    reserved = set(reserved)
    params: Dict[str, float] = {}
    extras: Dict[str, str] = {}
    for token in tokens[1:]:
        key, sep, raw = token.partition('=')
        key = key.strip()
        if not sep or not key or not raw:
            raise LawSpecParseError("expected key=value", token)
        if key in params or key in extras:
            raise LawSpecParseError("duplicate key", token)
        if key in reserved:
            extras[key] = raw
            continue
        params[key] = _parse_number(token, raw)
    try:
        law = LawSpec.create(family, params)
    except LawSpecParseError:
        raise
    except DomainError as e:
        raise LawSpecParseError(str(e), ' '.join(tokens))
    return law, extras


def parse_law_spec(text: str) -> LawSpec:
    law, _ = parse_law_tokens(text.split())
    return law


# ---------------------------------------------------------------------------
# PGF evaluation
# ---------------------------------------------------------------------------

def pgf_of_complement(law: LawSpec, u):
    """Closed-form PGF as a function of u = 1 - s >= 0."""
    u = np.asarray(u, dtype=np.float64)
    fam = law.family
    if fam is LawFamily.BERNOULLI:
        out = 1.0 - law['p'] * u
    elif fam is LawFamily.BINOMIAL:
        out = (1.0 - law['p'] * u) ** law['trials']
    elif fam is LawFamily.ALPHA_BERNOULLI:
        out = 1.0 - law['b'] * u ** law['alpha']
    elif fam is LawFamily.ALPHA_BINOMIAL:
        out = (1.0 - law['b'] * u ** law['alpha']) ** law['trials']
    elif fam is LawFamily.POISSON:
        out = np.exp(-law['lambda'] * u)
    elif fam is LawFamily.ALPHA_POISSON:
        out = np.exp(-law['lambda'] * u ** law['alpha'])
    elif fam is LawFamily.GEOMETRIC0:
        out = 1.0 / (1.0 + law['lambda'] * u)
    elif fam is LawFamily.GEOMETRIC_SHIFTED:
        p = law['p']
        out = p * (1.0 - u) / (p + (1.0 - p) * u)
    elif fam is LawFamily.DML:
        out = 1.0 / (1.0 + law['lambda'] * u ** law['alpha'])
    elif fam is LawFamily.DSS:
        out = np.exp(-np.asarray(law.psi(u)))
    elif fam is LawFamily.DSML:
        out = 1.0 / (1.0 + np.asarray(law.psi(u)))
    elif fam is LawFamily.DEGENERATE_AT_ONE:
        out = 1.0 - u
    else:
        raise DomainError(f"unhandled family {fam}")
    out = np.asarray(out, dtype=np.float64)
    return float(out) if out.ndim == 0 else out


def pgf_formula(law: LawSpec, s):
    """Closed-form PGF, valid for any s <= 1 (u = 1 - s >= 0)."""
    return pgf_of_complement(law, 1.0 - np.asarray(s, dtype=np.float64))



def pgf_eval(law: LawSpec, s):
    """
    Exact PGF value(s) on [0, 1].

    Raises:
        DomainError: if any s lies outside [0, 1]
    """
    arr = np.asarray(s, dtype=np.float64)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise DomainError(f"pgf_eval needs s in [0, 1]: {s}")
    return pgf_formula(law, arr)


def pgf_handle(law: LawSpec) -> TransformHandle:
    return make_pgf(lambda s: pgf_formula(law, s), label=str(law),
                    complement=lambda u: pgf_of_complement(law, u))


# ---------------------------------------------------------------------------
# pmf extraction
# ---------------------------------------------------------------------------

def pmf_series(law: LawSpec, order: int) -> TruncatedSeries:
    """Raw coefficient series of the PGF, unvalidated."""
    if order < 0:
        raise DomainError(f"order cannot be less than zero: order = {order}")
    fam = law.family
    k = np.arange(order + 1)
    if fam is LawFamily.BERNOULLI:
        return TruncatedSeries([1.0 - law['p'], law['p']], order=order)
    if fam is LawFamily.BINOMIAL:
        return TruncatedSeries(stats.binom.pmf(k, law['trials'], law['p']))
    if fam is LawFamily.POISSON:
        return TruncatedSeries(stats.poisson.pmf(k, law['lambda']))
    if fam in (LawFamily.ALPHA_BERNOULLI, LawFamily.ALPHA_BINOMIAL):
        base = 1.0 - law['b'] * binomial_series(law['alpha'], order)
        return base if fam is LawFamily.ALPHA_BERNOULLI else pow_int(base, law['trials'])
    if fam is LawFamily.ALPHA_POISSON:
        return exp_series(-law['lambda'] * binomial_series(law['alpha'], order))
    if fam is LawFamily.GEOMETRIC0:
        lam = law['lambda']
        return reciprocal_series(TruncatedSeries([1.0 + lam, -lam], order=order))
    if fam is LawFamily.GEOMETRIC_SHIFTED:
        p = law['p']
        return p * reciprocal_series(TruncatedSeries([1.0, -(1.0 - p)], order=order)).shifted(1)
    if fam is LawFamily.DML:
        return reciprocal_series(1.0 + law['lambda'] * binomial_series(law['alpha'], order))
    if fam is LawFamily.DSS:
        return exp_series(-law.psi.series(order))
    if fam is LawFamily.DSML:
        return reciprocal_series(1.0 + law.psi.series(order))
    if fam is LawFamily.DEGENERATE_AT_ONE:
        return TruncatedSeries([0.0, 1.0], order=order)
    raise DomainError(f"unhandled family {fam}")


def pmf(law: LawSpec, order: Optional[int] = None, pmf_tol: Optional[float] = None) -> BoundedSeries:
    """
    Probabilities p_0..p_N of the law plus the tail bound 1 - sum p_k.

    Raises:
        NotAValidPMF: when a coefficient is below -pmf_tol (expected for some
            dss parameter choices) or the total exceeds 1 + pmf_tol
    """
    order = lattice_config.truncation_order if order is None else order
    raw = pmf_series(law, order)
    clean = validate_pmf(raw, pmf_tol=pmf_tol, label=str(law))
    result = BoundedSeries.from_pmf(clean)
    logger.debug("pmf %s order=%d tail=%.3e", law, order, result.tail_bound)
    return result


# ---------------------------------------------------------------------------
# Closed-form thinning and convolution
# ---------------------------------------------------------------------------

def thin_law(law: LawSpec, c: float) -> LawSpec:
    """
    The law of the c-thinned variable, P(1 - c + c s), as a catalog law.

    Raises:
        DomainError: for c outside (0, 1], or for geometric-shifted, whose
            thinning leaves the catalog
    """
    if not 0.0 < c <= 1.0:
        raise DomainError(f"thinning probability must lie in (0, 1]: {c}")
    fam = law.family
    params = law.as_dict()
    if c == 1.0:
        return law
    if fam in (LawFamily.BERNOULLI, LawFamily.BINOMIAL):
        params['p'] *= c
    elif fam in (LawFamily.ALPHA_BERNOULLI, LawFamily.ALPHA_BINOMIAL):
        params['b'] *= c ** params['alpha']
    elif fam in (LawFamily.POISSON, LawFamily.GEOMETRIC0):
        params['lambda'] *= c
    elif fam in (LawFamily.ALPHA_POISSON, LawFamily.DML):
        params['lambda'] *= c ** params['alpha']
    elif fam in SEMI_FAMILIES:
        return LawSpec.from_psi(fam, law.psi.dilate(c))
    elif fam is LawFamily.DEGENERATE_AT_ONE:
        return bernoulli(c)
    else:
        raise DomainError(f"{fam.value} has no closed-form thinning in the catalog")
    return LawSpec.create(fam, params)


def convolve_law(law: LawSpec, n: int) -> Optional[LawSpec]:
    """Closed form of the n-fold convolution, or None when it leaves the catalog."""
    if int(n) != n or n < 1:
        raise DomainError(f"convolution power must be a positive integer: {n}")
    n = int(n)
    if n == 1:
        return law
    fam = law.family
    params = law.as_dict()
    if fam is LawFamily.BERNOULLI:
        return binomial(n, params['p'])
    if fam is LawFamily.ALPHA_BERNOULLI:
        return alpha_binomial(params['b'], params['alpha'], n)
    if fam in (LawFamily.BINOMIAL, LawFamily.ALPHA_BINOMIAL):
        params['trials'] *= n
    elif fam in (LawFamily.POISSON, LawFamily.ALPHA_POISSON):
        params['lambda'] *= n
    elif fam is LawFamily.DSS:
        return LawSpec.from_psi(fam, law.psi.scaled(n))
    else:
        return None
    return LawSpec.create(fam, params)

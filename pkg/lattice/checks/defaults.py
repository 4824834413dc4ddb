"""
Registry of verification suites with their default parameters.

Every suite runs with no arguments and, with the defaults below, passes.
Overrides come as ``key=value`` tokens; suites that take a law also accept a
leading family name, in which case the default law is replaced entirely.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from lattice.checks import suites
from lattice.checks.report import CheckReport
from lattice.errors import LawSpecParseError
from lattice.laws.catalog import LawFamily, LawSpec, pgf_handle
from lattice.laws.psi import PsiFunction
from lattice.laws.transforms import lt_from_pgf

logger = logging.getLogger(__name__)

INTEGER_PARAMETERS = ('n', 'm', 'depth', 'order')

Runner = Callable[[Optional[LawSpec], Dict[str, float]], CheckReport]


@dataclass(frozen=True)
class SuiteDefinition:
    """
    Args:
        name: CLI name of the suite
        description: One line for ``verify --list``
        runner: Takes the law (None for parameter-only suites) and the
            suite parameters, returns the report
        parameters: Default suite parameters; keys listed here are the only
            suite keys accepted
        optional: Keys accepted without a default
        law: Default law as ``(family, params)``, None for parameter-only suites
        aliases: Further CLI names resolving to this suite
    """
    name: str
    description: str
    runner: Runner
    parameters: Dict[str, float] = field(default_factory=dict)
    optional: Tuple[str, ...] = ()
    law: Optional[Tuple[str, Dict[str, float]]] = None
    aliases: Tuple[str, ...] = ()

    @property
    def accepted_keys(self) -> Tuple[str, ...]:
        return tuple(self.parameters) + self.optional + ('order',)

    def default_law(self) -> Optional[LawSpec]:
        if self.law is None:
            return None
        family, params = self.law
        return LawSpec.create(family, params)


def _psi(params: Mapping[str, float], b: Optional[float] = None) -> PsiFunction:
    return PsiFunction(alpha=params['alpha'], b=params['b'] if b is None else b,
                       A=params.get('A', 0.0), scale=params.get('lambda', 1.0),
                       phase=params.get('phase', 0.0))


def _run_geometric_dtype(law, params):
    p = params['p']
    psi = _psi(params, b=p ** (1.0 / params['alpha']))
    return suites.geometric_dtype_check(psi, p, b=params.get('b'), order=params.get('order'))


def _run_geometric_sum_limit(law, params):
    return suites.geometric_sum_limit(law, alpha=params.get('index'), lam=params.get('limit_lambda'))


SUITES: Dict[str, SuiteDefinition] = {s.name: s for s in (
    SuiteDefinition(
        'class-l', 'discrete self-decomposability of a law over alpha = 0.1..0.9',
        lambda law, p: suites.discrete_class_L_check(law, order=p.get('order')),
        law=('alpha-poisson', {'lambda': 1.0, 'alpha': 0.6}),
        aliases=('classL', 'thm2_1'),
    ),
    SuiteDefinition(
        'dtype', 'a law and its c-thinning are of the same D-type',
        lambda law, p: suites.thinning_pair_check(law, p['c'], order=p.get('order')),
        parameters={'c': 0.4},
        law=('alpha-poisson', {'lambda': 1.0, 'alpha': 0.6}),
        aliases=('thm3_1',),
    ),
    SuiteDefinition(
        'factorize', 'Bernoulli factorisation round trip',
        lambda law, p: suites.bernoulli_factorize_check(law, p['factor']),
        parameters={'factor': 0.25},
        law=('dml', {'lambda': 0.5, 'alpha': 0.5}),
    ),
    SuiteDefinition(
        'cm', 'complete-monotonicity screen of phi(t) = P(1 - t)',
        lambda law, p: suites.cm_grid_check(lt_from_pgf(pgf_handle(law)), s_max=p['s_max'], depth=p['depth']),
        parameters={'s_max': 10.0, 'depth': 6},
        law=('dml', {'lambda': 1.0, 'alpha': 0.6}),
    ),
    SuiteDefinition(
        'semi-stable', 'psi(u) = a psi(b u) on (0, 1]',
        lambda law, p: suites.semi_stable_residual(_psi(p)),
        parameters={'alpha': 0.5, 'b': 0.25, 'A': 0.3, 'lambda': 1.0, 'phase': 0.0},
        aliases=('semistable',),
    ),
    SuiteDefinition(
        'two-scale', 'power law holds at two scales, a periodic psi only at its own',
        lambda law, p: suites.two_scale_check(p['alpha'], p['b1'], p['b2'], p['A']),
        parameters={'alpha': 0.6, 'b1': 0.3, 'b2': 0.5, 'A': 0.4},
    ),
    SuiteDefinition(
        'iid-sum-dtype', 'semi-stable law as n i.i.d. copies of its b-thinning',
        lambda law, p: suites.iid_sum_dtype_check(_psi(p), p['n'], order=p.get('order')),
        parameters={'alpha': 0.5, 'b': 0.25, 'A': 0.3, 'lambda': 1.0, 'phase': 0.0, 'n': 2},
        aliases=('thm4_2',),
    ),
    SuiteDefinition(
        'alpha-poisson-split', 'alpha-Poisson splits into n thinned copies; growth limit',
        lambda law, p: suites.alpha_poisson_split_check(p['lambda'], p['alpha'], p['n'],
                                                        b=p.get('b'), order=p.get('order')),
        parameters={'lambda': 1.0, 'alpha': 0.6, 'n': 2},
        optional=('b',),
        aliases=('thm4_4',),
    ),
    SuiteDefinition(
        'alpha-poisson-mn', 'alpha-Poisson: m copies against n thinned copies',
        lambda law, p: suites.alpha_poisson_mn_check(p['lambda'], p['alpha'], p['m'], p['n'],
                                                     order=p.get('order')),
        parameters={'lambda': 1.0, 'alpha': 0.7, 'm': 2, 'n': 3},
        aliases=('thm4_5',),
    ),
    SuiteDefinition(
        'geometric-dtype', 'semi-Mittag-Leffler as a geometric sum of its thinned copies',
        _run_geometric_dtype,
        parameters={'alpha': 0.5, 'A': 0.4, 'p': 0.5, 'lambda': 1.0, 'phase': 0.0},
        optional=('b',),
        aliases=('thm5_1',),
    ),
    SuiteDefinition(
        'geometric-sum-limit', 'geometric sums of thinned copies approach DML as p -> 0',
        _run_geometric_sum_limit,
        optional=('index', 'limit_lambda'),
        law=('poisson', {'lambda': 1.0}),
        aliases=('thm5_5',),
    ),
    SuiteDefinition(
        'dml-fixed-point', 'DML as a geometric sum of its own thinned copies',
        lambda law, p: suites.dml_fixed_point_check(p['lambda'], p['alpha'], p['p'],
                                                    b=p.get('b'), order=p.get('order')),
        parameters={'lambda': 1.0, 'alpha': 0.5, 'p': 0.25},
        optional=('b',),
        aliases=('thm5_6',),
    ),
    SuiteDefinition(
        'dml-geometric-pair', 'geometric(p0) sums of DML against geometric(p) sums of thinned DML',
        lambda law, p: suites.dml_geometric_pair_check(p['lambda'], p['alpha'], p['p'], p['p0'],
                                                       order=p.get('order')),
        parameters={'lambda': 1.0, 'alpha': 0.5, 'p': 0.2, 'p0': 0.8},
        aliases=('thm5_7',),
    ),
    SuiteDefinition(
        'dml-power-limit', 'n-th powers of DML(lambda/n) approach alpha-Poisson at rate 1/n',
        lambda law, p: suites.dml_power_convergence(p['lambda'], p['alpha'], order=p.get('order')),
        parameters={'lambda': 1.0, 'alpha': 0.6},
        aliases=('thm4_1',),
    ),
)}


SUITE_ALIASES: Dict[str, str] = {alias: s.name for s in SUITES.values() for alias in s.aliases}


def suite_names() -> List[str]:
    return sorted(SUITES)


def is_known_suite(name: str) -> bool:
    return name in SUITES or name in SUITE_ALIASES


def get_suite(name: str) -> SuiteDefinition:
    """Suite by CLI name or alias."""
    try:
        return SUITES[SUITE_ALIASES.get(name, name)]
    except KeyError:
        raise LawSpecParseError(f"unknown suite (known: {', '.join(suite_names())})", name)


def _parse_value(token: str, raw: str, key: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise LawSpecParseError("not a number", token)
    if key in INTEGER_PARAMETERS:
        if not value.is_integer():
            raise LawSpecParseError("expected an integer", token)
        return int(value)
    return value


def resolve_arguments(definition: SuiteDefinition,
                      tokens: Sequence[str] = ()) -> Tuple[Optional[LawSpec], Dict[str, float]]:
    """
    Merge override tokens into the suite defaults.

    Returns:
        (law, parameters)

    Raises:
        LawSpecParseError: naming the offending token
    """
    tokens = list(tokens)
    parameters: Dict[str, float] = dict(definition.parameters)
    accepted = definition.accepted_keys

    if definition.law is None:
        if tokens and '=' not in tokens[0]:
            raise LawSpecParseError(f"suite {definition.name} takes no law", tokens[0])
        law_family, law_params, law_tokens = None, {}, []
    elif tokens and '=' not in tokens[0]:
        law_family, law_params = tokens[0], {}
        law_tokens, tokens = [tokens[0]], tokens[1:]
    else:
        law_family, law_params = definition.law
        law_params = dict(law_params)
        law_tokens = [law_family]

    seen = set()
    for token in tokens:
        key, sep, raw = token.partition('=')
        key = key.strip()
        if not sep or not key or not raw:
            raise LawSpecParseError("expected key=value", token)
        if key in seen:
            raise LawSpecParseError("duplicate key", token)
        seen.add(key)
        if key in accepted:
            parameters[key] = _parse_value(token, raw, key)
        elif law_family is not None:
            law_params[key] = _parse_value(token, raw, key)
            law_tokens.append(token)
        else:
            raise LawSpecParseError(f"unknown parameter for {definition.name}", token)

    law = None
    if law_family is not None:
        try:
            LawFamily(law_family)
        except ValueError:
            raise LawSpecParseError("unknown family", law_family)
        try:
            law = LawSpec.create(law_family, law_params)
        except LawSpecParseError:
            raise
        except ValueError as e:
            raise LawSpecParseError(str(e), ' '.join(law_tokens))
    return law, parameters


def run_suite(name: str, tokens: Sequence[str] = ()) -> CheckReport:
    """Run one suite by CLI name or alias with optional ``key=value`` overrides."""
    definition = get_suite(name)
    name = definition.name
    law, parameters = resolve_arguments(definition, tokens)
    logger.info("running suite %s law=%s parameters=%s", name, law, parameters)
    report = definition.runner(law, parameters)
    logger.info("suite %s: %s (residual %.3e, tolerance %.3e)",
                name, report.verdict, report.residual, report.tolerance)
    return report

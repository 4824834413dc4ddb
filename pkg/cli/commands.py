"""
Command handlers for the lattice CLI.

Each handler takes the parsed arguments, runs the library call and returns
a result dict:

    success    bool
    exit_code  0 success / pass, 1 verification failure or invalid pmf,
               2 usage or parameter error
    output     text for stdout (CSV, JSON or plain text)
    summary    optional line for stderr
    error      optional error dict (LatticeError.to_dict)

Handlers never print; cli.main decides where output goes.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config.lattice_config import lattice_config
from lattice.checks.defaults import is_known_suite, run_suite, suite_names
from lattice.errors import DomainError, LatticeError, NotAValidPMF, TailTooHeavy
from lattice.laws.catalog import parse_law_tokens, pgf_eval, pmf
from lattice.sampling import RngState, empirical_pmf, sample, total_variation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

DEFAULT_SAMPLE_COUNT = 1000
DEFAULT_EVAL_POINTS = 11


def _result(success: bool, exit_code: int, output: str = '', summary: Optional[str] = None,
            error: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {'success': success, 'exit_code': exit_code, 'output': output, 'summary': summary, 'error': error}


def _usage_error(e: Exception) -> Dict[str, Any]:
    error = e.to_dict() if isinstance(e, LatticeError) else {'type': type(e).__name__, 'message': str(e)}
    return _result(False, EXIT_USAGE, error=error)


def _num(x: float) -> str:
    """Locale-free round-trip float formatting."""
    return format(float(x), '.17g')


def _dump(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + '\n'


def _int_token(extras: Dict[str, str], key: str, default: Optional[int]) -> Optional[int]:
    if key not in extras:
        return default
    raw = extras[key]
    try:
        value = float(raw)
    except ValueError:
        raise DomainError(f"{key} must be an integer: {raw!r}")
    if not value.is_integer():
        raise DomainError(f"{key} must be an integer: {raw!r}")
    return int(value)


def _order(extras: Dict[str, str], flag: Optional[int], default: int) -> int:
    order = _int_token(extras, 'n', flag if flag is not None else default)
    if order < 0:
        raise DomainError(f"order cannot be negative: {order}")
    return order


# ---------------------------------------------------------------------------
# pmf
# ---------------------------------------------------------------------------

def handle_pmf(tokens: Sequence[str], fmt: str = 'csv', order: Optional[int] = None) -> Dict[str, Any]:
    """
    pmf table of a law: rows k, p_k and a tail-mass footer.

    ``n=<order>`` in the tokens overrides the --order flag, which overrides
    LATTICE_TRUNCATION_ORDER.
    """
    try:
        law, extras = parse_law_tokens(tokens, reserved=('n',))
        N = _order(extras, order, lattice_config.truncation_order)
    except DomainError as e:
        return _usage_error(e)

    try:
        table = pmf(law, N)
    except NotAValidPMF as e:
        logger.warning("%s is not a valid pmf at order %d", law, N)
        return _result(False, EXIT_FAILURE, output=_dump({'law': str(law), 'order': N, 'error': e.to_dict()}),
                       error=e.to_dict())

    if fmt == 'json':
        output = _dump({
            'law': str(law),
            'order': N,
            'pmf': [float(p) for p in table.coeffs],
            'tail_mass': float(table.tail_bound),
        })
    else:
        lines = [f"# law: {law}", f"# order: {N}", "k,p"]
        lines.extend(f"{k},{_num(p)}" for k, p in enumerate(table.coeffs))
        lines.append(f"# tail_mass,{_num(table.tail_bound)}")
        output = '\n'.join(lines) + '\n'
    return _result(True, EXIT_OK, output=output)


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def _eval_grid(extras: Dict[str, str]) -> np.ndarray:
    if 's' in extras and 'points' in extras:
        raise DomainError("give either s=... or points=..., not both")
    if 's' in extras:
        try:
            return np.array([float(v) for v in extras['s'].split(',')], dtype=np.float64)
        except ValueError:
            raise DomainError(f"s must be a comma-separated list of numbers: {extras['s']!r}")
    points = _int_token(extras, 'points', DEFAULT_EVAL_POINTS)
    if points < 2:
        raise DomainError(f"points must be at least 2: {points}")
    return np.linspace(0.0, 1.0, points)


def handle_eval(tokens: Sequence[str], fmt: str = 'csv') -> Dict[str, Any]:
    """PGF values on s in [0, 1]: ``s=0,0.5,1`` or ``points=11`` (evenly spaced)."""
    try:
        law, extras = parse_law_tokens(tokens, reserved=('s', 'points'))
        s = _eval_grid(extras)
        values = np.atleast_1d(pgf_eval(law, s))
    except DomainError as e:
        return _usage_error(e)

    if fmt == 'json':
        output = _dump({'law': str(law), 's': s.tolist(), 'pgf': [float(v) for v in values]})
    else:
        lines = [f"# law: {law}", "s,P"]
        lines.extend(f"{_num(x)},{_num(v)}" for x, v in zip(s, values))
        output = '\n'.join(lines) + '\n'
    return _result(True, EXIT_OK, output=output)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _suite_tokens(tokens: Sequence[str], order: Optional[int]) -> List[str]:
    tokens = list(tokens)
    if order is not None and not any(t.startswith('order=') for t in tokens):
        tokens.append(f"order={order}")
    return tokens


def handle_verify(suite: str, tokens: Sequence[str] = (), fmt: str = 'json', order: Optional[int] = None,
                  workers: int = 4) -> Dict[str, Any]:
    """
    Run one suite, or ``all`` of them with their defaults.

    ``all`` runs the suites on a thread pool; the report order is fixed by
    suite name.
    """
    if suite == 'all':
        if tokens:
            return _usage_error(DomainError("verify all takes no parameters"))
        return _verify_all(fmt, order, workers)
    try:
        report = run_suite(suite, _suite_tokens(tokens, order))
    except LatticeError as e:
        error = _usage_error(e)
        if not is_known_suite(suite):
            error['error']['known_suites'] = suite_names()
        return error

    output = report.to_text() + '\n' if fmt == 'text' else _dump(report.to_dict())
    exit_code = EXIT_OK if report.passed else EXIT_FAILURE
    return _result(report.passed, exit_code, output=output,
                   summary=f"{report.suite}: {report.verdict} (residual {report.residual:.3e})")


def _verify_all(fmt: str, order: Optional[int], workers: int) -> Dict[str, Any]:
    names = suite_names()
    tokens = _suite_tokens((), order)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        reports = list(pool.map(lambda name: run_suite(name, tokens), names))
    passed = all(r.passed for r in reports)
    failed = [r.suite for r in reports if not r.passed]
    if fmt == 'text':
        output = '\n\n'.join(r.to_text() for r in reports) + '\n'
    else:
        output = _dump({
            'passed': passed,
            'verdict': 'pass' if passed else 'fail',
            'reports': [r.to_dict() for r in reports],
        })
    summary = f"{len(reports) - len(failed)}/{len(reports)} suites passed"
    if failed:
        summary += f"; failed: {', '.join(failed)}"
    return _result(passed, EXIT_OK if passed else EXIT_FAILURE, output=output, summary=summary)


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

def handle_sample(tokens: Sequence[str], fmt: str = 'csv', order: Optional[int] = None) -> Dict[str, Any]:
    """
    Draw ``count`` variates with ``seed`` and ``stream``; the summary line
    reports the total variation against the pmf series when the series is
    a valid pmf at the truncation order.
    """
    try:
        law, extras = parse_law_tokens(tokens, reserved=('count', 'seed', 'stream', 'n'))
        count = _int_token(extras, 'count', DEFAULT_SAMPLE_COUNT)
        seed = _int_token(extras, 'seed', 0)
        stream = _int_token(extras, 'stream', 0)
        if count < 1:
            raise DomainError(f"count must be positive: {count}")
        if seed < 0 or stream < 0:
            raise DomainError("seed and stream must be nonnegative")
        sampling_order = _order(extras, order, lattice_config.sampling_order)
    except DomainError as e:
        return _usage_error(e)

    try:
        draws = sample(law, RngState(seed, stream), size=count, order=sampling_order)
    except (TailTooHeavy, NotAValidPMF) as e:
        return _result(False, EXIT_FAILURE, error=e.to_dict())

    summary = None
    N = lattice_config.truncation_order
    try:
        tv = total_variation(empirical_pmf(draws, N), pmf(law, N))
        summary = f"total variation to pmf series (order {N}): {tv:.4e} over {count} draws"
    except NotAValidPMF:
        logger.info("no total-variation summary: %s has no valid pmf at order %d", law, N)

    if fmt == 'json':
        output = _dump({'law': str(law), 'seed': seed, 'stream': stream, 'count': count,
                        'samples': [int(x) for x in draws]})
    else:
        lines = [f"# law: {law}", f"# seed: {seed} stream: {stream}", "x"]
        lines.extend(str(int(x)) for x in draws)
        output = '\n'.join(lines) + '\n'
    return _result(True, EXIT_OK, output=output, summary=summary)

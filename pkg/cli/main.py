"""
lattice command line.

    lattice pmf    <family> key=value ... [n=N]
    lattice eval   <family> key=value ... [s=0,0.5,1 | points=11]
    lattice verify <suite|all> [family] [key=value ...]
    lattice sample <family> key=value ... [count=C] [seed=S] [stream=T]

Data goes to stdout (or --output); logs and summaries go to stderr.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from config.lattice_config import lattice_config
from lattice import __version__
from lattice.checks.defaults import SUITES, suite_names
from cli.commands import EXIT_USAGE, handle_eval, handle_pmf, handle_sample, handle_verify

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='lattice', description='Discrete lattice laws: pmfs, PGFs, checks, samples.')
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--log-level', default=None, help='overrides LATTICE_LOG_LEVEL')
    parser.add_argument('--output', '-o', default=None, help='write data to this file instead of stdout')
    parser.add_argument('--order', type=int, default=None,
                        help='truncation order; overrides LATTICE_TRUNCATION_ORDER (sample: LATTICE_SAMPLING_ORDER)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('pmf', help='pmf table of a law')
    p.add_argument('tokens', nargs='+', metavar='TOKEN')
    p.add_argument('--format', choices=('csv', 'json'), default='csv')

    p = sub.add_parser('eval', help='PGF values on [0, 1]')
    p.add_argument('tokens', nargs='+', metavar='TOKEN')
    p.add_argument('--format', choices=('csv', 'json'), default='csv')

    p = sub.add_parser('verify', help='run a verification suite')
    p.add_argument('suite', nargs='?', default=None)
    p.add_argument('tokens', nargs='*', metavar='TOKEN')
    p.add_argument('--format', choices=('json', 'text'), default='json')
    p.add_argument('--list', action='store_true', help='list suites and exit')
    p.add_argument('--workers', type=int, default=4, help='threads for verify all')

    p = sub.add_parser('sample', help='draw variates from a law')
    p.add_argument('tokens', nargs='+', metavar='TOKEN')
    p.add_argument('--format', choices=('csv', 'json'), default='csv')
    return parser


def _suite_listing() -> str:
    width = max(len(name) for name in SUITES)
    lines = []
    for name in suite_names():
        definition = SUITES[name]
        line = f"{name:<{width}}  {definition.description}"
        if definition.aliases:
            line += f" (also: {', '.join(definition.aliases)})"
        lines.append(line)
    return '\n'.join(lines) + '\n'


def _dispatch(args: argparse.Namespace) -> dict:
    if args.command == 'pmf':
        return handle_pmf(args.tokens, fmt=args.format, order=args.order)
    if args.command == 'eval':
        return handle_eval(args.tokens, fmt=args.format)
    if args.command == 'sample':
        return handle_sample(args.tokens, fmt=args.format, order=args.order)
    if args.list:
        return {'success': True, 'exit_code': 0, 'output': _suite_listing(), 'summary': None, 'error': None}
    if args.suite is None:
        return {'success': False, 'exit_code': EXIT_USAGE, 'output': '', 'summary': None,
                'error': {'type': 'UsageError', 'message': 'verify needs a suite name or all',
                          'known_suites': suite_names()}}
    return handle_verify(args.suite, args.tokens, fmt=args.format, order=args.order, workers=args.workers)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    lattice_config.configure_logging(args.log_level)
    is_valid, problems, warnings = lattice_config.validate_config()
    for warning in warnings:
        logger.warning(warning)
    if not is_valid:
        for problem in problems:
            logger.error(problem)
        return EXIT_USAGE
    if args.order is not None and args.order < 0:
        parser.error(f"--order cannot be negative: {args.order}")

    result = _dispatch(args)

    if result['output']:
        if args.output:
            with open(args.output, 'w', encoding='utf-8', newline='\n') as f:
                f.write(result['output'])
        else:
            sys.stdout.write(result['output'])
    if result['summary']:
        print(result['summary'], file=sys.stderr)
    if result['error']:
        print(f"error: {json.dumps(result['error'], sort_keys=True)}", file=sys.stderr)
    return result['exit_code']


if __name__ == '__main__':
    sys.exit(main())

"""
Verification suites.

Suites live in lattice.checks.suites and lattice.checks.limits; the CLI
registry is lattice.checks.defaults. Only the report type is re-exported
here so the operators can build reports without importing the suites.
"""

from lattice.checks.report import CheckReport  # noqa: F401

"""Structural maps between lattice laws."""

from lattice.operators.compounding import (  # noqa: F401
    GeometricConvention,
    geometric_compound,
    mixture_pmf_by_quadrature,
    poisson_mixture,
)
from lattice.operators.thinning import (  # noqa: F401
    as_evaluator,
    bernoulli_factorize,
    convolve_n,
    default_grid,
    dtype_equal,
    selfdecomp_quotient,
    thin,
)

"""Catalog of lattice laws, semi-stable exponents and the PGF/LT bridge."""

from lattice.laws.catalog import (  # noqa: F401
    LawFamily,
    LawSpec,
    alpha_bernoulli,
    alpha_binomial,
    alpha_poisson,
    bernoulli,
    binomial,
    convolve_law,
    degenerate_at_one,
    dml,
    dsml,
    dss,
    geometric0,
    geometric_shifted,
    parse_law_spec,
    parse_law_tokens,
    pgf_eval,
    pgf_formula,
    pgf_handle,
    pgf_of_complement,
    pmf,
    pmf_series,
    poisson,
    thin_law,
)
from lattice.laws.psi import PsiFunction, psi_eval  # noqa: F401
from lattice.laws.transforms import (  # noqa: F401
    TransformHandle,
    TransformKind,
    degenerate_lt,
    exponential_lt,
    lt_from_pgf,
    make_lt,
    make_pgf,
    mittag_leffler_lt,
    pgf_from_lt,
    point_mass_lt,
    semi_mittag_leffler_lt,
    semi_stable_lt,
    stable_lt,
)

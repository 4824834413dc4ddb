"""Random variates, thinning and geometric sums, with pmf-based diagnostics."""

from lattice.sampling.diagnostics import (  # noqa: F401
    EmpiricalPmf,
    batch_means,
    empirical_pmf,
    laplace_transform_estimate,
    majority_of_seeds,
    total_variation,
)
from lattice.sampling.samplers import (  # noqa: F401
    RngState,
    geometric_sum_sample,
    sample,
    sample_by_inverse_cdf,
    sample_positive_stable,
    thin_sample,
)

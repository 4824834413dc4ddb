from lattice.series.power_series import (  # noqa: F401
    BoundedSeries,
    TruncatedSeries,
    add,
    affine_substitute,
    binomial_series,
    eval_series,
    exp_series,
    log_cos_compose,
    log_one_minus_s,
    log_series,
    lumped_total_variation,
    mul,
    pow_int,
    reciprocal_series,
    validate_pmf,
)

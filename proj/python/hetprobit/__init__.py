"""Bayesian binary choice under median independence.

Gibbs sampler for the heteroskedastic probit form with a Matern Gaussian
process prior on the log-skedastic function, plus prediction and a Monte
Carlo study harness. The heavy lifting lives in the C++ extension `_core`.
"""

from ._core import (
    Coefficients,
    CredibleInterval,
    Dataset,
    GibbsConfig,
    KernelSpec,
    MixtureTable,
    NumericalError,
    PosteriorDraws,
    RngStream,
    StudyConfig,
    StudyRow,
    Summary,
    TruncationRegion,
    bayes_decision,
    build_summary,
    choice_prob_draws,
    choice_probability,
    effective_sample_size,
    empirical_quantile,
    generate_dgp,
    gram_matrix,
    log_likelihood,
    matern,
    matern_radial,
    mixture_cdf_sup_distance,
    posterior_predictive,
    predictive_prob_draws,
    run_chain,
    run_study,
    sample_logistic,
    sample_truncated_normal,
    std_normal_cdf,
    std_normal_logcdf,
    std_normal_quantile,
)

__version__ = "0.1.0"

__all__ = [
    "Coefficients",
    "CredibleInterval",
    "Dataset",
    "GibbsConfig",
    "KernelSpec",
    "MixtureTable",
    "NumericalError",
    "PosteriorDraws",
    "RngStream",
    "StudyConfig",
    "StudyRow",
    "Summary",
    "TruncationRegion",
    "bayes_decision",
    "build_summary",
    "choice_prob_draws",
    "choice_probability",
    "effective_sample_size",
    "empirical_quantile",
    "generate_dgp",
    "gram_matrix",
    "log_likelihood",
    "matern",
    "matern_radial",
    "mixture_cdf_sup_distance",
    "posterior_predictive",
    "predictive_prob_draws",
    "run_chain",
    "run_study",
    "sample_logistic",
    "sample_truncated_normal",
    "std_normal_cdf",
    "std_normal_logcdf",
    "std_normal_quantile",
]

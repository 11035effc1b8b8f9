"""Nonparametric varextropy estimation and uniformity testing.

Varextropy ``VJ(X) = Var[-f(X)/2]`` is the dispersion of the information
content of a random variable on the extropy scale; it is nonnegative and, on
the unit interval, zero exactly for the standard uniform law.  This package
provides five nonparametric estimators of ``VJ``, turns them (plus seven
competitor statistics) into Monte Carlo calibrated goodness-of-fit tests of
uniformity, and reproduces the bias/MSE, percentage-point and power studies
behind them with a deterministic replicate engine.
"""

from .errors import VarextropyError
from .sample import (
    Sample,
    WindowSpec,
    c_weights,
    default_window,
    empirical_cdf,
    make_sample,
    order_statistic_clamped,
    sample_std,
)
from .density import (
    DensityModel,
    GridSpec,
    QuantileDensityModel,
    default_grid,
    integrate,
    kde_at,
    loo_kde_at,
    quantile_density,
    quantile_density_model,
    silverman_bandwidth,
)
from .estimators import (
    ESTIMATOR_IDS,
    VarextropyEstimate,
    analytic_varextropy,
    estimate,
    vjb,
    vjd,
    vjd_default_bandwidth,
    vjq,
    vjs,
    vjv,
)
from .reference import (
    ReferenceDistribution,
    a_distribution,
    exponential,
    exponential_mean1,
    gamma_2_1,
    normal,
    uniform01,
)
from .uniformity import (
    COMPETITOR_KINDS,
    CriticalValueTable,
    G_KINDS,
    STAT_KINDS,
    TestOutcome,
    calibrate_critical_value,
    calibrate_table,
    competitor_statistic,
    fit_model,
    g_statistic,
    ks_statistic,
    probability_integral_transform,
    run_test,
    test_statistic,
)
from .simulation import (
    AlternativeFamily,
    StudyCell,
    StudyConfig,
    StudyReport,
    critical_value_study,
    inverse_cdf_alternative,
    mse_bias_study,
    power_study,
    rng_substream,
    run_study,
    sample_alternative,
)

__version__ = "0.1.0"

__all__ = [
    "VarextropyError",
    "Sample", "WindowSpec", "make_sample", "order_statistic_clamped",
    "empirical_cdf", "default_window", "c_weights", "sample_std",
    "DensityModel", "GridSpec", "QuantileDensityModel", "silverman_bandwidth",
    "kde_at", "loo_kde_at", "default_grid", "integrate", "quantile_density",
    "quantile_density_model",
    "VarextropyEstimate", "ESTIMATOR_IDS", "vjv", "vjd", "vjb", "vjs", "vjq",
    "estimate", "analytic_varextropy", "vjd_default_bandwidth",
    "ReferenceDistribution", "uniform01", "exponential_mean1", "exponential",
    "gamma_2_1", "normal", "a_distribution",
    "STAT_KINDS", "G_KINDS", "COMPETITOR_KINDS", "CriticalValueTable",
    "TestOutcome", "g_statistic", "ks_statistic", "competitor_statistic",
    "test_statistic", "calibrate_critical_value", "calibrate_table", "run_test",
    "probability_integral_transform", "fit_model",
    "AlternativeFamily", "StudyConfig", "StudyCell", "StudyReport",
    "inverse_cdf_alternative", "sample_alternative", "mse_bias_study",
    "power_study", "critical_value_study", "run_study", "rng_substream",
]

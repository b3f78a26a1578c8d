"""Robust two-sample tests of equal means based on the density power divergence."""

from ._core import (
    ClassicalTestResult,
    ConvergenceError,
    DpdTestResult,
    NumericError,
    TwoSampleEstimate,
    dataset_names,
    dpd_normal,
    dpd_normal_equal_sigma,
    dpd_test,
    estimate_two_sample,
    ks_test,
    lambda_scaling,
    load_dataset,
    lrt_statistic,
    pooled_t_test,
    power_approx,
    sigma_w_beta,
    simulate,
    trimmed_t_test,
    wilcoxon_test,
)

__all__ = [
    "ClassicalTestResult",
    "ConvergenceError",
    "DpdTestResult",
    "NumericError",
    "TwoSampleEstimate",
    "dataset_names",
    "dpd_normal",
    "dpd_normal_equal_sigma",
    "dpd_test",
    "estimate_two_sample",
    "ks_test",
    "lambda_scaling",
    "load_dataset",
    "lrt_statistic",
    "pooled_t_test",
    "power_approx",
    "sigma_w_beta",
    "simulate",
    "trimmed_t_test",
    "wilcoxon_test",
]

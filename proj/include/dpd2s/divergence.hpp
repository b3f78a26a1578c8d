#pragma once

#include "dpd2s/tuning.hpp"

namespace dpd2s {

/// Location and scale of a univariate normal density.
struct NormalParams {
    double mu = 0.0;
    double sigma = 1.0;

    NormalParams() = default;
    NormalParams(double mu_, double sigma_);

    friend bool operator==(const NormalParams&, const NormalParams&) = default;
};

/// Density power divergence d_gamma(f_p, f_q) between two normal densities.
///
/// `p` plays the role of the data-generating density and `q` of the model
/// density. gamma = 0 is the Kullback-Leibler divergence.
double dpd_normal_general(const NormalParams& p, const NormalParams& q, TuningGamma gamma);

/// Equal-scale special case: a function of (mu1 - mu2) / sigma and sigma^-gamma.
double dpd_normal_equal_sigma(double mu1, double mu2, double sigma, TuningGamma gamma);

/// Direct quadrature of the defining DPD integral, same argument roles as
/// dpd_normal_general. Intended as a cross-check of the closed forms; any
/// beta >= 0 is accepted.
double dpd_numeric_oracle(const NormalParams& p, const NormalParams& q, double beta);

}  // namespace dpd2s

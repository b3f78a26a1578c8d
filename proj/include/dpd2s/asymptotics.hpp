#pragma once

#include <Eigen/Core>

namespace dpd2s {

/// Limiting design of a two-sample study: w = lim n1/(n1+n2), true common
/// scale sigma0, and the estimator tuning parameter beta.
struct AsymptoticParams {
    double w = 0.5;
    double sigma0 = 1.0;
    double beta = 0.0;

    AsymptoticParams() = default;
    AsymptoticParams(double w_, double sigma0_, double beta_);
};

/// Limit of the one-sample objective's Hessian at the truth (diagonal).
Eigen::Matrix2d j_matrix(double sigma0, double beta);

/// Asymptotic covariance of sqrt(n) times the one-sample estimating equations (diagonal).
Eigen::Matrix2d k_matrix(double sigma0, double beta);

/// (beta+1)^3 (2 beta+1)^{-3/2}: variance inflation of the location MDPDE over the mean.
double mu_variance_factor(double beta);

/// Asymptotic covariance of sqrt(n1 n2/(n1+n2)) (eta_hat - eta0), eta = (mu1, mu2, sigma).
Eigen::Matrix3d sigma_w_beta(const AsymptoticParams& p);

}  // namespace dpd2s

#pragma once

#include <Eigen/Core>
#include <optional>

#include "dpd2s/sample.hpp"
#include "dpd2s/tuning.hpp"

namespace dpd2s {

/// Newton solver settings for the minimum-DPD estimators.
struct SolverConfig {
    /// Stop when the rescaled gradient (see TwoSampleEstimate::gradient_norm) drops below this.
    double tolerance = 1e-10;
    int max_iterations = 200;
    /// Lower bound for sigma; when unset, 1e-8 times the pooled ML standard deviation.
    std::optional<double> sigma_floor;
    /// Also start from (medians, 1.4826 * pooled MAD) and keep the lower objective.
    bool multistart = true;

    void validate() const;
};

/// Minimum-DPD estimate of (mu1, mu2, sigma) under a common-scale normal model.
struct TwoSampleEstimate {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double sigma = 1.0;
    double beta = 0.0;
    double objective = 0.0;  ///< objective_two_sample at the estimate
    int iterations = 0;
    bool converged = false;
    /// Infinity norm of sigma^{1+beta} (2 pi)^{beta/2} times the gradient, i.e.
    /// the estimating equations in dimensionless form.
    double gradient_norm = 0.0;
};

struct OneSampleEstimate {
    double mu = 0.0;
    double sigma = 1.0;
    double beta = 0.0;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
};

/// Empirical DPD objective for one sample: the normal-model simplification for
/// beta > 0, the negative mean log-likelihood for beta = 0.
double objective_one_sample(const Sample& s, double mu, double sigma, TuningBeta beta);

/// Size-weighted average of the two one-sample objectives sharing sigma.
double objective_two_sample(const Sample& x, const Sample& y, double mu1, double mu2, double sigma,
                            TuningBeta beta);

/// Analytic gradient of objective_two_sample with respect to (mu1, mu2, sigma).
Eigen::Vector3d objective_gradient(const Sample& x, const Sample& y, double mu1, double mu2,
                                   double sigma, TuningBeta beta);

/// Analytic Hessian of objective_two_sample with respect to (mu1, mu2, sigma).
Eigen::Matrix3d objective_hessian(const Sample& x, const Sample& y, double mu1, double mu2,
                                  double sigma, TuningBeta beta);

/// Joint estimate. beta = 0 returns the closed-form ML solution without
/// iterating; otherwise Newton's method on (mu1, mu2, log sigma). An estimate
/// that misses the tolerance is returned with converged = false.
TwoSampleEstimate estimate_two_sample(const Sample& x, const Sample& y, TuningBeta beta,
                                      const SolverConfig& cfg = {});

OneSampleEstimate estimate_one_sample(const Sample& s, TuningBeta beta,
                                      const SolverConfig& cfg = {});

/// Solves the location estimating equation of one sample with sigma held fixed.
double estimate_location_fixed_scale(const Sample& s, double sigma, TuningBeta beta,
                                     const SolverConfig& cfg = {});

/// (mean x, mean y, sqrt((SS_x + SS_y) / (n1 + n2))): the beta = 0 solution.
TwoSampleEstimate ml_two_sample(const Sample& x, const Sample& y);

}  // namespace dpd2s

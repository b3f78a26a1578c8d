#include "dpd2s/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dpd2s/errors.hpp"

namespace dpd2s {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

void check(double sigma0, double beta, const char* context) {
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
        throw DomainError(std::string(context) + ": sigma0 must be positive");
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError(std::string(context) + ": beta must be >= 0");
    }
}

}  // namespace

AsymptoticParams::AsymptoticParams(double w_, double sigma0_, double beta_)
    : w(w_), sigma0(sigma0_), beta(beta_) {
    if (!(w > 0.0 && w < 1.0)) {
        throw DomainError("AsymptoticParams: w must lie in (0, 1), got " + std::to_string(w));
    }
    check(sigma0, beta, "AsymptoticParams");
}

Eigen::Matrix2d j_matrix(double sigma0, double beta) {
    check(sigma0, beta, "j_matrix");
    // (1+b)^{-1/2} (2 pi)^{-b/2} sigma0^{-(2+b)}
    const double prefactor =
        std::exp(-0.5 * std::log1p(beta) - 0.5 * beta * kLog2Pi - (2.0 + beta) * std::log(sigma0));
    Eigen::Matrix2d j = Eigen::Matrix2d::Zero();
    j(0, 0) = prefactor / (1.0 + beta);
    j(1, 1) = prefactor * (beta * beta + 2.0) / ((1.0 + beta) * (1.0 + beta));
    return j;
}

Eigen::Matrix2d k_matrix(double sigma0, double beta) {
    check(sigma0, beta, "k_matrix");
    const double prefactor = std::exp(-(2.0 + 2.0 * beta) * std::log(sigma0) - beta * kLog2Pi);
    const double spread = std::pow(1.0 + 2.0 * beta, -1.5);
    Eigen::Matrix2d k = Eigen::Matrix2d::Zero();
    k(0, 0) = prefactor * spread;
    k(1, 1) = prefactor * (spread * (4.0 * beta * beta + 2.0) / (1.0 + 2.0 * beta) -
                           beta * beta / std::pow(1.0 + beta, 3.0));
    return k;
}

double mu_variance_factor(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("mu_variance_factor: beta must be >= 0");
    }
    return std::pow(beta + 1.0, 3.0) * std::pow(2.0 * beta + 1.0, -1.5);
}

Eigen::Matrix3d sigma_w_beta(const AsymptoticParams& p) {
    if (!(p.w > 0.0 && p.w < 1.0)) {
        throw DomainError("sigma_w_beta: w must lie in (0, 1), got " + std::to_string(p.w));
    }
    check(p.sigma0, p.beta, "sigma_w_beta");
    const double b = p.beta;
    const double s2 = p.sigma0 * p.sigma0;
    const double loc = mu_variance_factor(b);
    const double scale = std::pow(b + 1.0, 5.0) / ((b * b + 2.0) * (b * b + 2.0)) *
                         ((4.0 * b * b + 2.0) * std::pow(1.0 + 2.0 * b, -2.5) -
                          b * b / std::pow(1.0 + b, 3.0));
    Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
    sigma(0, 0) = s2 * (1.0 - p.w) * loc;
    sigma(1, 1) = s2 * p.w * loc;
    sigma(2, 2) = s2 * p.w * (1.0 - p.w) * scale;
    return sigma;
}

}  // namespace dpd2s

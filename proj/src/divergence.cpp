#include "dpd2s/divergence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "dpd2s/errors.hpp"
#include "dpd2s/quadrature.hpp"

namespace dpd2s {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

std::string describe(const NormalParams& p, const NormalParams& q, double gamma) {
    std::ostringstream s;
    s << "p=(" << p.mu << ", " << p.sigma << "), q=(" << q.mu << ", " << q.sigma
      << "), gamma=" << gamma;
    return s.str();
}

double finite_or_throw(double value, const std::string& context) {
    if (!std::isfinite(value)) {
        throw DomainError("density power divergence is not finite for " + context);
    }
    return std::max(value, 0.0);
}

// exp(hi) - exp(lo) given lo, evaluated without cancellation when hi ~ lo.
double exp_difference(double hi, double lo) {
    const double gap = hi - lo;
    if (std::abs(gap) < 0.5) return std::exp(lo) * std::expm1(gap);
    return std::exp(hi) - std::exp(lo);
}

double log_normal_density(double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return -0.5 * z * z - std::log(sigma) - 0.5 * kLog2Pi;
}

}  // namespace

NormalParams::NormalParams(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
    if (!std::isfinite(mu)) throw DomainError("normal location must be finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("normal scale must be positive and finite, got " + std::to_string(sigma));
    }
}

double dpd_normal_general(const NormalParams& p, const NormalParams& q, TuningGamma gamma) {
    const double g = gamma.value();
    const double s1 = p.sigma;
    const double s2 = q.sigma;
    const double ratio_sq = (s1 / s2) * (s1 / s2);
    const double z = (p.mu - q.mu) / s2;

    if (g == 0.0) {
        // log(s2/s1) - 1/2 + s1^2/(2 s2^2) + (mu1-mu2)^2/(2 s2^2)
        const double u = ratio_sq - 1.0;
        return finite_or_throw(0.5 * (u - std::log1p(u)) + 0.5 * z * z, describe(p, q, g));
    }

    // With A2 = int f_q^{1+g}, A1 = int f_p^{1+g}, B = int f_q^g f_p the
    // divergence is (A2 - B) + (A1 - B)/g; all three are handled as logs.
    const double spread = std::log1p(g * ratio_sq);
    const double quad = g * z * z / (2.0 * (1.0 + g * ratio_sq));
    const double log_b = -g * std::log(s2) - 0.5 * spread - 0.5 * g * kLog2Pi - quad;
    const double log_a2 = -g * std::log(s2) - 0.5 * std::log1p(g) - 0.5 * g * kLog2Pi;
    const double log_a1 = -g * std::log(s1) - 0.5 * std::log1p(g) - 0.5 * g * kLog2Pi;
    const double value = exp_difference(log_a2, log_b) + exp_difference(log_a1, log_b) / g;
    return finite_or_throw(value, describe(p, q, g));
}

double dpd_normal_equal_sigma(double mu1, double mu2, double sigma, TuningGamma gamma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("dpd_normal_equal_sigma: sigma must be positive, got " +
                          std::to_string(sigma));
    }
    const double g = gamma.value();
    const double z = (mu1 - mu2) / sigma;
    double value = 0.0;
    if (g == 0.0) {
        value = 0.5 * z * z;
    } else {
        const double scale = std::exp(-g * (std::log(sigma) + 0.5 * kLog2Pi));
        value = std::sqrt(1.0 + g) / g * scale * -std::expm1(-g * z * z / (2.0 * (g + 1.0)));
    }
    return finite_or_throw(value, describe(NormalParams{mu1, sigma}, NormalParams{mu2, sigma}, g));
}

double dpd_numeric_oracle(const NormalParams& p, const NormalParams& q, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("dpd_numeric_oracle: beta must be >= 0");
    }
    // g: data density (p), f: model density (q).
    auto integrand = [&](double x) {
        const double lg = log_normal_density(x, p.mu, p.sigma);
        const double lf = log_normal_density(x, q.mu, q.sigma);
        const double g = std::exp(lg);
        if (beta == 0.0) return g == 0.0 ? 0.0 : g * (lg - lf);
        // f^{1+b} - (1 + 1/b) f^b g + g^{1+b}/b  ==  f^b (f - g) + g (g^b - f^b) / b
        const double fb = std::exp(beta * lf);
        const double f = std::exp(lf);
        return fb * (f - g) + g * exp_difference(beta * lg, beta * lf) / beta;
    };

    const double max_sigma = std::max(p.sigma, q.sigma);
    const double lo = std::min(p.mu, q.mu) - 12.0 * max_sigma;
    const double hi = std::max(p.mu, q.mu) + 12.0 * max_sigma;
    std::vector<double> cuts;
    for (const NormalParams* d : {&p, &q}) {
        for (double k : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) {
            cuts.push_back(d->mu + k * d->sigma);
        }
    }
    QuadratureOptions opts;
    opts.abs_tolerance = 1e-10;
    opts.rel_tolerance = 1e-13;
    return integrate_adaptive(integrand, lo, hi, cuts, opts).value;
}

}  // namespace dpd2s

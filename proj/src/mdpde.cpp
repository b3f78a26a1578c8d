#include "dpd2s/mdpde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "dpd2s/errors.hpp"

namespace dpd2s {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);
constexpr double kMadToSigma = 1.4826;

// Weighted moments (1/n) sum e_i z_i^k with e_i = exp(-beta z_i^2 / 2).
struct Moments {
    double m0 = 0, m1 = 0, m2 = 0, m3 = 0, m4 = 0;
};

Moments moments(std::span<const double> v, double mu, double sigma, double beta) {
    Moments m;
    for (double x : v) {
        const double z = (x - mu) / sigma;
        const double z2 = z * z;
        const double e = beta == 0.0 ? 1.0 : std::exp(-0.5 * beta * z2);
        m.m0 += e;
        m.m1 += e * z;
        m.m2 += e * z2;
        m.m3 += e * z2 * z;
        m.m4 += e * z2 * z2;
    }
    const double n = static_cast<double>(v.size());
    m.m0 /= n;
    m.m1 /= n;
    m.m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    return m;
}

// Common-scale normal model over K groups; parameters (mu_1..mu_K, sigma).
class GroupModel {
public:
    GroupModel(std::vector<std::span<const double>> groups, double beta)
        : groups_(std::move(groups)), beta_(beta), a_(std::pow(1.0 + beta, -1.5)) {
        double total = 0.0;
        for (auto g : groups_) total += static_cast<double>(g.size());
        for (auto g : groups_) weights_.push_back(static_cast<double>(g.size()) / total);
    }

    std::size_t groups() const { return groups_.size(); }
    double beta() const { return beta_; }

    // sigma^-beta (2 pi)^-beta/2
    double scale_factor(double sigma) const {
        return beta_ == 0.0 ? 1.0 : std::exp(-beta_ * (std::log(sigma) + 0.5 * kLog2Pi));
    }

    double value(std::span<const double> mu, double sigma) const {
        if (beta_ == 0.0) {
            double quad = 0.0;
            for (std::size_t k = 0; k < groups(); ++k) {
                quad += weights_[k] * moments(groups_[k], mu[k], sigma, 0.0).m2;
            }
            return std::log(sigma) + 0.5 * kLog2Pi + 0.5 * quad;
        }
        double kernel = 0.0;
        for (std::size_t k = 0; k < groups(); ++k) {
            kernel += weights_[k] * moments(groups_[k], mu[k], sigma, beta_).m0;
        }
        return scale_factor(sigma) * (a_ - kernel / beta_);
    }

    struct Derivatives {
        std::vector<double> grad;                // d/dmu_k then d/dsigma
        std::vector<double> hess_diag;           // d2/dmu_k^2
        std::vector<double> hess_cross;          // d2/dmu_k dsigma
        double hess_sigma = 0.0;                 // d2/dsigma^2
        double scaled_norm = 0.0;                // see TwoSampleEstimate::gradient_norm
    };

    Derivatives derivatives(std::span<const double> mu, double sigma) const {
        const double b = beta_;
        const double c = scale_factor(sigma);
        Derivatives d;
        double sigma_eq = -b * a_;
        double sigma_curv = b * (b + 1.0) * a_;
        for (std::size_t k = 0; k < groups(); ++k) {
            const Moments m = moments(groups_[k], mu[k], sigma, b);
            const double w = weights_[k];
            d.grad.push_back(-w * c / sigma * m.m1);
            d.hess_diag.push_back(w * c / (sigma * sigma) * (m.m0 - b * m.m2));
            d.hess_cross.push_back(w * c / (sigma * sigma) * ((b + 2.0) * m.m1 - b * m.m3));
            d.scaled_norm = std::max(d.scaled_norm, std::abs(w * m.m1));
            sigma_eq += w * (m.m0 - m.m2);
            sigma_curv += w * (-(b + 1.0) * m.m0 + (2.0 * b + 3.0) * m.m2 - b * m.m4);
        }
        d.grad.push_back(c / sigma * sigma_eq);
        d.hess_sigma = c / (sigma * sigma) * sigma_curv;
        d.scaled_norm = std::max(d.scaled_norm, std::abs(sigma_eq));
        return d;
    }

private:
    std::vector<std::span<const double>> groups_;
    std::vector<double> weights_;
    double beta_;
    double a_;
};

struct NewtonResult {
    std::vector<double> mu;
    double sigma = 1.0;
    double objective = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Newton's method on (mu, log sigma) with Marquardt damping and step halving.
NewtonResult newton(const GroupModel& model, std::vector<double> mu, double sigma,
                    const SolverConfig& cfg, double sigma_floor, bool fix_scale) {
    const std::size_t k_groups = model.groups();
    const double eps = std::numeric_limits<double>::epsilon();
    sigma = std::max(sigma, sigma_floor);
    double f = model.value(mu, sigma);

    NewtonResult out;
    int iter = 0;
    for (;; ++iter) {
        const auto d = model.derivatives(mu, sigma);
        const double norm = fix_scale ? [&] {
            double n = 0.0;
            for (std::size_t k = 0; k < k_groups; ++k) {
                n = std::max(n, std::abs(d.grad[k]) * sigma / model.scale_factor(sigma));
            }
            return n;
        }() : d.scaled_norm;
        out.gradient_norm = norm;
        if (norm < cfg.tolerance) {
            out.converged = true;
            break;
        }
        if (iter >= cfg.max_iterations) break;

        // Derivatives in tau = log sigma.
        const double g_tau = sigma * d.grad[k_groups];
        const double h_tau = sigma * sigma * d.hess_sigma + g_tau;
        std::vector<double> h_cross(k_groups);
        for (std::size_t k = 0; k < k_groups; ++k) h_cross[k] = sigma * d.hess_cross[k];

        const double unit_mu = model.scale_factor(sigma) / (sigma * sigma);
        const double unit_tau = model.scale_factor(sigma);
        std::vector<double> step(k_groups);
        double step_tau = 0.0;
        bool accepted = false;
        double lambda = 0.0;
        for (int attempt = 0; attempt < 16 && !accepted; ++attempt) {
            if (attempt > 0) lambda = lambda == 0.0 ? 1e-4 : lambda * 10.0;
            // Arrow-structured system: mu_k couple only through tau.
            bool ok = true;
            std::vector<double> diag(k_groups);
            for (std::size_t k = 0; k < k_groups; ++k) {
                const double scale = std::max(std::abs(d.hess_diag[k]), 1e-8 * unit_mu);
                diag[k] = d.hess_diag[k] + lambda * scale;
                ok = ok && diag[k] > 0.0;
            }
            if (!ok) continue;
            if (fix_scale) {
                step_tau = 0.0;
                for (std::size_t k = 0; k < k_groups; ++k) step[k] = -d.grad[k] / diag[k];
            } else {
                const double tau_scale = std::max(std::abs(h_tau), 1e-8 * unit_tau);
                double schur = h_tau + lambda * tau_scale;
                double rhs = -g_tau;
                for (std::size_t k = 0; k < k_groups; ++k) {
                    schur -= h_cross[k] * h_cross[k] / diag[k];
                    rhs += h_cross[k] * d.grad[k] / diag[k];
                }
                if (!(schur > 0.0)) continue;
                step_tau = rhs / schur;
                for (std::size_t k = 0; k < k_groups; ++k) {
                    step[k] = (-d.grad[k] - h_cross[k] * step_tau) / diag[k];
                }
            }
            // Cap wild steps: at most a factor e in sigma, 5 sigma in location.
            double cap = 1.0;
            if (std::abs(step_tau) > 1.0) cap = 1.0 / std::abs(step_tau);
            for (std::size_t k = 0; k < k_groups; ++k) {
                if (std::abs(step[k]) > 5.0 * sigma) cap = std::min(cap, 5.0 * sigma / std::abs(step[k]));
            }
            double slope = g_tau * step_tau;
            for (std::size_t k = 0; k < k_groups; ++k) {
                step[k] *= cap;
                slope += d.grad[k] * step[k];
            }
            step_tau *= cap;
            if (!(slope < 0.0)) continue;

            double t = 1.0;
            for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
                std::vector<double> trial_mu(k_groups);
                for (std::size_t k = 0; k < k_groups; ++k) trial_mu[k] = mu[k] + t * step[k];
                const double trial_sigma =
                    std::max(sigma * std::exp(t * step_tau), sigma_floor);
                const double trial_f = model.value(trial_mu, trial_sigma);
                if (std::isfinite(trial_f) &&
                    trial_f <= f + 1e-4 * t * slope + 8.0 * eps * std::abs(f)) {
                    mu = std::move(trial_mu);
                    sigma = trial_sigma;
                    f = trial_f;
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) break;
    }
    out.mu = std::move(mu);
    out.sigma = sigma;
    out.objective = f;
    out.iterations = iter;
    return out;
}

double pooled_mad(const Sample& x, const Sample* y) {
    std::vector<double> dev;
    const double mx = x.median();
    for (double v : x.values()) dev.push_back(std::abs(v - mx));
    if (y) {
        const double my = y->median();
        for (double v : y->values()) dev.push_back(std::abs(v - my));
    }
    return median_of(std::move(dev));
}

bool better(const NewtonResult& candidate, const NewtonResult& incumbent) {
    if (candidate.converged != incumbent.converged) return candidate.converged;
    return candidate.objective < incumbent.objective;
}

void require_positive_sigma(double sigma, const char* context) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError(std::string(context) + ": sigma must be positive, got " +
                          std::to_string(sigma));
    }
}

}  // namespace

void SolverConfig::validate() const {
    if (!(tolerance > 0.0)) throw DomainError("SolverConfig: tolerance must be positive");
    if (max_iterations < 1) throw DomainError("SolverConfig: max_iterations must be >= 1");
    if (sigma_floor && !(*sigma_floor > 0.0)) {
        throw DomainError("SolverConfig: sigma_floor must be positive when given");
    }
}

double objective_one_sample(const Sample& s, double mu, double sigma, TuningBeta beta) {
    require_positive_sigma(sigma, "objective_one_sample");
    const GroupModel model({s.values()}, beta.value());
    const double m[1] = {mu};
    return model.value(m, sigma);
}

double objective_two_sample(const Sample& x, const Sample& y, double mu1, double mu2, double sigma,
                            TuningBeta beta) {
    require_positive_sigma(sigma, "objective_two_sample");
    const GroupModel model({x.values(), y.values()}, beta.value());
    const double m[2] = {mu1, mu2};
    return model.value(m, sigma);
}

Eigen::Vector3d objective_gradient(const Sample& x, const Sample& y, double mu1, double mu2,
                                   double sigma, TuningBeta beta) {
    require_positive_sigma(sigma, "objective_gradient");
    const GroupModel model({x.values(), y.values()}, beta.value());
    const double m[2] = {mu1, mu2};
    const auto d = model.derivatives(m, sigma);
    return {d.grad[0], d.grad[1], d.grad[2]};
}

Eigen::Matrix3d objective_hessian(const Sample& x, const Sample& y, double mu1, double mu2,
                                  double sigma, TuningBeta beta) {
    require_positive_sigma(sigma, "objective_hessian");
    const GroupModel model({x.values(), y.values()}, beta.value());
    const double m[2] = {mu1, mu2};
    const auto d = model.derivatives(m, sigma);
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    h(0, 0) = d.hess_diag[0];
    h(1, 1) = d.hess_diag[1];
    h(0, 2) = h(2, 0) = d.hess_cross[0];
    h(1, 2) = h(2, 1) = d.hess_cross[1];
    h(2, 2) = d.hess_sigma;
    return h;
}

TwoSampleEstimate ml_two_sample(const Sample& x, const Sample& y) {
    x.require_spread("estimate_two_sample");
    y.require_spread("estimate_two_sample");
    TwoSampleEstimate est;
    est.mu1 = x.mean();
    est.mu2 = y.mean();
    est.sigma = std::sqrt((x.sum_sq_dev() + y.sum_sq_dev()) /
                          static_cast<double>(x.size() + y.size()));
    est.beta = 0.0;
    est.converged = true;
    est.iterations = 0;
    return est;
}

TwoSampleEstimate estimate_two_sample(const Sample& x, const Sample& y, TuningBeta beta,
                                      const SolverConfig& cfg) {
    cfg.validate();
    TwoSampleEstimate ml = ml_two_sample(x, y);
    const GroupModel model({x.values(), y.values()}, beta.value());

    if (beta.is_zero()) {
        const double m[2] = {ml.mu1, ml.mu2};
        ml.objective = model.value(m, ml.sigma);
        ml.gradient_norm = model.derivatives(m, ml.sigma).scaled_norm;
        return ml;
    }

    const double floor = cfg.sigma_floor.value_or(1e-8 * ml.sigma);
    NewtonResult best = newton(model, {ml.mu1, ml.mu2}, ml.sigma, cfg, floor, false);
    if (cfg.multistart) {
        double robust_sigma = kMadToSigma * pooled_mad(x, &y);
        if (!(robust_sigma > 0.0)) robust_sigma = ml.sigma;
        NewtonResult alt = newton(model, {x.median(), y.median()}, robust_sigma, cfg, floor, false);
        if (better(alt, best)) best = std::move(alt);
    }

    TwoSampleEstimate est;
    est.mu1 = best.mu[0];
    est.mu2 = best.mu[1];
    est.sigma = best.sigma;
    est.beta = beta.value();
    est.objective = best.objective;
    est.iterations = best.iterations;
    est.converged = best.converged;
    est.gradient_norm = best.gradient_norm;
    return est;
}

OneSampleEstimate estimate_one_sample(const Sample& s, TuningBeta beta, const SolverConfig& cfg) {
    cfg.validate();
    s.require_spread("estimate_one_sample");
    const GroupModel model({s.values()}, beta.value());
    const double mean = s.mean();
    const double ml_sigma = std::sqrt(s.sum_sq_dev() / static_cast<double>(s.size()));

    OneSampleEstimate est;
    est.beta = beta.value();
    if (beta.is_zero()) {
        const double m[1] = {mean};
        est.mu = mean;
        est.sigma = ml_sigma;
        est.objective = model.value(m, ml_sigma);
        est.gradient_norm = model.derivatives(m, ml_sigma).scaled_norm;
        est.converged = true;
        return est;
    }

    const double floor = cfg.sigma_floor.value_or(1e-8 * ml_sigma);
    NewtonResult best = newton(model, {mean}, ml_sigma, cfg, floor, false);
    if (cfg.multistart) {
        double robust_sigma = kMadToSigma * pooled_mad(s, nullptr);
        if (!(robust_sigma > 0.0)) robust_sigma = ml_sigma;
        NewtonResult alt = newton(model, {s.median()}, robust_sigma, cfg, floor, false);
        if (better(alt, best)) best = std::move(alt);
    }
    est.mu = best.mu[0];
    est.sigma = best.sigma;
    est.objective = best.objective;
    est.iterations = best.iterations;
    est.converged = best.converged;
    est.gradient_norm = best.gradient_norm;
    return est;
}

double estimate_location_fixed_scale(const Sample& s, double sigma, TuningBeta beta,
                                     const SolverConfig& cfg) {
    cfg.validate();
    require_positive_sigma(sigma, "estimate_location_fixed_scale");
    const GroupModel model({s.values()}, beta.value());
    if (beta.is_zero()) return s.mean();
    NewtonResult best = newton(model, {s.mean()}, sigma, cfg, sigma, true);
    if (cfg.multistart) {
        NewtonResult alt = newton(model, {s.median()}, sigma, cfg, sigma, true);
        if (better(alt, best)) best = std::move(alt);
    }
    if (!best.converged) {
        throw ConvergenceError("estimate_location_fixed_scale did not converge");
    }
    return best.mu[0];
}

}  // namespace dpd2s

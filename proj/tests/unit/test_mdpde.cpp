#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "dpd2s/asymptotics.hpp"
#include "dpd2s/errors.hpp"
#include "dpd2s/mdpde.hpp"
#include "dpd2s/quadrature.hpp"
#include "helpers.hpp"

using namespace dpd2s;
using testing_helpers::central_diff4;
using testing_helpers::normal_sample;
using testing_helpers::rel_err;

namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double normal_pdf(double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// Generic definition: (1/(1+b)) [ int f^{1+b} - (1 + 1/b) mean f^b(X_i) ], by quadrature.
double objective_oracle(const Sample& s, double mu, double sigma, double beta) {
    const auto integral = integrate_adaptive(
        [&](double x) { return std::pow(normal_pdf(x, mu, sigma), 1.0 + beta); }, mu - 15 * sigma,
        mu + 15 * sigma, std::vector<double>{mu}, QuadratureOptions{1e-13, 1e-14, 4000});
    double mean_fb = 0.0;
    for (double x : s.values()) mean_fb += std::pow(normal_pdf(x, mu, sigma), beta);
    mean_fb /= static_cast<double>(s.size());
    return (integral.value - (1.0 + 1.0 / beta) * mean_fb) / (1.0 + beta);
}

}  // namespace

TEST(Objective, OneSampleLogLikelihoodBranch) {
    const Sample s({-1.0, 1.0});
    EXPECT_NEAR(objective_one_sample(s, 0.0, 1.0, TuningBeta(0.0)), kHalfLog2Pi + 0.5, 1e-14);
    EXPECT_NEAR(objective_one_sample(s, 0.0, 1.0, TuningBeta(0.0)), 1.418939, 1e-6);
}

TEST(Objective, OneSampleBetaOne) {
    const Sample s({-1.0, 1.0});
    // (2 pi)^{-1/2} (2^{-3/2} - e^{-1/2})
    const double hand = (std::pow(2.0, -1.5) - std::exp(-0.5)) / std::sqrt(2.0 * std::numbers::pi);
    EXPECT_NEAR(objective_one_sample(s, 0.0, 1.0, TuningBeta(1.0)), hand, 1e-15);
    EXPECT_NEAR(objective_one_sample(s, 0.0, 1.0, TuningBeta(1.0)), -0.1009233286, 1e-10);
}

TEST(Objective, MatchesDefinitionByQuadrature) {
    std::mt19937_64 gen(3);
    const Sample s = normal_sample(gen, 17, 1.0, 2.0);
    for (double beta : {0.05, 0.3, 0.7, 1.0}) {
        for (auto [mu, sigma] : {std::pair{0.0, 1.0}, std::pair{1.3, 2.2}, std::pair{-2.0, 0.4}}) {
            EXPECT_NEAR(objective_one_sample(s, mu, sigma, TuningBeta(beta)),
                        objective_oracle(s, mu, sigma, beta), 1e-11)
                << "beta=" << beta << " mu=" << mu << " sigma=" << sigma;
        }
    }
}

TEST(Objective, DecreasesTowardMinimizer) {
    std::mt19937_64 gen(4);
    const Sample s = normal_sample(gen, 30, 0.0, 1.0);
    const auto est = estimate_one_sample(s, TuningBeta(0.2));
    double prev = objective_one_sample(s, est.mu + 1.0, est.sigma, TuningBeta(0.2));
    for (double off : {0.75, 0.5, 0.25, 0.0}) {
        const double cur = objective_one_sample(s, est.mu + off, est.sigma, TuningBeta(0.2));
        EXPECT_LT(cur, prev);
        prev = cur;
    }
}

TEST(Objective, TwoSampleExamples) {
    const Sample x({0.0, 2.0});
    const Sample y({1.0, 3.0});
    EXPECT_NEAR(objective_two_sample(x, y, 1.0, 2.0, 1.0, TuningBeta(0.0)), kHalfLog2Pi + 0.5, 1e-14);

    std::mt19937_64 gen(8);
    const Sample z = normal_sample(gen, 12, 0.5, 1.5);
    for (double beta : {0.0, 0.4, 1.0}) {
        EXPECT_NEAR(objective_two_sample(z, z, 0.3, 0.3, 1.2, TuningBeta(beta)),
                    objective_one_sample(z, 0.3, 1.2, TuningBeta(beta)), 1e-14);
    }
}

TEST(Objective, TwoSampleIsSizeWeightedAverage) {
    std::mt19937_64 gen(9);
    const Sample x = normal_sample(gen, 7, 0.0, 1.0);
    const Sample y = normal_sample(gen, 19, 1.0, 1.0);
    for (double beta : {0.0, 0.25, 1.0}) {
        const TuningBeta b(beta);
        const double expected =
            (7.0 * objective_one_sample(x, 0.1, 1.3, b) + 19.0 * objective_one_sample(y, 0.9, 1.3, b)) / 26.0;
        EXPECT_NEAR(objective_two_sample(x, y, 0.1, 0.9, 1.3, b), expected, 1e-14);
    }
}

TEST(Objective, MaximumLikelihoodExpandedForm) {
    std::mt19937_64 gen(10);
    const Sample x = normal_sample(gen, 9, 0.0, 1.0);
    const Sample y = normal_sample(gen, 14, 2.0, 1.0);
    const auto ml = ml_two_sample(x, y);
    // At (x bar, y bar, sigma0): log sqrt(2 pi) + log sigma0 + 1/2.
    EXPECT_NEAR(objective_two_sample(x, y, ml.mu1, ml.mu2, ml.sigma, TuningBeta(0.0)),
                kHalfLog2Pi + std::log(ml.sigma) + 0.5, 1e-14);
    const auto g = objective_gradient(x, y, ml.mu1, ml.mu2, ml.sigma, TuningBeta(0.0));
    EXPECT_LT(g.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Objective, GradientMatchesFiniteDifferences) {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    std::uniform_real_distribution<double> log_sigma(std::log(0.5), std::log(2.0));
    const Sample x = normal_sample(gen, 15, 0.0, 1.0);
    const Sample y = normal_sample(gen, 11, 1.0, 1.0);
    for (double beta : {0.0, 0.1, 0.5, 1.0}) {
        const TuningBeta b(beta);
        for (int trial = 0; trial < 10; ++trial) {
            const double m1 = shift(gen);
            const double m2 = 1.0 + shift(gen);
            const double s = std::exp(log_sigma(gen));
            const auto g = objective_gradient(x, y, m1, m2, s, b);
            const double h = 1e-3;
            const Eigen::Vector3d fd(
                central_diff4([&](double v) { return objective_two_sample(x, y, v, m2, s, b); }, m1, h),
                central_diff4([&](double v) { return objective_two_sample(x, y, m1, v, s, b); }, m2, h),
                central_diff4([&](double v) { return objective_two_sample(x, y, m1, m2, v, b); }, s, h * s));
            EXPECT_LT((g - fd).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff(), 1e-5)
                << "beta=" << beta << "\n" << g.transpose() << "\n" << fd.transpose();
        }
    }
}

TEST(Objective, HessianMatchesFiniteDifferencesOfGradient) {
    std::mt19937_64 gen(13);
    const Sample x = normal_sample(gen, 15, 0.0, 1.0);
    const Sample y = normal_sample(gen, 11, 1.0, 1.0);
    for (double beta : {0.0, 0.2, 0.8}) {
        const TuningBeta b(beta);
        const double m1 = 0.2;
        const double m2 = 0.7;
        const double s = 1.1;
        const Eigen::Matrix3d hess = objective_hessian(x, y, m1, m2, s, b);
        EXPECT_LT((hess - hess.transpose()).cwiseAbs().maxCoeff(), 1e-14);
        Eigen::Matrix3d fd;
        const double h = 1e-3;
        for (int j = 0; j < 3; ++j) {
            auto grad_at = [&](double v) {
                double p[3] = {m1, m2, s};
                p[j] = v;
                return objective_gradient(x, y, p[0], p[1], p[2], b);
            };
            const double base = j == 0 ? m1 : (j == 1 ? m2 : s);
            fd.col(j) = (-grad_at(base + 2 * h) + 8 * grad_at(base + h) - 8 * grad_at(base - h) +
                         grad_at(base - 2 * h)) /
                        (12.0 * h);
        }
        EXPECT_LT((hess - fd).cwiseAbs().maxCoeff() / hess.cwiseAbs().maxCoeff(), 1e-5) << "beta=" << beta;
    }
}

TEST(Objective, RejectsNonPositiveSigma) {
    const Sample s({1.0, 2.0});
    EXPECT_THROW(objective_one_sample(s, 0.0, 0.0, TuningBeta(0.5)), DomainError);
    EXPECT_THROW(objective_two_sample(s, s, 0.0, 0.0, -1.0, TuningBeta(0.0)), DomainError);
    EXPECT_THROW(objective_gradient(s, s, 0.0, 0.0, 0.0, TuningBeta(0.2)), DomainError);
}

TEST(Estimator, MaximumLikelihoodClosedForm) {
    const auto e = estimate_two_sample(Sample({1, 2, 3}), Sample({2, 4, 6}), TuningBeta(0.0));
    EXPECT_DOUBLE_EQ(e.mu1, 2.0);
    EXPECT_DOUBLE_EQ(e.mu2, 4.0);
    EXPECT_NEAR(e.sigma, std::sqrt(5.0 / 3.0), 1e-15);
    EXPECT_EQ(e.iterations, 0);
    EXPECT_TRUE(e.converged);
}

TEST(Estimator, MaximumLikelihoodMatchesSampleMoments) {
    std::mt19937_64 gen(14);
    const Sample x = normal_sample(gen, 23, 3.0, 2.0);
    const Sample y = normal_sample(gen, 31, -1.0, 2.0);
    const auto e = estimate_two_sample(x, y, TuningBeta(0.0));
    EXPECT_EQ(e.mu1, x.mean());
    EXPECT_EQ(e.mu2, y.mean());
    EXPECT_LT(rel_err(e.sigma, std::sqrt((x.sum_sq_dev() + y.sum_sq_dev()) / 54.0)), 1e-15);
}

TEST(Estimator, SymmetricDataGiveZeroLocations) {
    for (double a : {0.5, 1.0, 7.0}) {
        for (double beta : {0.0, 0.3, 1.0}) {
            const auto e = estimate_two_sample(Sample({-a, a}), Sample({-a, a}), TuningBeta(beta));
            ASSERT_TRUE(e.converged);
            EXPECT_NEAR(e.mu1, 0.0, 1e-12 * a);
            EXPECT_NEAR(e.mu2, 0.0, 1e-12 * a);
        }
    }
}

TEST(Estimator, ConvergedEstimateSatisfiesFirstOrderCondition) {
    std::mt19937_64 gen(15);
    for (double beta : {0.05, 0.25, 0.5, 1.0}) {
        const Sample x = normal_sample(gen, 40, 0.0, 1.0);
        const Sample y = normal_sample(gen, 25, 0.8, 1.0);
        SolverConfig cfg;
        const auto e = estimate_two_sample(x, y, TuningBeta(beta), cfg);
        ASSERT_TRUE(e.converged);
        EXPECT_LT(e.gradient_norm, cfg.tolerance);
        const auto g = objective_gradient(x, y, e.mu1, e.mu2, e.sigma, TuningBeta(beta));
        EXPECT_LT(g.cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_NEAR(e.objective, objective_two_sample(x, y, e.mu1, e.mu2, e.sigma, TuningBeta(beta)), 1e-15);
        // Local minimum: the Hessian is positive definite there.
        const Eigen::Matrix3d hess = objective_hessian(x, y, e.mu1, e.mu2, e.sigma, TuningBeta(beta));
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(hess).eigenvalues().minCoeff(), 0.0);
    }
}

TEST(Estimator, NotWorseThanDenseGrid) {
    // For fixed sigma the objective separates into a term in mu1 and a term in
    // mu2, so the 200^3 grid minimum is found by two 1-D scans per sigma.
    std::mt19937_64 gen(16);
    constexpr int kGrid = 200;
    for (double beta : {0.1, 0.3, 0.5, 1.0}) {
        const Sample x = normal_sample(gen, 15, 0.0, 1.0);
        const Sample y = normal_sample(gen, 15, 1.0, 1.0);
        const TuningBeta b(beta);
        const auto e = estimate_two_sample(x, y, b);
        ASSERT_TRUE(e.converged);
        const double wx = 15.0 / 30.0;
        const double sd = std::sqrt((x.sum_sq_dev() + y.sum_sq_dev()) / 30.0);
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < kGrid; ++k) {
            const double s = sd * std::exp(std::log(0.05) + (std::log(3.0) - std::log(0.05)) * k / (kGrid - 1));
            double best_x = std::numeric_limits<double>::infinity();
            double best_y = std::numeric_limits<double>::infinity();
            for (int i = 0; i < kGrid; ++i) {
                const double mx = x.min() + (x.max() - x.min()) * i / (kGrid - 1);
                const double my = y.min() + (y.max() - y.min()) * i / (kGrid - 1);
                best_x = std::min(best_x, objective_one_sample(x, mx, s, b));
                best_y = std::min(best_y, objective_one_sample(y, my, s, b));
            }
            best = std::min(best, wx * best_x + (1.0 - wx) * best_y);
        }
        EXPECT_LE(e.objective, best + 1e-8) << "beta=" << beta;
    }
}

TEST(Estimator, AffineEquivariance) {
    std::mt19937_64 gen(17);
    const Sample x = normal_sample(gen, 30, 0.0, 1.0);
    const Sample y = normal_sample(gen, 20, 0.5, 1.0);
    for (double beta : {0.0, 0.2, 0.6}) {
        const auto e = estimate_two_sample(x, y, TuningBeta(beta));
        for (auto [a, c] : {std::pair{2.5, -3.0}, std::pair{0.01, 100.0}, std::pair{40.0, 0.0}}) {
            std::vector<double> xs(x.values().begin(), x.values().end());
            std::vector<double> ys(y.values().begin(), y.values().end());
            for (double& v : xs) v = a * v + c;
            for (double& v : ys) v = a * v + c;
            const auto t = estimate_two_sample(Sample(xs), Sample(ys), TuningBeta(beta));
            ASSERT_TRUE(t.converged);
            EXPECT_NEAR(t.mu1, a * e.mu1 + c, 1e-8 * a * e.sigma);
            EXPECT_NEAR(t.mu2, a * e.mu2 + c, 1e-8 * a * e.sigma);
            EXPECT_LT(rel_err(t.sigma, a * e.sigma), 1e-8);
        }
    }
}

TEST(Estimator, LocationEquationDecouplesAtFixedScale) {
    std::mt19937_64 gen(18);
    const Sample x = normal_sample(gen, 25, 0.0, 1.0);
    const Sample y = normal_sample(gen, 25, 1.0, 1.0);
    const Sample y_changed = normal_sample(gen, 25, 5.0, 3.0);
    for (double beta : {0.1, 0.5}) {
        const TuningBeta b(beta);
        const auto e = estimate_two_sample(x, y, b);
        ASSERT_TRUE(e.converged);
        // The mu1 equation uses only x: solving it alone at sigma_hat recovers mu1_hat.
        EXPECT_NEAR(estimate_location_fixed_scale(x, e.sigma, b), e.mu1, 1e-9);
        // Replacing y (same size) leaves the mu1 component of the gradient untouched.
        EXPECT_EQ(objective_gradient(x, y, e.mu1, e.mu2, e.sigma, b)[0],
                  objective_gradient(x, y_changed, e.mu1, 7.0, e.sigma, b)[0]);
    }
}

TEST(Estimator, OneSampleCases) {
    const Sample s({1.0, 2.0, 4.0, 7.0});
    const auto ml = estimate_one_sample(s, TuningBeta(0.0));
    EXPECT_DOUBLE_EQ(ml.mu, 3.5);
    EXPECT_NEAR(ml.sigma, std::sqrt(s.sum_sq_dev() / 4.0), 1e-15);
    for (double beta : {0.0, 0.4, 1.0}) {
        EXPECT_NEAR(estimate_one_sample(Sample({-1.0, 0.0, 1.0}), TuningBeta(beta)).mu, 0.0, 1e-12);
    }
}

TEST(Estimator, OneSampleRobustToGrossOutlier) {
    const Sample s({0.1, -0.2, 0.05, 0.3, -0.15, 0.0, 0.22, -0.05, 0.12, -0.3, 50.0});
    const double bulk_median = 0.05;
    const auto ml = estimate_one_sample(s, TuningBeta(0.0));
    const auto robust = estimate_one_sample(s, TuningBeta(0.5));
    ASSERT_TRUE(robust.converged);
    EXPECT_LT(std::abs(robust.mu - bulk_median), std::abs(ml.mu - bulk_median));
    EXPECT_LT(std::abs(robust.mu - bulk_median), 0.1);
    // Grid oracle over mu at the estimated scale.
    double best_mu = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 20000; ++i) {
        const double mu = -1.0 + 2.0 * i / 20000.0;
        const double v = objective_one_sample(s, mu, robust.sigma, TuningBeta(0.5));
        if (v < best) {
            best = v;
            best_mu = mu;
        }
    }
    EXPECT_NEAR(robust.mu, best_mu, 2e-4);
}

TEST(Estimator, MultistartPrefersLowerObjective) {
    std::vector<double> xs{-0.5, 0.2, 0.1, -0.3, 0.4, 0.0, -0.1, 0.3, -0.2, 0.15};
    std::vector<double> ys{1.1, 0.9, 1.3, 0.8, 1.0, 1.2, 0.7, 1.05};
    for (int i = 0; i < 4; ++i) ys.push_back(40.0 + i);
    const Sample x(xs);
    const Sample y(ys);
    SolverConfig single;
    single.multistart = false;
    for (double beta : {0.5, 1.0}) {
        const auto multi = estimate_two_sample(x, y, TuningBeta(beta));
        const auto one = estimate_two_sample(x, y, TuningBeta(beta), single);
        ASSERT_TRUE(multi.converged);
        EXPECT_LE(multi.objective, one.objective + 1e-15);
        EXPECT_NEAR(multi.mu2, 1.0, 0.3) << "beta=" << beta;
    }
}

TEST(Estimator, ReportsNonConvergence) {
    std::mt19937_64 gen(19);
    const Sample x = normal_sample(gen, 20, 0.0, 1.0);
    const Sample y = normal_sample(gen, 20, 0.0, 1.0);
    SolverConfig cfg;
    cfg.max_iterations = 1;
    cfg.tolerance = 1e-300;
    const auto e = estimate_two_sample(x, y, TuningBeta(0.5), cfg);
    EXPECT_FALSE(e.converged);
    EXPECT_GE(e.gradient_norm, cfg.tolerance);
}

TEST(Estimator, DomainErrors) {
    EXPECT_THROW(estimate_two_sample(Sample({1.0, 1.0}), Sample({1.0, 1.0}), TuningBeta(0.3)), DomainError);
    EXPECT_THROW(estimate_one_sample(Sample({2.0}), TuningBeta(0.3)), DomainError);
    EXPECT_THROW(Sample(std::vector<double>{}), DomainError);
    EXPECT_THROW(Sample({1.0, std::numeric_limits<double>::infinity()}), DomainError);
    EXPECT_THROW(TuningBeta(1.01), DomainError);
    SolverConfig bad;
    bad.tolerance = 0.0;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = SolverConfig{};
    bad.max_iterations = 0;
    EXPECT_THROW(estimate_two_sample(Sample({1.0, 2.0}), Sample({1.0, 3.0}), TuningBeta(0.2), bad), DomainError);
}

TEST(Estimator, LargeSampleConsistency) {
    std::mt19937_64 gen(20);
    const Sample x = normal_sample(gen, 5000, 0.0, 1.0);
    const Sample y = normal_sample(gen, 5000, 1.0, 1.0);
    const auto e = estimate_two_sample(x, y, TuningBeta(0.1));
    ASSERT_TRUE(e.converged);
    const Eigen::Matrix3d cov = sigma_w_beta(AsymptoticParams(0.5, 1.0, 0.1));
    const double m = 5000.0 * 5000.0 / 10000.0;
    EXPECT_LT(std::abs(e.mu1 - 0.0), 3.0 * std::sqrt(cov(0, 0) / m));
    EXPECT_LT(std::abs(e.mu2 - 1.0), 3.0 * std::sqrt(cov(1, 1) / m));
    EXPECT_LT(std::abs(e.sigma - 1.0), 3.0 * std::sqrt(cov(2, 2) / m));
}

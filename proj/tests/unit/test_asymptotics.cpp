#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dpd2s/asymptotics.hpp"
#include "dpd2s/errors.hpp"
#include "helpers.hpp"

using namespace dpd2s;
using testing_helpers::rel_err;

TEST(Asymptotics, JMatrixBetaZero) {
    const auto j1 = j_matrix(1.0, 0.0);
    EXPECT_NEAR(j1(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(j1(1, 1), 2.0, 1e-15);
    EXPECT_EQ(j1(0, 1), 0.0);
    const auto j2 = j_matrix(2.0, 0.0);
    EXPECT_NEAR(j2(0, 0), 0.25, 1e-15);
    EXPECT_NEAR(j2(1, 1), 0.5, 1e-15);
}

TEST(Asymptotics, JMatrixBetaHalf) {
    const double pre = 1.0 / (std::sqrt(1.5) * std::pow(2.0 * std::numbers::pi, 0.25));
    const auto j = j_matrix(1.0, 0.5);
    EXPECT_LT(rel_err(j(0, 0), pre / 1.5), 1e-14);
    EXPECT_LT(rel_err(j(1, 1), pre * 2.25 / 2.25), 1e-14);
}

TEST(Asymptotics, KMatrix) {
    const auto k0 = k_matrix(1.0, 0.0);
    EXPECT_NEAR(k0(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(k0(1, 1), 2.0, 1e-15);
    // beta = 0.3, sigma0 = 1, straight from the display.
    const double b = 0.3;
    const double pre = std::pow(2.0 * std::numbers::pi, -b);
    const double spread = std::pow(1 + 2 * b, -1.5);
    const auto k = k_matrix(1.0, b);
    EXPECT_LT(rel_err(k(0, 0), pre * spread), 1e-14);
    EXPECT_LT(rel_err(k(1, 1), pre * (spread * (4 * b * b + 2) / (1 + 2 * b) - b * b / std::pow(1 + b, 3))), 1e-14);
    EXPECT_EQ(k(1, 0), 0.0);
}

TEST(Asymptotics, MuVarianceFactor) {
    EXPECT_EQ(mu_variance_factor(0.0), 1.0);
    EXPECT_NEAR(mu_variance_factor(1.0), 8.0 / std::pow(3.0, 1.5), 1e-15);
    EXPECT_NEAR(mu_variance_factor(1.0), 1.5396007178, 1e-10);
    double prev = mu_variance_factor(0.0);
    for (int i = 1; i <= 100; ++i) {
        const double cur = mu_variance_factor(i / 100.0);
        EXPECT_GT(cur, prev);
        prev = cur;
    }
}

TEST(Asymptotics, SigmaBetaZeroExamples) {
    const auto a = sigma_w_beta(AsymptoticParams(0.5, 1.0, 0.0));
    EXPECT_NEAR(a(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(a(1, 1), 0.5, 1e-15);
    EXPECT_NEAR(a(2, 2), 0.125, 1e-15);
    const auto b = sigma_w_beta(AsymptoticParams(0.6, 1.0, 0.0));
    EXPECT_NEAR(b(0, 0), 0.4, 1e-15);
    EXPECT_NEAR(b(1, 1), 0.6, 1e-15);
    EXPECT_NEAR(b(2, 2), 0.12, 1e-15);
}

TEST(Asymptotics, SigmaAssembledFromSandwich) {
    // Location entries: (n1 n2 / N) / n_k * K11 / J11^2. Scale: both samples
    // inform sigma, so (n1 n2 / N) / N * K22 / J22^2 = w (1 - w) K22 / J22^2.
    for (double w : {0.1, 0.5, 0.6, 0.93}) {
        for (double beta : {0.0, 0.1, 0.25, 0.5, 1.0}) {
            for (double s0 : {0.01, 1.0, 2.0, 300.0}) {
                const auto j = j_matrix(s0, beta);
                const auto k = k_matrix(s0, beta);
                const auto sig = sigma_w_beta(AsymptoticParams(w, s0, beta));
                EXPECT_LT(rel_err(sig(0, 0), (1 - w) * k(0, 0) / (j(0, 0) * j(0, 0))), 1e-12);
                EXPECT_LT(rel_err(sig(1, 1), w * k(0, 0) / (j(0, 0) * j(0, 0))), 1e-12);
                EXPECT_LT(rel_err(sig(2, 2), w * (1 - w) * k(1, 1) / (j(1, 1) * j(1, 1))), 1e-12);
                EXPECT_LT(rel_err(sig(0, 0), s0 * s0 * (1 - w) * mu_variance_factor(beta)), 1e-12);
                for (int r = 0; r < 3; ++r) {
                    EXPECT_GT(sig(r, r), 0.0);
                    for (int c = 0; c < 3; ++c) {
                        if (r != c) {
                            EXPECT_EQ(sig(r, c), 0.0);
                        }
                    }
                }
            }
        }
    }
}

TEST(Asymptotics, DomainErrors) {
    EXPECT_THROW(AsymptoticParams(0.0, 1.0, 0.1), DomainError);
    EXPECT_THROW(AsymptoticParams(1.0, 1.0, 0.1), DomainError);
    EXPECT_THROW(AsymptoticParams(0.5, 0.0, 0.1), DomainError);
    EXPECT_THROW(j_matrix(-1.0, 0.1), DomainError);
    EXPECT_THROW(k_matrix(1.0, -0.1), DomainError);
    EXPECT_THROW(mu_variance_factor(-1.0), DomainError);
}

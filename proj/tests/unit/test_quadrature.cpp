#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dpd2s/errors.hpp"
#include "dpd2s/quadrature.hpp"

using namespace dpd2s;

TEST(Quadrature, Polynomial) {
    const auto r = integrate_adaptive([](double x) { return x * x * x - 2 * x; }, -1.0, 3.0);
    EXPECT_NEAR(r.value, (81.0 - 1.0) / 4.0 - (9.0 - 1.0), 1e-12);
}

TEST(Quadrature, GaussianMass) {
    const auto r = integrate_adaptive(
        [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); }, -12.0, 12.0);
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_LE(r.error, 1e-10);
}

TEST(Quadrature, KinkNeedsBreakpoint) {
    const std::vector<double> bp{0.3};
    const auto r = integrate_adaptive([](double x) { return std::abs(x - 0.3); }, -1.0, 1.0, bp);
    EXPECT_NEAR(r.value, 0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7, 1e-13);
}

TEST(Quadrature, NarrowPeakFoundByBisection) {
    const double s = 1e-3;
    const auto r = integrate_adaptive(
        [&](double x) { return std::exp(-0.5 * (x - 0.2) * (x - 0.2) / (s * s)) / (s * std::sqrt(2 * std::numbers::pi)); },
        -1.0, 1.0, std::vector<double>{0.2});
    EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(Quadrature, RejectsEmptyOrReversedInterval) {
    const auto f = [](double x) { return std::cos(x); };
    EXPECT_THROW(integrate_adaptive(f, 1.0, 0.0), DomainError);
    EXPECT_THROW(integrate_adaptive(f, 2.0, 2.0), DomainError);
}

TEST(Quadrature, BudgetExhaustionReportsAchievedError) {
    try {
        integrate_adaptive([](double x) { return std::sin(1.0 / x); }, 1e-9, 1.0, {},
                           QuadratureOptions{1e-15, 0.0, 20});
        FAIL() << "expected NumericError";
    } catch (const NumericError& e) {
        EXPECT_GT(e.achieved_tolerance(), 1e-15);
    }
}

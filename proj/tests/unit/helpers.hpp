#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "dpd2s/sample.hpp"

namespace testing_helpers {

// Tests use the standard library RNG so they do not depend on the code under test.
inline std::vector<double> normal_draws(std::mt19937_64& gen, std::size_t n, double mu, double sigma) {
    std::normal_distribution<double> dist(mu, sigma);
    std::vector<double> v(n);
    for (double& x : v) x = dist(gen);
    return v;
}

inline dpd2s::Sample normal_sample(std::mt19937_64& gen, std::size_t n, double mu, double sigma) {
    return dpd2s::Sample(normal_draws(gen, n, mu, sigma));
}

inline double rel_err(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

template <class F>
double central_diff(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Fourth-order central difference; keeps truncation error far below 1e-5 relative.
template <class F>
double central_diff4(F&& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

}  // namespace testing_helpers

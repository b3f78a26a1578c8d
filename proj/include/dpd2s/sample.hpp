#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dpd2s {

/// Observations from one population.
///
/// Construction only requires a non-empty set of finite values; routines that
/// need a spread (the estimators, the pooled t-test) check `require_spread()`
/// at their boundary, so rank-based tests can still accept tiny samples.
class Sample {
public:
    Sample() = default;
    explicit Sample(std::vector<double> values, std::string label = {});

    std::span<const double> values() const noexcept { return values_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    double mean() const;
    /// Sum of squared deviations from the mean.
    double sum_sq_dev() const;
    /// Unbiased variance (divisor n - 1); zero for a single observation.
    double variance() const;
    double median() const;
    double min() const;
    double max() const;

    /// Throws DomainError unless the sample has at least two values and a positive spread.
    void require_spread(const char* context) const;

private:
    std::vector<double> values_;
    std::string label_;
};

double median_of(std::vector<double> v);

}  // namespace dpd2s

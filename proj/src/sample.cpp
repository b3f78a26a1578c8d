#include "dpd2s/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpd2s/errors.hpp"

namespace dpd2s {

Sample::Sample(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
    if (values_.empty()) {
        throw DomainError("sample '" + label_ + "' is empty");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DomainError("sample '" + label_ + "' has a non-finite value at index " +
                              std::to_string(i));
        }
    }
}

double Sample::mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) /
           static_cast<double>(values_.size());
}

double Sample::sum_sq_dev() const {
    const double m = mean();
    double ss = 0.0;
    for (double v : values_) ss += (v - m) * (v - m);
    return ss;
}

double Sample::variance() const {
    if (values_.size() < 2) return 0.0;
    return sum_sq_dev() / static_cast<double>(values_.size() - 1);
}

double Sample::median() const { return median_of(values_); }

double Sample::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Sample::max() const { return *std::max_element(values_.begin(), values_.end()); }

void Sample::require_spread(const char* context) const {
    if (values_.size() < 2) {
        throw DomainError(std::string(context) + ": sample '" + label_ +
                          "' needs at least two observations");
    }
    if (!(sum_sq_dev() > 0.0)) {
        throw DomainError(std::string(context) + ": sample '" + label_ +
                          "' has zero variance");
    }
}

double median_of(std::vector<double> v) {
    if (v.empty()) throw DomainError("median of an empty range");
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

}  // namespace dpd2s

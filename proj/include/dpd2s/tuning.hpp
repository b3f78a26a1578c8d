#pragma once

#include <cmath>
#include <string>

#include "dpd2s/errors.hpp"

namespace dpd2s {

/// A robustness tuning parameter restricted to [0, 1].
///
/// `Tag` keeps the estimation parameter (beta) and the divergence parameter
/// (gamma) from being swapped at call sites.
template <class Tag>
class Tuning {
public:
    constexpr Tuning() = default;
    explicit Tuning(double value) : value_(value) {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw DomainError(std::string(Tag::name) + " must lie in [0, 1], got " +
                              std::to_string(value));
        }
    }

    constexpr double value() const noexcept { return value_; }
    constexpr bool is_zero() const noexcept { return value_ == 0.0; }

private:
    double value_ = 0.0;
};

struct BetaTag {
    static constexpr const char* name = "beta";
};
struct GammaTag {
    static constexpr const char* name = "gamma";
};

/// Tuning parameter of the minimum-DPD estimator.
using TuningBeta = Tuning<BetaTag>;
/// Tuning parameter of the divergence used in the test statistic.
using TuningGamma = Tuning<GammaTag>;

}  // namespace dpd2s

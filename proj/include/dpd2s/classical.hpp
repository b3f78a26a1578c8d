#pragma once

#include <optional>
#include <string_view>

#include "dpd2s/sample.hpp"

namespace dpd2s {

enum class ClassicalMethod { pooled_t, trimmed_t, wilcoxon, ks };

std::string_view method_name(ClassicalMethod m);

struct ClassicalTestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::optional<double> df;
    ClassicalMethod method = ClassicalMethod::pooled_t;
    bool all_tied = false;  ///< Wilcoxon only: every observation shares one value
};

/// Equal-variance two-sample t-test; statistic is |t|, p-value two-sided.
ClassicalTestResult pooled_t_test(const Sample& x, const Sample& y);

/// Yuen's trimmed-mean test. floor(trim * n) observations are removed from each
/// tail of each sample; trim = 0 is Welch's test.
ClassicalTestResult trimmed_t_test(const Sample& x, const Sample& y, double trim);

/// Wilcoxon rank-sum test. The statistic is the rank sum of x (midranks for
/// ties); the p-value uses the tie-corrected normal approximation with
/// continuity correction.
ClassicalTestResult wilcoxon_test(const Sample& x, const Sample& y);

/// Two-sample Kolmogorov-Smirnov test with the limiting Kolmogorov distribution
/// at effective size n1 n2 / (n1 + n2).
ClassicalTestResult ks_test(const Sample& x, const Sample& y);

}  // namespace dpd2s

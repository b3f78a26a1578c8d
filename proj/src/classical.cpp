#include "dpd2s/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dpd2s/errors.hpp"
#include "dpd2s/special_functions.hpp"

namespace dpd2s {

std::string_view method_name(ClassicalMethod m) {
    switch (m) {
        case ClassicalMethod::pooled_t: return "pooled-t";
        case ClassicalMethod::trimmed_t: return "trimmed-t";
        case ClassicalMethod::wilcoxon: return "wilcoxon";
        case ClassicalMethod::ks: return "ks";
    }
    return "unknown";
}

ClassicalTestResult pooled_t_test(const Sample& x, const Sample& y) {
    const double n1 = static_cast<double>(x.size());
    const double n2 = static_cast<double>(y.size());
    if (n1 + n2 < 3) throw DomainError("pooled_t_test: need n1 + n2 >= 3");
    const double df = n1 + n2 - 2.0;
    const double sp2 = (x.sum_sq_dev() + y.sum_sq_dev()) / df;
    if (!(sp2 > 0.0)) throw DomainError("pooled_t_test: pooled variance is zero");

    ClassicalTestResult r;
    r.method = ClassicalMethod::pooled_t;
    r.df = df;
    r.statistic = std::abs(x.mean() - y.mean()) / std::sqrt(sp2 * (1.0 / n1 + 1.0 / n2));
    r.p_value = student_t_two_sided_p(r.statistic, df);
    return r;
}

namespace {

struct TrimmedSummary {
    double mean = 0.0;
    double d = 0.0;  ///< (n-1) s_w^2 / (h (h-1))
    double h = 0.0;  ///< observations left after trimming
};

TrimmedSummary trim_summary(const Sample& s, double trim) {
    std::vector<double> v(s.values().begin(), s.values().end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    const auto g = static_cast<std::size_t>(std::floor(trim * static_cast<double>(n)));
    if (n < 2 * g + 2) {
        throw DomainError("trimmed_t_test: trimming leaves fewer than two observations in '" +
                          s.label() + "'");
    }
    const std::size_t h = n - 2 * g;
    TrimmedSummary out;
    out.h = static_cast<double>(h);
    out.mean = std::accumulate(v.begin() + g, v.end() - g, 0.0) / out.h;

    // Winsorize: pull the g extreme values on each side to the nearest kept value.
    std::vector<double> w(v);
    for (std::size_t i = 0; i < g; ++i) {
        w[i] = v[g];
        w[n - 1 - i] = v[n - 1 - g];
    }
    const double wmean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double value : w) ss += (value - wmean) * (value - wmean);
    out.d = ss / (out.h * (out.h - 1.0));
    return out;
}

}  // namespace

ClassicalTestResult trimmed_t_test(const Sample& x, const Sample& y, double trim) {
    if (!(trim >= 0.0 && trim < 0.5)) throw DomainError("trimmed_t_test: trim must lie in [0, 0.5)");
    const TrimmedSummary a = trim_summary(x, trim);
    const TrimmedSummary b = trim_summary(y, trim);
    const double se2 = a.d + b.d;
    if (!(se2 > 0.0)) throw DomainError("trimmed_t_test: winsorized variances are both zero");

    ClassicalTestResult r;
    r.method = ClassicalMethod::trimmed_t;
    r.statistic = std::abs(a.mean - b.mean) / std::sqrt(se2);
    r.df = se2 * se2 / (a.d * a.d / (a.h - 1.0) + b.d * b.d / (b.h - 1.0));
    r.p_value = student_t_two_sided_p(r.statistic, *r.df);
    return r;
}

ClassicalTestResult wilcoxon_test(const Sample& x, const Sample& y) {
    const std::size_t n1 = x.size();
    const std::size_t n2 = y.size();
    const std::size_t n = n1 + n2;

    std::vector<std::pair<double, bool>> pooled;  // (value, from x)
    pooled.reserve(n);
    for (double v : x.values()) pooled.emplace_back(v, true);
    for (double v : y.values()) pooled.emplace_back(v, false);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double rank_sum = 0.0;
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        for (std::size_t k = i; k < j; ++k) {
            if (pooled[k].second) rank_sum += midrank;
        }
        i = j;
    }

    const double a = static_cast<double>(n1);
    const double b = static_cast<double>(n2);
    const double total = static_cast<double>(n);
    const double expected = a * (total + 1.0) / 2.0;
    double variance = a * b / 12.0 * (total + 1.0);
    if (n > 1) variance -= a * b * tie_term / (12.0 * total * (total - 1.0));

    ClassicalTestResult r;
    r.method = ClassicalMethod::wilcoxon;
    r.statistic = rank_sum;
    if (!(variance > 0.0)) {
        r.p_value = 1.0;
        r.all_tied = true;
        return r;
    }
    const double z = std::max(std::abs(rank_sum - expected) - 0.5, 0.0) / std::sqrt(variance);
    r.p_value = std::min(1.0, 2.0 * std_normal_sf(z));
    return r;
}

ClassicalTestResult ks_test(const Sample& x, const Sample& y) {
    std::vector<double> a(x.values().begin(), x.values().end());
    std::vector<double> b(y.values().begin(), y.values().end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());

    // Walk the merged order, stepping past every copy of a tied value at once.
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }

    ClassicalTestResult r;
    r.method = ClassicalMethod::ks;
    r.statistic = d;
    r.p_value = kolmogorov_sf(std::sqrt(na * nb / (na + nb)) * d);
    return r;
}

}  // namespace dpd2s

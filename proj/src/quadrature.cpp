#include "dpd2s/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "dpd2s/errors.hpp"

namespace dpd2s {

namespace {

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel make_panel(const std::function<double(double)>& f, double a, double b) {
    using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    const double value = Rule::integrate(f, a, b, 0, 0.0, &err);
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "quadrature: non-finite integrand value on [" << a << ", " << b << "]";
        throw NumericError(msg.str(), std::numeric_limits<double>::infinity());
    }
    return {a, b, value, err};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    std::span<const double> breakpoints,
                                    const QuadratureOptions& opts) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integrate_adaptive: need finite a < b");
    }
    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel> panels;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p = make_panel(f, cuts[i], cuts[i + 1]);
        total += p.value;
        total_err += p.error;
        panels.push(p);
    }

    auto target = [&] { return std::max(opts.abs_tolerance, opts.rel_tolerance * std::abs(total)); };
    while (total_err > target()) {
        if (static_cast<int>(panels.size()) >= opts.max_subintervals) {
            std::ostringstream msg;
            msg << "quadrature did not converge: error estimate " << total_err
                << " exceeds tolerance " << target();
            throw NumericError(msg.str(), total_err);
        }
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NumericError("quadrature: panel cannot be bisected further", total_err);
        }
        const Panel left = make_panel(f, worst.a, mid);
        const Panel right = make_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum from the panels to drop the drift of the running updates.
    QuadratureResult result;
    result.subintervals = static_cast<int>(panels.size());
    while (!panels.empty()) {
        result.value += panels.top().value;
        result.error += panels.top().error;
        panels.pop();
    }
    return result;
}

}  // namespace dpd2s

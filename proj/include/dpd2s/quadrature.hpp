#pragma once

#include <functional>
#include <span>

namespace dpd2s {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;    ///< summed Gauss-Kronrod error estimate
    int subintervals = 0;
};

struct QuadratureOptions {
    double abs_tolerance = 1e-10;
    double rel_tolerance = 0.0;  ///< extra slack relative to |value|; 0 disables
    int max_subintervals = 4000;
};

/// Globally adaptive 15-point Gauss-Kronrod integration of `f` over [a, b].
///
/// The interval is first split at every breakpoint inside (a, b); afterwards
/// the panel with the largest error estimate is bisected until the summed
/// estimate meets the tolerance. Throws NumericError carrying the achieved
/// error when the subinterval budget runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    std::span<const double> breakpoints = {},
                                    const QuadratureOptions& opts = {});

}  // namespace dpd2s

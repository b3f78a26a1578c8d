#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpd2s/classical.hpp"
#include "dpd2s/dpd_test.hpp"
#include "dpd2s/sample.hpp"
#include "dpd2s/simulate.hpp"

namespace dpd2s::cli {

/// Version string stamped on every emitted record.
std::string_view tool_version();

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitOther = 1,
    kExitInput = 2,
    kExitConvergence = 3,
    kExitConfig = 4,
};

/// Single-column CSV: one decimal value per line. The first non-blank line may
/// be a non-numeric header, which becomes the label when `label` is empty.
/// Throws InputError with the 1-based line number of the first bad line.
Sample parse_sample_csv(std::string_view text, std::string label = {});
Sample read_sample_csv(const std::string& path);

/// What was tested and how, echoed into every record.
struct TestRequest {
    std::string method = "dpd";  ///< dpd, pooled-t, trimmed-t, wilcoxon, ks
    double beta = 0.1;
    double gamma = 0.1;
    double trim = 0.2;
    bool drop_outliers = false;
    std::string dataset;  ///< empty when samples came from files
    std::string x_path;
    std::string y_path;
};

/// Runs the requested test and returns a JSON document as text.
/// Errors propagate (DomainError, ConvergenceError).
std::string run_test_json(const Sample& x, const Sample& y, const TestRequest& req);

/// As run_test_json but as a one-row CSV with a '#' comment header.
std::string run_test_csv(const Sample& x, const Sample& y, const TestRequest& req);

/// "start:step:stop" or a comma-separated list. Every value must lie in [0, 1].
std::vector<double> parse_gamma_grid(std::string_view spec);

enum class BetaRule { equal_to_gamma, fixed };

/// DPD p-values over a gamma grid. A failed grid point is stored as nullopt.
struct CurveResult {
    std::string dataset;
    BetaRule beta_rule = BetaRule::equal_to_gamma;
    double fixed_beta = 0.0;  ///< used when beta_rule == fixed
    std::vector<double> gamma_grid;
    std::vector<std::optional<double>> p_values_full;
    std::optional<std::vector<std::optional<double>>> p_values_outlier_deleted;
};

struct CurveInput {
    Sample x;
    Sample y;
    std::optional<Sample> x_clean;  ///< outlier-deleted pair, when available
    std::optional<Sample> y_clean;
};

/// Evaluates every grid point (concurrently when threads != 1); results are
/// ordered by grid index.
CurveResult compute_curve(const CurveInput& input, const std::vector<double>& gamma_grid,
                          BetaRule rule, double fixed_beta, std::string dataset_name,
                          unsigned threads = 1);

/// CSV with '#' header lines (version, configuration); failed points as "NA".
std::string curve_to_csv(const CurveResult& curve);
/// Inverse of curve_to_csv. Throws InputError.
CurveResult parse_curve_csv(std::string_view text);
/// Static SVG plot of the p-value curves with a 0.05 reference line.
std::string curve_to_svg(const CurveResult& curve);

/// Parses a simulation configuration document (JSON). Unknown keys are
/// rejected. Throws ConfigError naming the offending field.
struct SimulationFile {
    SimulationConfig config;
    unsigned threads = 1;
};
SimulationFile parse_simulation_config(std::string_view json_text);

/// Canonical JSON of a configuration (the execution thread count is not part of it).
std::string simulation_config_json(const SimulationConfig& cfg);

/// Per-cell CSV with a '#' header carrying the version and the full configuration.
std::string simulation_report_csv(const SimulationReport& report);

/// Entry point shared by the executable and the tests. Writes results to `out`
/// and diagnostics to `err`; returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dpd2s::cli

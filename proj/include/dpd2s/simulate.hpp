#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dpd2s/rng.hpp"
#include "dpd2s/sample.hpp"

namespace dpd2s {

enum class TestKind { dpd, pooled_t, trimmed_t, wilcoxon, ks };

/// One test to run on every simulated replication.
struct TestSpec {
    TestKind kind = TestKind::dpd;
    double beta = 0.1;   ///< dpd only
    double gamma = 0.1;  ///< dpd only
    double trim = 0.2;   ///< trimmed_t only

    /// Stable label used in reports, e.g. "dpd(beta=0.1,gamma=0.1)" or "pooled-t".
    std::string label() const;
};

/// Parses "dpd", "pooled-t", "trimmed-t", "wilcoxon" or "ks".
TestKind parse_test_kind(const std::string& name);
std::string test_kind_name(TestKind kind);

struct SimulationConfig {
    std::vector<std::size_t> total_n_grid;
    double w = 0.6;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double sigma = 1.0;
    /// Mixture weight of the contaminating component in the second population.
    double contamination_rate = 0.0;
    double contamination_mu = -10.0;
    double contamination_sigma = 1.0;
    std::size_t replications = 1000;
    double nominal_alpha = 0.05;
    std::vector<TestSpec> tests;
    std::uint64_t master_seed = 20240101;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

/// Sizes for total n: n1 = floor(w n) + 1, n2 = n - n1.
std::pair<std::size_t, std::size_t> split_sizes(std::size_t total_n, double w);

struct SimulationCell {
    std::string test;
    std::size_t n = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t rejections = 0;
    std::size_t effective_replications = 0;
    std::size_t excluded = 0;  ///< replications where the estimator failed to converge
    double rejection_rate = 0.0;
    double monte_carlo_se = 0.0;
};

struct SimulationReport {
    SimulationConfig config;
    std::vector<SimulationCell> cells;  ///< grid-major, then tests in configuration order
};

/// n draws from (1 - rate) N(mu, sigma^2) + rate N(c_mu, c_sigma^2), component
/// chosen independently per observation.
Sample sample_population(std::size_t n, double mu, double sigma, double contamination_rate,
                         double c_mu, double c_sigma, RngStream& rng);

/// The two samples of replication `rep` in grid cell `cell` with total size n.
/// Contamination applies to the second population only.
std::pair<Sample, Sample> draw_replication(const SimulationConfig& cfg, std::size_t cell,
                                           std::size_t rep, std::size_t total_n);

/// Calls fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Exceptions are rethrown on the calling thread; the one from
/// the lowest index wins.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Runs every configured test on every replication of every grid cell. The
/// report does not depend on `threads`.
SimulationReport run_level_power_study(const SimulationConfig& cfg, unsigned threads = 1);

}  // namespace dpd2s

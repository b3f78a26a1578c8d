#include "dpd2s/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "dpd2s/classical.hpp"
#include "dpd2s/dpd_test.hpp"
#include "dpd2s/errors.hpp"
#include "dpd2s/format.hpp"

namespace dpd2s {

std::string test_kind_name(TestKind kind) {
    switch (kind) {
        case TestKind::dpd: return "dpd";
        case TestKind::pooled_t: return "pooled-t";
        case TestKind::trimmed_t: return "trimmed-t";
        case TestKind::wilcoxon: return "wilcoxon";
        case TestKind::ks: return "ks";
    }
    return "unknown";
}

TestKind parse_test_kind(const std::string& name) {
    for (TestKind k : {TestKind::dpd, TestKind::pooled_t, TestKind::trimmed_t, TestKind::wilcoxon,
                       TestKind::ks}) {
        if (test_kind_name(k) == name) return k;
    }
    throw DomainError("unknown test method '" + name +
                      "' (expected dpd, pooled-t, trimmed-t, wilcoxon or ks)");
}

std::string TestSpec::label() const {
    switch (kind) {
        case TestKind::dpd:
            return "dpd(beta=" + format_double(beta) + ",gamma=" + format_double(gamma) + ")";
        case TestKind::trimmed_t:
            return "trimmed-t(trim=" + format_double(trim) + ")";
        default:
            return test_kind_name(kind);
    }
}

void SimulationConfig::validate() const {
    if (total_n_grid.empty()) throw ConfigError("total_n_grid", "must not be empty");
    if (!(w > 0.0 && w < 1.0)) throw ConfigError("w", "must lie in (0, 1)");
    for (std::size_t n : total_n_grid) {
        const auto [n1, n2] = split_sizes(n, w);
        if (n1 < 2 || n2 < 2 || n1 >= n) {
            throw ConfigError("total_n_grid", "n = " + std::to_string(n) +
                                                  " leaves fewer than two observations in a group");
        }
    }
    if (!std::isfinite(mu1)) throw ConfigError("mu1", "must be finite");
    if (!std::isfinite(mu2)) throw ConfigError("mu2", "must be finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma", "must be positive");
    if (!(contamination_rate >= 0.0 && contamination_rate < 1.0)) {
        throw ConfigError("contamination_rate", "must lie in [0, 1)");
    }
    if (!std::isfinite(contamination_mu)) throw ConfigError("contamination_mu", "must be finite");
    if (!(contamination_sigma > 0.0) || !std::isfinite(contamination_sigma)) {
        throw ConfigError("contamination_sigma", "must be positive");
    }
    if (replications < 1) throw ConfigError("replications", "must be at least 1");
    if (!(nominal_alpha > 0.0 && nominal_alpha < 1.0)) {
        throw ConfigError("nominal_alpha", "must lie in (0, 1)");
    }
    if (tests.empty()) throw ConfigError("tests", "must list at least one test");
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const TestSpec& t = tests[i];
        const std::string at = "tests[" + std::to_string(i) + "].";
        if (t.kind == TestKind::dpd) {
            if (!(t.beta >= 0.0 && t.beta <= 1.0)) throw ConfigError(at + "beta", "must lie in [0, 1]");
            if (!(t.gamma >= 0.0 && t.gamma <= 1.0)) throw ConfigError(at + "gamma", "must lie in [0, 1]");
        }
        if (t.kind == TestKind::trimmed_t && !(t.trim >= 0.0 && t.trim < 0.5)) {
            throw ConfigError(at + "trim", "must lie in [0, 0.5)");
        }
    }
}

std::pair<std::size_t, std::size_t> split_sizes(std::size_t total_n, double w) {
    const auto n1 = static_cast<std::size_t>(std::floor(w * static_cast<double>(total_n))) + 1;
    return {n1, n1 <= total_n ? total_n - n1 : 0};
}

Sample sample_population(std::size_t n, double mu, double sigma, double contamination_rate,
                         double c_mu, double c_sigma, RngStream& rng) {
    if (n < 2) throw DomainError("sample_population: n must be at least 2");
    if (!(contamination_rate >= 0.0 && contamination_rate <= 1.0)) {
        throw DomainError("sample_population: contamination rate must lie in [0, 1]");
    }
    if (!(sigma > 0.0) || !(c_sigma > 0.0)) {
        throw DomainError("sample_population: scales must be positive");
    }
    std::vector<double> v(n);
    for (double& value : v) {
        // Always consume the selector draw so the stream layout does not depend on the rate.
        const bool contaminated = rng.uniform() < contamination_rate;
        const double z = rng.normal();
        value = contaminated ? c_mu + c_sigma * z : mu + sigma * z;
    }
    return Sample(std::move(v));
}

std::pair<Sample, Sample> draw_replication(const SimulationConfig& cfg, std::size_t cell,
                                           std::size_t rep, std::size_t total_n) {
    const auto [n1, n2] = split_sizes(total_n, cfg.w);
    RngStream first(cfg.master_seed, rep, 0, cell);
    RngStream second(cfg.master_seed, rep, 1, cell);
    Sample x = sample_population(n1, cfg.mu1, cfg.sigma, 0.0, 0.0, 1.0, first);
    Sample y = sample_population(n2, cfg.mu2, cfg.sigma, cfg.contamination_rate,
                                 cfg.contamination_mu, cfg.contamination_sigma, second);
    return {std::move(x), std::move(y)};
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::size_t first_error_index = count;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (i < first_error_index) {
                    first_error_index = i;
                    first_error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

enum Outcome : unsigned char { kAccept = 0, kReject = 1, kExcluded = 2 };

Outcome run_one(const TestSpec& spec, const Sample& x, const Sample& y, double alpha) {
    double p = 1.0;
    switch (spec.kind) {
        case TestKind::dpd:
            try {
                p = dpd_test(x, y, TuningBeta(spec.beta), TuningGamma(spec.gamma)).p_value;
            } catch (const ConvergenceError&) {
                return kExcluded;
            }
            break;
        case TestKind::pooled_t: p = pooled_t_test(x, y).p_value; break;
        case TestKind::trimmed_t: p = trimmed_t_test(x, y, spec.trim).p_value; break;
        case TestKind::wilcoxon: p = wilcoxon_test(x, y).p_value; break;
        case TestKind::ks: p = ks_test(x, y).p_value; break;
    }
    return p < alpha ? kReject : kAccept;
}

}  // namespace

SimulationReport run_level_power_study(const SimulationConfig& cfg, unsigned threads) {
    cfg.validate();
    SimulationReport report;
    report.config = cfg;
    const std::size_t reps = cfg.replications;
    const std::size_t k = cfg.tests.size();

    for (std::size_t cell = 0; cell < cfg.total_n_grid.size(); ++cell) {
        const std::size_t n = cfg.total_n_grid[cell];
        std::vector<Outcome> outcomes(reps * k, kAccept);
        parallel_for(reps, threads, [&](std::size_t rep) {
            const auto [x, y] = draw_replication(cfg, cell, rep, n);
            for (std::size_t t = 0; t < k; ++t) {
                outcomes[rep * k + t] = run_one(cfg.tests[t], x, y, cfg.nominal_alpha);
            }
        });

        const auto [n1, n2] = split_sizes(n, cfg.w);
        for (std::size_t t = 0; t < k; ++t) {
            SimulationCell c;
            c.test = cfg.tests[t].label();
            c.n = n;
            c.n1 = n1;
            c.n2 = n2;
            for (std::size_t rep = 0; rep < reps; ++rep) {
                const Outcome o = outcomes[rep * k + t];
                if (o == kExcluded) {
                    ++c.excluded;
                } else {
                    ++c.effective_replications;
                    if (o == kReject) ++c.rejections;
                }
            }
            if (c.effective_replications > 0) {
                const double r = static_cast<double>(c.rejections) /
                                 static_cast<double>(c.effective_replications);
                c.rejection_rate = r;
                c.monte_carlo_se =
                    std::sqrt(r * (1.0 - r) / static_cast<double>(c.effective_replications));
            } else {
                c.rejection_rate = std::nan("");
                c.monte_carlo_se = std::nan("");
            }
            report.cells.push_back(std::move(c));
        }
    }
    return report;
}

}  // namespace dpd2s

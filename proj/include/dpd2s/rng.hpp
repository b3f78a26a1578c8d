#pragma once

#include <cstdint>
#include <random>

namespace dpd2s {

/// Reproducible substream keyed by (master seed, cell, replication, population).
///
/// The key is mixed with SplitMix64 into the seed of a 64-bit Mersenne Twister.
/// Uniforms and normals are generated here rather than through the standard
/// distribution classes, whose algorithms vary between library vendors.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t replication_index,
              std::uint64_t population_index, std::uint64_t cell_index = 0);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal (Marsaglia polar method).
    double normal();
    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace dpd2s

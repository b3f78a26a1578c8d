#include "dpd2s/rng.hpp"

#include <cmath>

namespace dpd2s {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t cell, std::uint64_t rep,
                      std::uint64_t pop) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ cell);
    h = splitmix64(h ^ rep);
    return splitmix64(h ^ pop);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t replication_index,
                     std::uint64_t population_index, std::uint64_t cell_index)
    : engine_(mix_key(master_seed, cell_index, replication_index, population_index)) {}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

}  // namespace dpd2s

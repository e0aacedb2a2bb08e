#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "uedge/error.hpp"

namespace uedge {

inline uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stream id -> independent child seed. Used for per-image generator
/// streams so images can be produced in any order.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream_id) {
    return splitmix64(seed ^ splitmix64(stream_id));
}

/// Deterministic random source. All randomized operations in this project
/// take an Rng& explicitly; nothing reads global or hardware entropy.
/// Distribution code is self-contained so streams are identical across
/// standard-library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, n). Rejection sampling.
    uint64_t below(uint64_t n) {
        if (n == 0) throw InvalidInput("Rng::below: n must be positive");
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool coin(double p = 0.5) { return uniform() < p; }

    /// Standard normal via Box-Muller. The second variate is discarded so
    /// the generator state is the engine state alone (simplifies exact
    /// checkpoint round-trips).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    std::string serialize() const {
        std::ostringstream os;
        os << engine_;
        return os.str();
    }

    void deserialize(const std::string& state) {
        std::istringstream is(state);
        is >> engine_;
        if (!is) throw InvalidInput("Rng::deserialize: malformed state string");
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace uedge

#pragma once

// Deterministic seeded sampling. The generator is pinned to mt19937_64 with
// an explicit Box-Muller transform so that a (seed, inputs) pair reproduces
// the same byte-exact outcomes regardless of the standard library's
// normal_distribution internals. The id below is recorded in output metadata.

#include <cstdint>
#include <cmath>
#include <numbers>
#include <random>

namespace covsim {

inline constexpr const char* kRngId = "mt19937_64-boxmuller-v1";

/// One step of the splitmix64 output function.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Per-record seed for record `index` under a master seed. Counter-based, so
/// appending or editing later records never perturbs earlier outcomes.
inline std::uint64_t per_record_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ (index + 1));
}

class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    /// Standard normal draw (Box-Muller; the paired value is cached).
    double standard() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double stddev) { return mean + stddev * standard(); }

  private:
    // Uniform on (0, 1]: the top 53 bits of the engine output, shifted into
    // the unit interval. Never returns 0, so log(u1) is finite.
    double uniform01() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace covsim

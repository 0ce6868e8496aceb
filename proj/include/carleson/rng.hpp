#pragma once

#include <cstdint>
#include <random>

namespace carleson {

/// Seeded generator with platform-independent draws (distributions in <random>
/// are not bit-stable across standard libraries, so we derive values from raw
/// engine output ourselves).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] (inclusive).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(eng_() % span);
    }

    /// Log-uniform in [lo, hi], lo > 0.
    double log_uniform(double lo, double hi);

    /// Standard normal (Box-Muller).
    double normal();

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace carleson

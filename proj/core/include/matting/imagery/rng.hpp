#pragma once

#include <cmath>
#include <cstdint>

namespace matting::imagery {

namespace detail {
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based deterministic generator. The draw sequence depends only on
// (seed, counter), so any draw can be reproduced without replaying earlier
// ones, and split() derives an independent stream from a key without
// consuming parent state. Not thread-safe; split one instance per task.
struct Rng {
    uint64_t seed = 0;
    uint64_t counter = 0;

    Rng() = default;
    explicit Rng(uint64_t s) : seed(s) {}

    uint64_t next_u64() {
        ++counter;
        return detail::mix64(seed + counter * 0x9E3779B97F4A7C15ull);
    }

    // Uniform in [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform_in(double lo, double hi) { return lo + uniform() * (hi - lo); }

    bool coin(double p) { return uniform() < p; }

    // Uniform integer in [0, n), unbiased.
    uint64_t below(uint64_t n) {
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            const uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    int below_int(int n) { return static_cast<int>(below(static_cast<uint64_t>(n))); }

    // Standard normal via Box-Muller.
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    // Independent child stream; depends only on (seed, key), not on how many
    // draws the parent has made.
    Rng split(uint64_t key) const {
        return Rng(detail::mix64(seed ^ detail::mix64(key + 0xD1B54A32D192ED03ull)));
    }
};

}  // namespace matting::imagery

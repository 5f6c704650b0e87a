#pragma once

#include <cstdint>
#include <random>

namespace gridmark {

// Seeded generator used everywhere randomness is needed: mt19937_64 with
// explicit conversions, so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform on [0, bound), rejection sampling to avoid modulo bias.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = engine_();
        while (x >= limit)
            x = engine_();
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace gridmark

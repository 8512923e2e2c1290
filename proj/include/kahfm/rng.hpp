#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace kahfm {

/// splitmix64-based generator. Hand-rolled so that seeded runs are
/// bit-identical across standard libraries and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

    double normal(double mean, double stddev) {
        // Box-Muller, one value per call
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        return mean + stddev * std::sqrt(-2.0 * std::log(u1)) *
                          std::cos(2.0 * 3.141592653589793238462643 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::uint64_t state_;
};

/// All randomness flows from one top-level seed; components derive their
/// own stream with a fixed label (and an optional index).
std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index = 0);

}  // namespace kahfm

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace hetpanel {

/// Deterministic random stream. Wraps mt19937_64 but implements the
/// distributions explicitly so that sequences are reproducible bit-for-bit
/// independent of the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), n >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        // Rejection sampling to avoid modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Standard normal via Box-Muller, stateless between calls.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

    /// Derives an independent substream from a label and index. Used to give
    /// every case/run its own seed so results do not depend on scheduling.
    static std::uint64_t derive(std::uint64_t seed, std::string_view label,
                                std::uint64_t index = 0) {
        std::uint64_t h = 1469598103934665603ull ^ seed;
        auto mix = [&h](std::uint64_t x) {
            h ^= x;
            h *= 1099511628211ull;
        };
        for (const char c : label) mix(static_cast<std::uint8_t>(c));
        mix(index + 0x9e3779b97f4a7c15ull);
        // SplitMix64 finalizer to spread the bits.
        h += 0x9e3779b97f4a7c15ull;
        h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
        h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
        return h ^ (h >> 31);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace hetpanel

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "beasst/geometry.hpp"

namespace beasst {

// Deterministic random stream. All randomness in the project flows from a
// single scenario seed through named substreams (map, placement, fading,
// disturbance, trial, ...), so paired benchmark trials can share worlds
// while drawing independent noise.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform double in [0, 1) with 53 bits of mantissa.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Inclusive integer range.
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(gen_() % span);
    }

    // Box-Muller; two raw draws per sample, no cached spare.
    double normal(double mean, double stddev) {
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        return mean + stddev * z;
    }

    // Uniform over the closed unit disk, by rejection.
    Vec2 in_unit_disk() {
        for (;;) {
            const double x = uniform(-1.0, 1.0);
            const double y = uniform(-1.0, 1.0);
            if (x * x + y * y <= 1.0) return {x, y};
        }
    }

private:
    std::mt19937_64 gen_;
};

namespace detail {
constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 1099511628211ull;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}
}  // namespace detail

// Derive the seed of a named substream; `index` separates per-trial or
// per-source instances of the same stream.
inline std::uint64_t substream_seed(std::uint64_t base, std::string_view name,
                                    std::uint64_t index = 0) {
    return detail::splitmix64(base ^ detail::fnv1a(name) ^
                              detail::splitmix64(index * 0x9e3779b97f4a7c15ull + 1));
}

inline Rng substream(std::uint64_t base, std::string_view name, std::uint64_t index = 0) {
    return Rng(substream_seed(base, name, index));
}

}  // namespace beasst

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace coulomb::rng {

/// SplitMix64 finaliser.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, index, draw), so chains can be replayed or split freely.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
        : key_(mix64(mix64(mix64(seed) ^ stream) ^ index)) {}

    std::uint64_t next_u64() { return mix64(key_ ^ mix64(++draw_)); }

    /// Uniform on (0, 1).
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t draw_ = 0;
};

} // namespace coulomb::rng

#pragma once
#include <complex>
#include <cstdint>
#include <random>

namespace rislink {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; stable across platforms and the basis of all
/// seed derivation in the project.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Per-point replay seed: hash of (master seed, grid point index).
constexpr std::uint64_t point_seed(std::uint64_t master, std::uint64_t point) {
    return mix64(master ^ mix64(0xA076'1D64'78BD'642FULL + point));
}

/// Per-trial substream seed derived from a stored point seed, so a single
/// (point, trial) sample can be replayed from the CSV alone.
constexpr std::uint64_t trial_seed(std::uint64_t point_seed_value, std::uint64_t trial) {
    return mix64(point_seed_value + 0x9E3779B97F4A7C15ULL * (trial + 1));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Circularly symmetric complex Gaussian with E|z|^2 = variance.
inline std::complex<double> circular_gaussian(Rng& rng, double variance) {
    std::normal_distribution<double> n(0.0, std::sqrt(variance * 0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

} // namespace rislink

#ifndef SCSVM_RNG_HPP_
#define SCSVM_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace scsvm::rng {

/// Derives independent sub-seeds from one master seed. splitmix64 step.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_tag) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream_tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform integer in [0, n). Rejection sampling on the raw 64-bit stream,
/// so sequences do not depend on the standard library's distribution code.
inline std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller (single value, second one discarded).
inline double normal(std::mt19937_64& gen) {
    double u1 = uniform_unit(gen);
    double u2 = uniform_unit(gen);
    while (u1 <= 0.0) u1 = uniform_unit(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Fisher-Yates shuffle driven by uniform_index.
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_index(gen, i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace scsvm::rng

#endif

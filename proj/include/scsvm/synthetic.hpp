#ifndef SCSVM_SYNTHETIC_HPP_
#define SCSVM_SYNTHETIC_HPP_

#include <cstdint>
#include <string>

#include "scsvm/dataset.hpp"

namespace scsvm {

enum class SyntheticKind { blobs, moons_like };

SyntheticKind synthetic_kind_from(const std::string& name);

/// Balanced two-class 2-D set, deterministic per seed.
/// blobs: Gaussian clusters at (+2,+2) / (-2,-2), stddev = noise (noise = 0 is
/// linearly separable). moons_like: interleaving half-circles, not linearly
/// separable even at noise = 0.
Dataset gen_synthetic(SyntheticKind kind, index_t m, double noise, std::uint64_t seed);

} // namespace scsvm

#endif

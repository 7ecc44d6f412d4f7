#pragma once

#include <cstdint>
#include <random>

namespace setstat {

using Engine = std::mt19937_64;

/// (seed, stream) pair; identical pairs reproduce identical draws.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Independent sub-stream for task k (replicate, grid row, ...).
  RngSeed child(std::uint64_t k) const noexcept;

  Engine engine() const;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

}  // namespace setstat

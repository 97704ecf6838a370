#pragma once

// Seeded generators shared by every randomized routine.
//
// Streams are std::mt19937_64 engines. Each stream's seed is derived from a base
// seed and a list of integer tags by SplitMix64 mixing, so a matrix column or a
// Monte-Carlo trial always draws the same numbers no matter which thread runs it.
// Uniforms take the top 53 bits of the engine output; normals use the Box-Muller
// transform. Neither depends on the standard library's distribution classes,
// whose output is implementation-defined.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sigspace {

std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a base seed with tags (column index, trial index, stream id...).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sigspace

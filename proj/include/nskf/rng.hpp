#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "nskf/types.hpp"

namespace nskf::rng {

/// SplitMix64 step: advances state and returns the next output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Order-dependent hash of a seed and a list of integers, used to derive
/// independent per-cell and per-trial seeds.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

/// xoshiro256** seeded by four SplitMix64 outputs of the seed.
///
/// uniform() = ((next() >> 11) + 0.5) * 2^-53, so never 0 or 1.
/// normal() uses Box-Muller on two fresh uniforms u1, u2 and returns
/// sqrt(-2 ln u1) * cos(2 pi u2); nothing is cached between calls.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t operator()();
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  double uniform();
  double normal();
  /// floor(uniform() * k), for k >= 1.
  Index index_below(Index k);

 private:
  std::uint64_t s_[4];
};

/// k distinct values from [0, n) by partial Fisher-Yates, sorted ascending.
std::vector<Index> sample_without_replacement(Xoshiro256& gen, Index n, Index k);

}  // namespace nskf::rng

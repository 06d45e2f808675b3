#pragma once

#include <array>
#include <cstdint>

namespace smpred {

// xoshiro256++ generator seeded through splitmix64.
//
// Uniform and integer draws are computed with pure integer arithmetic plus an
// exact power-of-two scaling, so identical seeds give bit-identical streams on
// every platform. normal() uses the Marsaglia polar method; its only libm
// dependence is log(), so it is bit-exact for a given libm build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1).
  double uniform();
  // Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in {0, ..., n-1}, unbiased (rejection sampling). n >= 1.
  std::uint64_t uniform_index(std::uint64_t n);
  // Normal draw, Marsaglia polar method with cached spare.
  double normal(double mean = 0.0, double stddev = 1.0);

  // Independent child stream derived from this generator's seed and `stream`.
  // Splitting does not consume state, so setup order is irrelevant.
  Rng split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

  // Full state for bit-exact checkpointing.
  struct State {
    std::uint64_t seed;
    std::array<std::uint64_t, 4> s;
    bool has_spare;
    double spare;
  };
  State state() const;
  static Rng from_state(const State& state);

 private:
  Rng() = default;

  std::uint64_t seed_ = 0;
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace smpred

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace rbfmorph {

// Reproducible generator for partitions and random baselines.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. Bounded draws use rejection sampling on the raw 64-bit output
// instead of std::uniform_int_distribution, whose algorithm is left to the
// library vendor. Together these give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Fisher-Yates shuffle of 0..n-1, drawing j = below(i + 1) for i = n-1..1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace rbfmorph

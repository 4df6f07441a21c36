#include "rbfmorph/rng.hpp"

#include <limits>
#include <numeric>
#include <utility>

namespace rbfmorph {

std::uint64_t Rng::below(std::uint64_t bound) {
  // Largest multiple of bound representable; values at or above it are
  // redrawn so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % bound;
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i-- > 1;) {
    std::swap(p[i], p[below(i + 1)]);
  }
  return p;
}

}  // namespace rbfmorph

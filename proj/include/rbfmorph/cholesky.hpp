#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbfmorph/errors.hpp"

namespace rbfmorph {

// Lower-triangular factor L of a symmetric positive definite matrix that is
// grown one row/column at a time. Row i of L is stored packed at offset
// i * (i + 1) / 2, so appending never moves existing entries.
class CholeskyState {
 public:
  CholeskyState() = default;

  std::size_t order() const noexcept { return order_; }
  bool empty() const noexcept { return order_ == 0; }

  // Append the next matrix row: kernel values against the existing `order()`
  // rows followed by the diagonal entry, so `row.size() == order() + 1`.
  // O(order^2). On NotPositiveDefinite the state is left unchanged.
  void append(std::span<const double> row);

  // Drop every row from `new_order` on.
  void truncate(std::size_t new_order);

  double at(std::size_t i, std::size_t j) const {
    return j > i ? 0.0 : packed_[offset(i) + j];
  }

  std::span<const double> row(std::size_t i) const { return {packed_.data() + offset(i), i + 1}; }

  // In-place solve of L L^T x = rhs.
  void solve_in_place(std::span<double> rhs) const;

 private:
  static std::size_t offset(std::size_t i) noexcept { return i * (i + 1) / 2; }

  std::size_t order_ = 0;
  std::vector<double> packed_;
  std::vector<double> scratch_;
};

struct Weights {
  std::vector<double> wx;
  std::vector<double> wy;
  std::vector<double> wz;
};

// Forward/back substitution for the three displacement components.
// Throws DimensionMismatch unless every rhs has length state.order().
Weights solve_weights(const CholeskyState& state, std::span<const double> dx, std::span<const double> dy,
                      std::span<const double> dz);

}  // namespace rbfmorph

#include "rbfmorph/cholesky.hpp"

#include <cmath>
#include <string>

namespace rbfmorph {

void CholeskyState::append(std::span<const double> row) {
  const std::size_t n = order_;
  if (row.size() != n + 1) {
    throw DimensionMismatch("cholesky append: expected row of length " + std::to_string(n + 1) + ", got " +
                            std::to_string(row.size()));
  }

  // Solve L l = row[0..n) by forward substitution.
  scratch_.assign(row.begin(), row.end() - 1);
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double* lj = packed_.data() + offset(j);
    double acc = scratch_[j];
    for (std::size_t p = 0; p < j; ++p) acc -= lj[p] * scratch_[p];
    const double v = acc / lj[j];
    scratch_[j] = v;
    sum_sq += v * v;
  }

  const double diag = row[n] - sum_sq;
  if (!(diag > 0.0) || !std::isfinite(diag)) {
    throw NotPositiveDefinite("cholesky append: pivot " + std::to_string(diag) + " at row " + std::to_string(n));
  }

  packed_.insert(packed_.end(), scratch_.begin(), scratch_.end());
  packed_.push_back(std::sqrt(diag));
  ++order_;
}

void CholeskyState::truncate(std::size_t new_order) {
  if (new_order >= order_) return;
  packed_.resize(offset(new_order));
  order_ = new_order;
}

void CholeskyState::solve_in_place(std::span<double> rhs) const {
  const std::size_t n = order_;
  if (rhs.size() != n) {
    throw DimensionMismatch("cholesky solve: expected rhs of length " + std::to_string(n) + ", got " +
                            std::to_string(rhs.size()));
  }
  // L y = b
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = packed_.data() + offset(i);
    double acc = rhs[i];
    for (std::size_t p = 0; p < i; ++p) acc -= li[p] * rhs[p];
    rhs[i] = acc / li[i];
  }
  // L^T x = y, column-oriented so that each step reads one packed row.
  for (std::size_t j = n; j-- > 0;) {
    const double* lj = packed_.data() + offset(j);
    const double xj = rhs[j] / lj[j];
    rhs[j] = xj;
    for (std::size_t p = 0; p < j; ++p) rhs[p] -= lj[p] * xj;
  }
}

Weights solve_weights(const CholeskyState& state, std::span<const double> dx, std::span<const double> dy,
                      std::span<const double> dz) {
  const std::size_t n = state.order();
  if (dx.size() != n || dy.size() != n || dz.size() != n) {
    throw DimensionMismatch("solve_weights: right-hand sides must have length " + std::to_string(n));
  }
  Weights w{{dx.begin(), dx.end()}, {dy.begin(), dy.end()}, {dz.begin(), dz.end()}};
  state.solve_in_place(w.wx);
  state.solve_in_place(w.wy);
  state.solve_in_place(w.wz);
  return w;
}

}  // namespace rbfmorph

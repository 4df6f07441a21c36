#pragma once

#include <span>
#include <vector>

#include "rbfmorph/errors.hpp"
#include "rbfmorph/geometry.hpp"

namespace rbfmorph {

// Support radius of the compact kernel. Distances are divided by it before
// the kernel is applied.
class KernelConfig {
 public:
  explicit KernelConfig(double radius);

  double radius() const noexcept { return radius_; }
  double inverse_radius() const noexcept { return inverse_radius_; }

 private:
  double radius_;
  double inverse_radius_;
};

// Wendland C2: (1 - eta)^4 (4 eta + 1) on [0, 1], zero beyond.
// Throws InvalidArgument on NaN or negative input.
double wendland_c2(double eta);

// Hot-loop variant; the caller guarantees eta >= 0.
inline double wendland_c2_unchecked(double eta) noexcept {
  if (eta > 1.0) return 0.0;
  const double s = 1.0 - eta;
  const double s2 = s * s;
  return s2 * s2 * (4.0 * eta + 1.0);
}

double normalized_distance(const Point3& a, const Point3& b, const KernelConfig& cfg);

// phi(|a - b| / radius). Argument order does not change the result bitwise.
inline double kernel_between(const Point3& a, const Point3& b, const KernelConfig& cfg) noexcept {
  return wendland_c2_unchecked(std::sqrt(squared_distance(a, b)) * cfg.inverse_radius());
}

// Dense row-major square matrix, used for assembled kernel matrices and tests.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Kernel matrix over the given points. Throws DuplicateNodes when two points
// coincide.
DenseMatrix assemble_phi(std::span<const Point3> points, const KernelConfig& cfg);

}  // namespace rbfmorph

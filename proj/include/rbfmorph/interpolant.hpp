#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbfmorph/cholesky.hpp"
#include "rbfmorph/geometry.hpp"
#include "rbfmorph/kernel.hpp"

namespace rbfmorph {

// Selected support nodes with their interpolation weights. `nodes` holds
// positions in the owning BoundarySet.
struct SupportSet {
  std::vector<std::size_t> nodes;
  std::vector<Point3> points;
  std::vector<double> wx;
  std::vector<double> wy;
  std::vector<double> wz;

  std::size_t size() const noexcept { return nodes.size(); }
  bool empty() const noexcept { return nodes.empty(); }
};

// Sum of w_i phi(|p - r_i| / radius) per component. Throws EmptySupportSet.
Vec3Displacement evaluate_displacement(const Point3& p, const SupportSet& s, const KernelConfig& cfg);

// Unchecked form for inner loops; `s` must be nonempty with current weights.
Vec3Displacement evaluate_displacement_unchecked(const Point3& p, const SupportSet& s,
                                                 const KernelConfig& cfg) noexcept;

// points[k] + evaluate_displacement(points[k]) for every k, order preserved.
// Results do not depend on `workers`.
std::vector<Point3> deform_points(std::span<const Point3> points, const SupportSet& s, const KernelConfig& cfg,
                                  std::size_t workers = 1);

// Grows a support set one node at a time, keeping the Cholesky factor of its
// kernel matrix and the prescribed displacements of its nodes in step.
class InterpolantBuilder {
 public:
  enum class AddResult { Added, NearDuplicate, NotPositiveDefinite };

  explicit InterpolantBuilder(KernelConfig cfg) : cfg_(cfg) {}

  // Candidates within 1e-12 * radius of an existing support are rejected
  // before factorization. A rejected candidate leaves the builder unchanged.
  AddResult try_add(std::size_t node, const Point3& p, const Vec3Displacement& prescribed);

  // Recomputes the weights of `support()` from the current factor.
  void solve();

  const SupportSet& support() const noexcept { return support_; }
  const CholeskyState& factor() const noexcept { return factor_; }
  const KernelConfig& kernel() const noexcept { return cfg_; }
  std::span<const Vec3Displacement> prescribed() const noexcept { return prescribed_; }

  // max_j |F(r_j) - prescribed_j| over the current supports (Euclidean).
  double max_support_residual() const;

 private:
  KernelConfig cfg_;
  SupportSet support_;
  CholeskyState factor_;
  std::vector<Vec3Displacement> prescribed_;
  std::vector<double> row_;
};

}  // namespace rbfmorph

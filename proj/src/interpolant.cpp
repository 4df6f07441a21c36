#include "rbfmorph/interpolant.hpp"

#include <algorithm>

#include "rbfmorph/parallel.hpp"

namespace rbfmorph {

Vec3Displacement evaluate_displacement_unchecked(const Point3& p, const SupportSet& s,
                                                 const KernelConfig& cfg) noexcept {
  const std::size_t n = s.points.size();
  const Point3* pts = s.points.data();
  const double* wx = s.wx.data();
  const double* wy = s.wy.data();
  const double* wz = s.wz.data();
  double ax = 0.0, ay = 0.0, az = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = kernel_between(p, pts[i], cfg);
    ax += wx[i] * phi;
    ay += wy[i] * phi;
    az += wz[i] * phi;
  }
  return {ax, ay, az};
}

Vec3Displacement evaluate_displacement(const Point3& p, const SupportSet& s, const KernelConfig& cfg) {
  if (s.empty()) throw EmptySupportSet("evaluate_displacement: support set is empty");
  if (s.wx.size() != s.size() || s.wy.size() != s.size() || s.wz.size() != s.size()) {
    throw DimensionMismatch("evaluate_displacement: weights are not current");
  }
  return evaluate_displacement_unchecked(p, s, cfg);
}

std::vector<Point3> deform_points(std::span<const Point3> points, const SupportSet& s, const KernelConfig& cfg,
                                  std::size_t workers) {
  std::vector<Point3> out(points.size());
  if (points.empty()) return out;
  if (s.empty()) throw EmptySupportSet("deform_points: support set is empty");
  if (s.wx.size() != s.size() || s.wy.size() != s.size() || s.wz.size() != s.size()) {
    throw DimensionMismatch("deform_points: weights are not current");
  }
  parallel_for(points.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      out[k] = points[k] + evaluate_displacement_unchecked(points[k], s, cfg);
    }
  });
  return out;
}

InterpolantBuilder::AddResult InterpolantBuilder::try_add(std::size_t node, const Point3& p,
                                                          const Vec3Displacement& prescribed) {
  const double min_sq = 1e-12 * cfg_.radius() * (1e-12 * cfg_.radius());
  const std::size_t n = support_.size();
  row_.resize(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (squared_distance(p, support_.points[i]) < min_sq) return AddResult::NearDuplicate;
    row_[i] = kernel_between(support_.points[i], p, cfg_);
  }
  row_[n] = 1.0;
  try {
    factor_.append(row_);
  } catch (const rbfmorph::NotPositiveDefinite&) {
    return AddResult::NotPositiveDefinite;
  }
  support_.nodes.push_back(node);
  support_.points.push_back(p);
  prescribed_.push_back(prescribed);
  return AddResult::Added;
}

void InterpolantBuilder::solve() {
  const std::size_t n = support_.size();
  support_.wx.resize(n);
  support_.wy.resize(n);
  support_.wz.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    support_.wx[i] = prescribed_[i].dx;
    support_.wy[i] = prescribed_[i].dy;
    support_.wz[i] = prescribed_[i].dz;
  }
  factor_.solve_in_place(support_.wx);
  factor_.solve_in_place(support_.wy);
  factor_.solve_in_place(support_.wz);
}

double InterpolantBuilder::max_support_residual() const {
  double worst = 0.0;
  if (support_.empty()) return worst;
  for (std::size_t j = 0; j < support_.size(); ++j) {
    const Vec3Displacement f = evaluate_displacement_unchecked(support_.points[j], support_, cfg_);
    const Vec3Displacement r{prescribed_[j].dx - f.dx, prescribed_[j].dy - f.dy, prescribed_[j].dz - f.dz};
    worst = std::max(worst, norm(r));
  }
  return worst;
}

}  // namespace rbfmorph

#include "rbfmorph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rbfmorph/errors.hpp"
#include "rbfmorph/parallel.hpp"

namespace rbfmorph {

double nearest_support_distance(std::size_t i, const SupportSet& s, const BoundarySet& b) {
  if (s.empty()) throw EmptySupportSet("nearest_support_distance: support set is empty");
  if (i >= b.size()) throw UnknownIndex("boundary index " + std::to_string(i) + " out of range");
  double best = std::numeric_limits<double>::infinity();
  for (const Point3& p : s.points) best = std::min(best, distance(b.points[i], p));
  return best;
}

double kl_divergence(const SupportSet& s1, const SupportSet& s2, const BoundarySet& b) {
  if (s1.empty() || s2.empty()) throw EmptySupportSet("kl_divergence: support set is empty");
  constexpr double kFloor = 1e-12;
  double sum = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double d1 = nearest_support_distance(i, s1, b);
    if (d1 == 0.0) continue;
    const double d2 = std::max(nearest_support_distance(i, s2, b), kFloor);
    sum += d1 * std::log(d1 / d2);
  }
  return sum;
}

ErrorSummary error_summary(const BoundarySet& b, const SupportSet& s, const KernelConfig& cfg,
                           std::size_t workers) {
  ErrorSummary out;
  if (b.size() == 0) return out;
  std::vector<double> errors(b.size(), 0.0);
  if (!s.empty()) {
    parallel_for(b.size(), workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j) {
        const Vec3Displacement f = evaluate_displacement_unchecked(b.points[j], s, cfg);
        const Vec3Displacement& d = b.disp[j];
        errors[j] = norm({d.dx - f.dx, d.dy - f.dy, d.dz - f.dz});
      }
    });
  } else {
    for (std::size_t j = 0; j < b.size(); ++j) errors[j] = norm(b.disp[j]);
  }
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < errors.size(); ++j) {
    if (errors[j] > out.max_error) {
      out.max_error = errors[j];
      out.node_of_max = j;
    }
    sum_sq += errors[j] * errors[j];
  }
  out.rms_error = std::sqrt(sum_sq / static_cast<double>(errors.size()));
  // sqrt(mean(e^2)) can round a hair above max(e) when all errors are equal.
  out.rms_error = std::min(out.rms_error, out.max_error);
  return out;
}

std::vector<double> interior_angles(std::span<const std::size_t> cell, std::span<const Point3> positions) {
  const std::size_t k = cell.size();
  if (k != 3 && k != 4) {
    throw InvalidArgument("cell quality supports 3 or 4 vertices, got " + std::to_string(k));
  }
  for (std::size_t v : cell) {
    if (v >= positions.size()) throw InvalidArgument("cell vertex " + std::to_string(v) + " out of range");
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t c = a + 1; c < k; ++c) {
      if (positions[cell[a]] == positions[cell[c]]) throw DegenerateCell("cell has coincident vertices");
    }
  }
  std::vector<double> angles(k);
  for (std::size_t v = 0; v < k; ++v) {
    const Point3& p = positions[cell[v]];
    const Point3& prev = positions[cell[(v + k - 1) % k]];
    const Point3& next = positions[cell[(v + 1) % k]];
    const double ux = prev.x - p.x, uy = prev.y - p.y, uz = prev.z - p.z;
    const double wx = next.x - p.x, wy = next.y - p.y, wz = next.z - p.z;
    const double cx = uy * wz - uz * wy;
    const double cy = uz * wx - ux * wz;
    const double cz = ux * wy - uy * wx;
    const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
    const double dot = ux * wx + uy * wy + uz * wz;
    angles[v] = std::atan2(cross, dot) * 180.0 / std::numbers::pi;
  }
  return angles;
}

double cell_quality(std::span<const std::size_t> cell, std::span<const Point3> positions) {
  const std::vector<double> angles = interior_angles(cell, positions);
  const double ideal = cell.size() == 3 ? 60.0 : 90.0;
  const auto [lo, hi] = std::minmax_element(angles.begin(), angles.end());
  return 1.0 - std::max((*hi - ideal) / (180.0 - ideal), (ideal - *lo) / ideal);
}

QualityReport quality_report(std::span<const std::vector<std::size_t>> cells, std::span<const Point3> positions) {
  QualityReport r;
  r.q.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    try {
      r.q.push_back(cell_quality(cells[c], positions));
    } catch (const DegenerateCell& e) {
      throw DegenerateCell("cell " + std::to_string(c) + ": " + e.what());
    }
  }
  if (r.q.empty()) return r;
  double sum = 0.0;
  r.min = r.q.front();
  for (double q : r.q) {
    sum += q;
    r.min = std::min(r.min, q);
    const double pos = std::clamp(q, 0.0, 1.0) / 0.05;
    const auto bin = std::min<std::size_t>(QualityReport::kBins - 1, static_cast<std::size_t>(pos));
    ++r.histogram[bin];
  }
  r.mean = sum / static_cast<double>(r.q.size());
  return r;
}

}  // namespace rbfmorph

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "rbfmorph/geometry.hpp"
#include "rbfmorph/interpolant.hpp"
#include "rbfmorph/kernel.hpp"
#include "rbfmorph/selection.hpp"

namespace rbfmorph {

struct ErrorSummary {
  double max_error = 0.0;
  double rms_error = 0.0;
  std::size_t node_of_max = 0;
};

// Distance from boundary node i to the closest support node (brute force).
double nearest_support_distance(std::size_t i, const SupportSet& s, const BoundarySet& b);

// sum_i d1_i log(d1_i / d2_i) over all boundary nodes, natural log.
// Terms with d1_i == 0 contribute 0; d2_i is floored at 1e-12.
double kl_divergence(const SupportSet& s1, const SupportSet& s2, const BoundarySet& b);

// Max (lowest-index tie-break) and RMS interpolation error over every node.
ErrorSummary error_summary(const BoundarySet& b, const SupportSet& s, const KernelConfig& cfg,
                           std::size_t workers = 1);

// Interior-angle quality of one triangle or quadrilateral:
//   q = 1 - max((a_max - a) / (180 - a), (a - a_min) / a)
// with a the regular-polygon angle (60 or 90 degrees).
double cell_quality(std::span<const std::size_t> cell, std::span<const Point3> positions);

// Interior angles in degrees, in vertex order.
std::vector<double> interior_angles(std::span<const std::size_t> cell, std::span<const Point3> positions);

struct QualityReport {
  static constexpr std::size_t kBins = 20;  // width 0.05 over [0, 1]

  std::vector<double> q;
  double min = 0.0;   // 0 for an empty report
  double mean = 0.0;  // 0 for an empty report
  std::array<std::size_t, kBins> histogram{};
};

// Cells are vertex-index lists. Throws DegenerateCell naming the cell id.
QualityReport quality_report(std::span<const std::vector<std::size_t>> cells, std::span<const Point3> positions);

}  // namespace rbfmorph

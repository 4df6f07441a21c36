#include "rbfmorph/deformers.hpp"

#include <cmath>
#include <numbers>

#include "rbfmorph/errors.hpp"
#include "rbfmorph/mesh_io.hpp"

namespace rbfmorph {

void validate(const BendTwistParams& params) {
  if (!(params.b > 0.0)) throw InvalidArgument("bend-twist: root chord b must be positive");
  if (!std::isfinite(params.theta_m) || !std::isfinite(params.x0) || !std::isfinite(params.y0)) {
    throw InvalidArgument("bend-twist: parameters must be finite");
  }
}

void validate(const SpanSineParams& params) {
  if (!(params.b > 0.0) || !(params.c > 0.0)) throw InvalidArgument("span-sine: b and c must be positive");
}

Vec3Displacement bend_twist(const Point3& p, const BendTwistParams& params) {
  const double s = std::sin(p.z * std::numbers::pi / (2.0 * params.b));
  const double theta = params.theta_m * std::numbers::pi / 180.0 * s;
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  const double rx = p.x - params.x0;
  const double ry = p.y - params.y0;
  return {(c - 1.0) * rx - sn * ry, sn * rx + (c - 1.0) * ry + 0.05 * p.z * s, 0.0};
}

Vec3Displacement span_sine(const Point3& p, const SpanSineParams& params) {
  const double r = p.z / params.b;
  return {0.0, 0.3 * params.c * r * r * std::sin(8.0 * std::numbers::pi * r), 0.0};
}

DisplacementField prescribe(std::span<const Point3> points, const AnalyticDeformer& deformer) {
  std::visit(
      [](const auto& d) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(d)>, ZeroDeformation>) validate(d);
      },
      deformer);
  DisplacementField out(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    out[k] = std::visit(
        [&](const auto& d) -> Vec3Displacement {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, BendTwistParams>) {
            return bend_twist(points[k], d);
          } else if constexpr (std::is_same_v<T, SpanSineParams>) {
            return span_sine(points[k], d);
          } else {
            return {};
          }
        },
        deformer);
  }
  return out;
}

DisplacementField prescribe(std::span<const std::size_t> boundary_ids, std::istream& displacement_file) {
  const DisplacementFile file = read_displacement_records(displacement_file);
  if (file.records.size() != boundary_ids.size()) {
    throw SourceMismatch("displacement file has " + std::to_string(file.records.size()) + " nodes, mesh has " +
                         std::to_string(boundary_ids.size()) + " boundary nodes");
  }
  return align_displacements(file, boundary_ids);
}

}  // namespace rbfmorph

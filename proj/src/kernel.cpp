#include "rbfmorph/kernel.hpp"

#include <cmath>
#include <string>

namespace rbfmorph {

KernelConfig::KernelConfig(double radius) : radius_(radius), inverse_radius_(1.0 / radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("kernel radius must be positive and finite, got " + std::to_string(radius));
  }
}

double wendland_c2(double eta) {
  if (std::isnan(eta)) throw InvalidArgument("wendland_c2: eta is NaN");
  if (eta < 0.0) throw InvalidArgument("wendland_c2: eta must be nonnegative");
  return wendland_c2_unchecked(eta);
}

double normalized_distance(const Point3& a, const Point3& b, const KernelConfig& cfg) {
  return std::sqrt(squared_distance(a, b)) * cfg.inverse_radius();
}

DenseMatrix assemble_phi(std::span<const Point3> points, const KernelConfig& cfg) {
  const std::size_t n = points.size();
  DenseMatrix phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    phi(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) {
        throw DuplicateNodes("assemble_phi: points " + std::to_string(j) + " and " + std::to_string(i) +
                             " coincide");
      }
      const double v = kernel_between(points[i], points[j], cfg);
      phi(i, j) = v;
      phi(j, i) = v;
    }
  }
  return phi;
}

}  // namespace rbfmorph

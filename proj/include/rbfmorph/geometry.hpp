#pragma once

#include <cmath>
#include <vector>

namespace rbfmorph {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

struct Vec3Displacement {
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;

  friend bool operator==(const Vec3Displacement&, const Vec3Displacement&) = default;
};

// Prescribed displacement per boundary node, aligned with the boundary order.
using DisplacementField = std::vector<Vec3Displacement>;

inline Point3 operator+(const Point3& p, const Vec3Displacement& d) {
  return {p.x + d.dx, p.y + d.dy, p.z + d.dz};
}

inline double squared_distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point3& a, const Point3& b) { return std::sqrt(squared_distance(a, b)); }

inline double norm(const Vec3Displacement& d) {
  return std::sqrt(d.dx * d.dx + d.dy * d.dy + d.dz * d.dz);
}

inline bool is_finite(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

inline bool is_finite(const Vec3Displacement& d) {
  return std::isfinite(d.dx) && std::isfinite(d.dy) && std::isfinite(d.dz);
}

}  // namespace rbfmorph

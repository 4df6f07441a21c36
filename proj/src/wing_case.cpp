#include "rbfmorph/wing_case.hpp"

#include <cmath>
#include <numbers>

#include "rbfmorph/errors.hpp"

namespace rbfmorph {

namespace {

double half_thickness(double x, double t) {
  return 5.0 * t * (0.2969 * std::sqrt(x) - 0.1260 * x - 0.3516 * x * x + 0.2843 * x * x * x - 0.1036 * x * x * x * x);
}

Point3 sub(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

}  // namespace

Mesh generate_wing_case(const WingCaseParams& p) {
  if (p.chord_points < 4 || p.span_stations < 2) throw InvalidArgument("wing case: grid too coarse");
  if (!(p.root_chord > 0.0) || !(p.span > 0.0) || !(p.taper > 0.0) || !(p.growth >= 1.0) ||
      !(p.first_layer > 0.0)) {
    throw InvalidArgument("wing case: geometric parameters must be positive");
  }
  const std::size_t nc = p.chord_points;
  const std::size_t ns = p.span_stations;
  const double tan_sweep = std::tan(p.sweep_deg * std::numbers::pi / 180.0);

  Mesh mesh;
  mesh.nodes.reserve(nc * ns * (p.layers + 1));
  for (std::size_t s = 0; s < ns; ++s) {
    const double z = p.span * static_cast<double>(s) / static_cast<double>(ns - 1);
    const double chord = p.root_chord * (1.0 - (1.0 - p.taper) * z / p.span);
    const double x_le = z * tan_sweep;
    for (std::size_t i = 0; i < nc; ++i) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(nc);
      const double xc = 0.5 * (1.0 + std::cos(theta));
      const double side = std::sin(theta) > 1e-12 ? 1.0 : (std::sin(theta) < -1e-12 ? -1.0 : 0.0);
      mesh.nodes.push_back({x_le + chord * xc, side * chord * half_thickness(xc, p.thickness), z});
    }
  }
  const std::size_t nb = nc * ns;
  mesh.boundary.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) mesh.boundary[k] = k;

  const auto id = [nc](std::size_t i, std::size_t s) { return s * nc + (i % nc); };
  for (std::size_t s = 0; s + 1 < ns; ++s) {
    for (std::size_t i = 0; i < nc; ++i) {
      mesh.cells.push_back({id(i, s), id(i + 1, s), id(i + 1, s + 1), id(i, s + 1)});
    }
  }

  std::vector<Point3> normals(nb);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t i = 0; i < nc; ++i) {
      const Point3 t1 = sub(mesh.nodes[id(i + 1, s)], mesh.nodes[id(i + nc - 1, s)]);
      const std::size_t lo = s == 0 ? 0 : s - 1;
      const std::size_t hi = s + 1 == ns ? s : s + 1;
      const Point3 t2 = sub(mesh.nodes[id(i, hi)], mesh.nodes[id(i, lo)]);
      Point3 n = cross(t1, t2);
      const double len = std::sqrt(n.x * n.x + n.y * n.y + n.z * n.z);
      normals[id(i, s)] = {n.x / len, n.y / len, n.z / len};
    }
  }

  double offset = 0.0;
  double step = p.first_layer;
  for (std::size_t layer = 0; layer < p.layers; ++layer) {
    offset += step;
    step *= p.growth;
    for (std::size_t k = 0; k < nb; ++k) {
      const Point3& b = mesh.nodes[k];
      const Point3& n = normals[k];
      mesh.nodes.push_back({b.x + offset * n.x, b.y + offset * n.y, b.z + offset * n.z});
    }
  }
  return mesh;
}

BendTwistParams wing_bend_twist(const WingCaseParams& params, double theta_m_deg) {
  return {params.root_chord, theta_m_deg, 0.25 * params.root_chord, 0.0};
}

}  // namespace rbfmorph

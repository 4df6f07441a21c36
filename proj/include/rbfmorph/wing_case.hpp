#pragma once

#include <cstddef>

#include "rbfmorph/deformers.hpp"
#include "rbfmorph/mesh_io.hpp"

namespace rbfmorph {

// Swept, tapered wing with a symmetric 4-digit section, used as a desk-scale
// benchmark. The surface is a periodic chordwise x spanwise quad grid; volume
// nodes are extruded along surface normals with geometric layer growth.
struct WingCaseParams {
  std::size_t chord_points = 160;  // around the closed section
  std::size_t span_stations = 50;
  std::size_t layers = 25;
  double root_chord = 0.805;
  double span = 1.1963;
  double taper = 0.562;
  double sweep_deg = 30.0;  // leading edge
  double thickness = 0.10;  // fraction of local chord
  double first_layer = 1e-3;
  double growth = 1.35;
};

// Boundary nodes come first (ids 0..N_b-1, section-major), then the volume
// layers. Cells are the surface quads.
Mesh generate_wing_case(const WingCaseParams& params);

// Twist about the root quarter-chord with the root chord as length scale.
BendTwistParams wing_bend_twist(const WingCaseParams& params, double theta_m_deg = 30.0);

}  // namespace rbfmorph

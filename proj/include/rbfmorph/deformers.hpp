#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <variant>

#include "rbfmorph/geometry.hpp"

namespace rbfmorph {

// Coupled bending and twisting about a z-parallel axis through (x0, y0).
// Angles are in degrees.
struct BendTwistParams {
  double b = 0.805;       // root chord length
  double theta_m = 30.0;  // maximum twist, degrees
  double x0 = 0.0;
  double y0 = 0.0;
};

// Spanwise sinusoidal heave.
struct SpanSineParams {
  double b = 1.0;  // span length
  double c = 1.0;  // mean aerodynamic chord
};

struct ZeroDeformation {};

using AnalyticDeformer = std::variant<ZeroDeformation, BendTwistParams, SpanSineParams>;

// theta(z) = theta_m sin(pi z / 2b) rotates (x, y) about (x0, y0), then
// 0.05 z sin(pi z / 2b) is added to y. Returns final minus original position.
Vec3Displacement bend_twist(const Point3& p, const BendTwistParams& params);

// dy = 0.3 c (z / b)^2 sin(8 pi z / b).
Vec3Displacement span_sine(const Point3& p, const SpanSineParams& params);

void validate(const BendTwistParams& params);
void validate(const SpanSineParams& params);

// Evaluates the deformer at every point, in order.
DisplacementField prescribe(std::span<const Point3> points, const AnalyticDeformer& deformer);

// Loads an MDK1-DISP stream for the given boundary node ids. Throws
// SourceMismatch when the file does not hold exactly one vector per id.
DisplacementField prescribe(std::span<const std::size_t> boundary_ids, std::istream& displacement_file);

}  // namespace rbfmorph

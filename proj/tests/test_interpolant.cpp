#include <doctest.h>

#include <vector>

#include "rbfmorph/interpolant.hpp"
#include "test_support.hpp"

using namespace rbfmorph;

namespace {

SupportSet support_of(std::vector<Point3> pts, std::vector<double> wx, std::vector<double> wy,
                      std::vector<double> wz) {
  SupportSet s;
  for (std::size_t k = 0; k < pts.size(); ++k) s.nodes.push_back(k);
  s.points = std::move(pts);
  s.wx = std::move(wx);
  s.wy = std::move(wy);
  s.wz = std::move(wz);
  return s;
}

}  // namespace

TEST_CASE("evaluate_displacement") {
  const KernelConfig cfg(1.0);
  SUBCASE("outside every support radius") {
    const SupportSet s = support_of({{0, 0, 0}, {1, 0, 0}}, {1, 2}, {3, 4}, {5, 6});
    const Vec3Displacement d = evaluate_displacement({5, 5, 5}, s, cfg);
    CHECK(d == Vec3Displacement{0, 0, 0});
  }
  SUBCASE("coincident with an isolated support") {
    const SupportSet s = support_of({{0, 0, 0}, {3, 0, 0}}, {1.5, 9}, {-2, 9}, {0.25, 9});
    const Vec3Displacement d = evaluate_displacement({0, 0, 0}, s, cfg);
    CHECK(d == Vec3Displacement{1.5, -2, 0.25});
  }
  SUBCASE("single support at eta = 0.5") {
    const SupportSet s = support_of({{0, 0, 0}}, {2}, {0}, {0});
    const Vec3Displacement d = evaluate_displacement({0.5, 0, 0}, s, cfg);
    CHECK(d.dx == doctest::Approx(0.375).epsilon(1e-15));
  }
  SUBCASE("empty support set") {
    CHECK_THROWS_AS(evaluate_displacement({0, 0, 0}, SupportSet{}, cfg), EmptySupportSet);
  }
}

TEST_CASE("deform_points") {
  const KernelConfig cfg(2.0);
  const SupportSet zero = support_of({{0, 0, 0}, {1, 1, 0}}, {0, 0}, {0, 0}, {0, 0});
  SUBCASE("empty input") { CHECK(deform_points({}, zero, cfg).empty()); }
  SUBCASE("zero weights leave points in place") {
    const std::vector<Point3> pts{{0.1, 0.2, 0.3}, {-1, 2, 5}, {0.5, 0.5, 0}};
    CHECK(deform_points(pts, zero, cfg) == pts);
  }
  SUBCASE("support nodes move by their prescribed displacement") {
    const BoundarySet b = test::random_instance(80, 4);
    InterpolantBuilder builder(cfg);
    for (std::size_t j = 0; j < b.size(); j += 3) builder.try_add(j, b.points[j], b.disp[j]);
    builder.solve();
    const SupportSet& s = builder.support();
    std::vector<Point3> volume(b.points.begin(), b.points.end());
    volume.push_back({9, 9, 9});
    const std::vector<Point3> moved = deform_points(volume, s, cfg);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const std::size_t j = s.nodes[k];
      const Point3 target = b.points[j] + b.disp[j];
      CHECK(std::abs(moved[j].x - target.x) <= 1e-8);
      CHECK(std::abs(moved[j].y - target.y) <= 1e-8);
      CHECK(std::abs(moved[j].z - target.z) <= 1e-8);
    }
    CHECK(moved.back() == Point3{9, 9, 9});
  }
  SUBCASE("worker count does not change the result") {
    const BoundarySet b = test::random_instance(120, 8);
    InterpolantBuilder builder(cfg);
    for (std::size_t j = 0; j < b.size(); j += 4) builder.try_add(j, b.points[j], b.disp[j]);
    builder.solve();
    CHECK(deform_points(b.points, builder.support(), cfg, 1) == deform_points(b.points, builder.support(), cfg, 7));
  }
}

TEST_CASE("interpolation is exact at supports") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const BoundarySet b = test::random_instance(150, seed);
    InterpolantBuilder builder(KernelConfig(1.5));
    for (std::size_t j = 0; j < b.size(); ++j) builder.try_add(j, b.points[j], b.disp[j]);
    builder.solve();
    CHECK(builder.max_support_residual() <= 1e-8);
    for (std::size_t k = 0; k < builder.support().size(); k += 7) {
      const std::size_t j = builder.support().nodes[k];
      const Vec3Displacement f = evaluate_displacement(b.points[j], builder.support(), builder.kernel());
      CHECK(std::abs(f.dx - b.disp[j].dx) <= 1e-8);
      CHECK(std::abs(f.dy - b.disp[j].dy) <= 1e-8);
      CHECK(std::abs(f.dz - b.disp[j].dz) <= 1e-8);
    }
  }
}

TEST_CASE("builder rejects near-duplicate candidates") {
  InterpolantBuilder builder(KernelConfig(1.0));
  CHECK(builder.try_add(0, {0, 0, 0}, {}) == InterpolantBuilder::AddResult::Added);
  CHECK(builder.try_add(1, {1e-13, 0, 0}, {}) == InterpolantBuilder::AddResult::NearDuplicate);
  CHECK(builder.try_add(2, {0, 0, 0}, {}) == InterpolantBuilder::AddResult::NearDuplicate);
  CHECK(builder.support().size() == 1);
  CHECK(builder.try_add(3, {0.5, 0, 0}, {}) == InterpolantBuilder::AddResult::Added);
  CHECK(builder.factor().order() == 2);
}

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "rbfmorph/kernel.hpp"

using namespace rbfmorph;

TEST_CASE("wendland_c2 reference values") {
  CHECK(wendland_c2(0.0) == 1.0);
  CHECK(wendland_c2(2.0) == 0.0);
  CHECK(wendland_c2(0.5) == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(wendland_c2(1.0) == 0.0);
}

TEST_CASE("wendland_c2 rejects NaN and negative input") {
  CHECK_THROWS_AS(wendland_c2(std::numeric_limits<double>::quiet_NaN()), InvalidArgument);
  CHECK_THROWS_AS(wendland_c2(-0.1), InvalidArgument);
}

TEST_CASE("wendland_c2 is nonincreasing on [0,1] and vanishes beyond") {
  const int n = 10000;
  double prev = wendland_c2(0.0);
  for (int k = 1; k <= n; ++k) {
    const double v = wendland_c2(static_cast<double>(k) / n);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
  for (double eta : {1.0, 1.0 + 1e-12, 1.5, 3.0, 1e6}) CHECK(wendland_c2(eta) == 0.0);
}

TEST_CASE("wendland_c2 is C2 at the support boundary") {
  const double h = 1e-5;
  const double d1 = (wendland_c2(1.0 + h) - wendland_c2(1.0 - h)) / (2.0 * h);
  const double d2 = (wendland_c2(1.0 + h) - 2.0 * wendland_c2(1.0) + wendland_c2(1.0 - h)) / (h * h);
  CHECK(std::abs(d1) <= 1e-6);
  CHECK(std::abs(d2) <= 1e-6);
}

TEST_CASE("normalized_distance") {
  CHECK(normalized_distance({1, 2, 3}, {1, 2, 3}, KernelConfig(2.0)) == 0.0);
  CHECK(normalized_distance({0, 0, 0}, {3, 4, 0}, KernelConfig(5.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(normalized_distance({0, 0, 0}, {1, 0, 0}, KernelConfig(4.0)) == 0.25);
}

TEST_CASE("kernel radius must be positive") {
  CHECK_THROWS_AS(KernelConfig(0.0), InvalidArgument);
  CHECK_THROWS_AS(KernelConfig(-1.0), InvalidArgument);
  CHECK_THROWS_AS(KernelConfig(std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST_CASE("assemble_phi") {
  SUBCASE("single point") {
    const std::vector<Point3> pts{{0.3, 0.1, 0.2}};
    const DenseMatrix m = assemble_phi(pts, KernelConfig(1.0));
    REQUIRE(m.size() == 1);
    CHECK(m(0, 0) == 1.0);
  }
  SUBCASE("points one radius apart give the identity") {
    const std::vector<Point3> pts{{0, 0, 0}, {4, 0, 0}};
    const DenseMatrix m = assemble_phi(pts, KernelConfig(4.0));
    CHECK(m(0, 0) == 1.0);
    CHECK(m(1, 1) == 1.0);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(1, 0) == 0.0);
  }
  SUBCASE("coincident points") {
    const std::vector<Point3> pts{{1, 1, 1}, {0, 0, 0}, {1, 1, 1}};
    CHECK_THROWS_AS(assemble_phi(pts, KernelConfig(1.0)), DuplicateNodes);
  }
  SUBCASE("symmetric with unit diagonal") {
    std::vector<Point3> pts;
    for (int k = 0; k < 40; ++k) pts.push_back({std::sin(k * 1.3), std::cos(k * 0.7), 0.05 * k});
    const DenseMatrix m = assemble_phi(pts, KernelConfig(1.7));
    for (std::size_t i = 0; i < m.size(); ++i) {
      CHECK(m(i, i) == 1.0);
      for (std::size_t j = 0; j < m.size(); ++j) CHECK(m(i, j) == m(j, i));
    }
  }
}

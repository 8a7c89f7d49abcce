#include <doctest.h>

#include <cmath>

#include "dpp/geometry.hpp"

using namespace dpp;

TEST_CASE("measures and extents") {
  Geometry i = Geometry::interval(2.5);
  CHECK(i.dim() == 1);
  CHECK(i.measure() == doctest::Approx(2.5));
  CHECK(i.bbox_extent().size() == 1);
  CHECK(i.bbox_extent()[0] == doctest::Approx(2.5));

  Geometry r = Geometry::rectangle(3.0, 0.5);
  CHECK(r.dim() == 2);
  CHECK(r.measure() == doctest::Approx(1.5));
  CHECK(r.bbox_extent()[0] == doctest::Approx(3.0));
  CHECK(r.bbox_extent()[1] == doctest::Approx(0.5));

  Geometry a = Geometry::annulus(0.3, 1.0);
  CHECK(a.measure() == doctest::Approx(M_PI * (1.0 - 0.09)));
  CHECK(a.bbox_extent()[0] == doctest::Approx(2.0));
}

TEST_CASE("containment") {
  Geometry r = Geometry::rectangle(2.0, 1.0);
  CHECK(r.contains(Vec(1.0, 0.5)));
  CHECK_FALSE(r.contains(Vec(2.1, 0.5)));
  CHECK_FALSE(r.contains(Vec(1.0, -0.1)));

  Geometry a = Geometry::annulus(0.3, 1.0);
  CHECK(a.contains(Vec(0.5, 0.0)));
  CHECK_FALSE(a.contains(Vec(0.1, 0.1)));   // inside the hole
  CHECK_FALSE(a.contains(Vec(0.9, 0.9)));   // outside the rim
}

TEST_CASE("interior samples land inside and fill the domain") {
  Rng rng(21);
  Geometry a = Geometry::annulus(0.3, 1.0);
  Matrix pts = sample_interior(a, 4000, rng);
  REQUIRE(pts.rows() == 2);
  REQUIRE(pts.cols() == 4000);
  double rmin = 2.0, rmax = 0.0;
  for (int i = 0; i < pts.cols(); ++i) {
    Vec x = pts.col(i);
    CHECK(a.contains(x));
    double r = x.norm();
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  CHECK(rmin < 0.33);
  CHECK(rmax > 0.97);
}

TEST_CASE("annulus sampling is uniform in area") {
  // With area-uniform sampling the fraction below radius r is
  // (r^2 - ri^2) / (ro^2 - ri^2); a radius-uniform sampler would be
  // visibly off at the median.
  Rng rng(33);
  Geometry a = Geometry::annulus(0.3, 1.0);
  const int n = 20000;
  Matrix pts = sample_interior(a, n, rng);
  const double r_half = std::sqrt(0.5 * (0.09 + 1.0));
  int below = 0;
  for (int i = 0; i < n; ++i) {
    if (pts.col(i).norm() < r_half) ++below;
  }
  CHECK(static_cast<double>(below) / n == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("interval samples are one-dimensional") {
  Rng rng(2);
  Geometry g = Geometry::interval(3.0);
  Matrix pts = sample_interior(g, 500, rng);
  REQUIRE(pts.rows() == 1);
  for (int i = 0; i < pts.cols(); ++i) {
    CHECK(pts(0, i) >= 0.0);
    CHECK(pts(0, i) <= 3.0);
  }
}

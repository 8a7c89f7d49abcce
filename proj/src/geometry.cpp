#include "dpp/geometry.hpp"

#include <cmath>
#include <numbers>

namespace dpp {

Geometry Geometry::interval(double length) {
  if (!(length > 0)) throw ConfigError("interval length must be positive");
  Geometry g;
  g.kind = GeometryKind::interval;
  g.length = length;
  return g;
}

Geometry Geometry::rectangle(double lx, double ly) {
  if (!(lx > 0) || !(ly > 0)) throw ConfigError("rectangle sides must be positive");
  Geometry g;
  g.kind = GeometryKind::rectangle;
  g.lx = lx;
  g.ly = ly;
  return g;
}

Geometry Geometry::annulus(double r_inner, double r_outer) {
  if (!(r_inner > 0) || !(r_outer > r_inner)) {
    throw ConfigError("annulus requires 0 < r_inner < r_outer");
  }
  Geometry g;
  g.kind = GeometryKind::annulus;
  g.r_inner = r_inner;
  g.r_outer = r_outer;
  return g;
}

double Geometry::measure() const {
  switch (kind) {
    case GeometryKind::interval: return length;
    case GeometryKind::rectangle: return lx * ly;
    case GeometryKind::annulus:
      return std::numbers::pi * (r_outer * r_outer - r_inner * r_inner);
  }
  return 0.0;
}

Vector Geometry::bbox_extent() const {
  switch (kind) {
    case GeometryKind::interval: return Vector::Constant(1, length);
    case GeometryKind::rectangle: {
      Vector e(2);
      e << lx, ly;
      return e;
    }
    case GeometryKind::annulus: return Vector::Constant(2, 2.0 * r_outer);
  }
  return Vector();
}

bool Geometry::contains(const Vec& x) const {
  switch (kind) {
    case GeometryKind::interval: return x[0] >= 0 && x[0] <= length;
    case GeometryKind::rectangle:
      return x[0] >= 0 && x[0] <= lx && x[1] >= 0 && x[1] <= ly;
    case GeometryKind::annulus: {
      double r = x.norm();
      return r >= r_inner && r <= r_outer;
    }
  }
  return false;
}

Vec Geometry::sample_point(Rng& rng) const {
  switch (kind) {
    case GeometryKind::interval: return Vec(rng.uniform(0, length), 0.0);
    case GeometryKind::rectangle: {
      double x = rng.uniform(0, lx);
      double y = rng.uniform(0, ly);
      return Vec(x, y);
    }
    case GeometryKind::annulus: {
      // Inverting the radial CDF in r^2 gives uniform density in area;
      // sampling r directly would over-weight the inner rim.
      double u = rng.uniform();
      double r = std::sqrt(r_inner * r_inner + u * (r_outer * r_outer - r_inner * r_inner));
      double t = 2.0 * std::numbers::pi * rng.uniform();
      return Vec(r * std::cos(t), r * std::sin(t));
    }
  }
  return Vec::Zero();
}

Matrix sample_interior(const Geometry& g, int n, Rng& rng) {
  Matrix pts(g.dim(), n);
  for (int i = 0; i < n; ++i) {
    Vec p = g.sample_point(rng);
    for (int j = 0; j < g.dim(); ++j) pts(j, i) = p[j];
  }
  return pts;
}

}  // namespace dpp

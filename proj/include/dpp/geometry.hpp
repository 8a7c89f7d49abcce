#pragma once

#include "dpp/rng.hpp"
#include "dpp/types.hpp"

namespace dpp {

enum class GeometryKind { interval, rectangle, annulus };

// Supported domains: [0, length], [0, lx] x [0, ly], and the annulus
// r_inner < |x| < r_outer centred at the origin.
struct Geometry {
  GeometryKind kind = GeometryKind::interval;
  double length = 1.0;
  double lx = 1.0, ly = 1.0;
  double r_inner = 0.0, r_outer = 1.0;

  static Geometry interval(double length);
  static Geometry rectangle(double lx, double ly);
  static Geometry annulus(double r_inner, double r_outer);

  int dim() const { return kind == GeometryKind::interval ? 1 : 2; }
  double measure() const;              // length in 1D, area in 2D
  Vector bbox_extent() const;          // per-axis extent, dim entries
  bool contains(const Vec& x) const;

  Vec sample_point(Rng& rng) const;    // uniform in the domain interior
};

// n uniform interior points, one per column (dim rows).
Matrix sample_interior(const Geometry& g, int n, Rng& rng);

}  // namespace dpp

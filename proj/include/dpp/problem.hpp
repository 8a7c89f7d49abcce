#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpp/geometry.hpp"
#include "dpp/rng.hpp"
#include "dpp/types.hpp"

namespace dpp {

enum class NetworkId { macro, micro };

// Piecewise-constant scalar field over horizontal bands (used for layered
// permeability). values are ordered bottom to top; edges holds the interior
// band boundaries, so values.size() == edges.size() + 1. A single value with
// no edges is a homogeneous field.
struct Bands {
  std::vector<double> values{1.0};
  std::vector<double> edges{};

  static Bands uniform(double v) { return Bands{{v}, {}}; }
  double at(double y) const;
  bool homogeneous() const { return edges.empty(); }
};

struct Material {
  double mu = 1.0;
  double beta = 1.0;   // inter-network mass transfer coefficient
  Bands k1 = Bands::uniform(1.0);
  Bands k2 = Bands::uniform(1.0);
  Vec body_force1 = Vec::Zero();  // already scaled by porosity and density
  Vec body_force2 = Vec::Zero();
};

enum class BcKind { pressure, normal_velocity };

// Which part of the domain boundary a segment occupies. Sides of the
// rectangle carry a span in absolute coordinates: y for left/right, x for
// bottom/top. Interval ends and annulus circles ignore the span.
enum class BoundaryPart { x0, x1, left, right, bottom, top, inner, outer };

struct SegmentLocator {
  BoundaryPart part = BoundaryPart::x0;
  double lo = 0.0;
  double hi = 0.0;
};

struct BoundarySegment {
  std::string id;
  NetworkId network = NetworkId::macro;
  BcKind kind = BcKind::pressure;
  double value = 0.0;  // prescribed pressure, or velocity against the outward normal
  SegmentLocator where;
};

struct ProblemSpec {
  std::string name;
  Geometry geometry;
  Material material;
  std::vector<BoundarySegment> segments;
  std::optional<SegmentLocator> observation;  // flux measurement site, inverse runs
  bool gauge_free = false;  // pure-velocity data; pressures defined up to a constant

  void validate() const;
};

double permeability_at(const ProblemSpec& p, const Vec& x, NetworkId which);

// Boundary collocation cloud. Each emitted point knows its outward normal and
// the indices of every segment whose locator contains it (both networks), so
// coincident conditions are all enforced at that point.
struct BoundarySample {
  Matrix points;    // dim x n
  Matrix normals;   // dim x n
  std::vector<int> emitted_by;            // segment index that generated the point
  std::vector<std::vector<int>> matches;  // per point, ascending segment indices
  int size() const { return static_cast<int>(points.cols()); }
};

// n_per_segment points from every segment. Throws ConfigError if some emitted
// point fails to match at least one segment of each network: that means the
// segment list leaves part of a network's boundary without a condition.
BoundarySample sample_boundary(const ProblemSpec& p, int n_per_segment, Rng& rng);

double segment_length(const Geometry& g, const SegmentLocator& where);

// Midpoint-rule nodes along a segment: n equal slices, one point per slice
// centre. Normals returned alongside. Weight per node is length / n.
struct SegmentQuadrature {
  Matrix points;
  Matrix normals;
  double weight = 0.0;
};
SegmentQuadrature segment_midpoints(const Geometry& g, const SegmentLocator& where, int n);

bool locator_contains(const Geometry& g, const SegmentLocator& where, const Vec& x,
                      double tol = 1e-9);

}  // namespace dpp

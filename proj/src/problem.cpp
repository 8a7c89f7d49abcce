#include "dpp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace dpp {

double Bands::at(double y) const {
  if (edges.empty()) return values.front();
  auto it = std::upper_bound(edges.begin(), edges.end(), y);
  return values[static_cast<std::size_t>(it - edges.begin())];
}

double permeability_at(const ProblemSpec& p, const Vec& x, NetworkId which) {
  const Bands& k = (which == NetworkId::macro) ? p.material.k1 : p.material.k2;
  // Heterogeneity is banded along the last axis: x on an interval, y in 2D.
  double c = (p.geometry.dim() == 1) ? x[0] : x[1];
  return k.at(c);
}

namespace {

bool part_matches_geometry(BoundaryPart part, GeometryKind kind) {
  switch (part) {
    case BoundaryPart::x0:
    case BoundaryPart::x1:
      return kind == GeometryKind::interval;
    case BoundaryPart::left:
    case BoundaryPart::right:
    case BoundaryPart::bottom:
    case BoundaryPart::top:
      return kind == GeometryKind::rectangle;
    case BoundaryPart::inner:
    case BoundaryPart::outer:
      return kind == GeometryKind::annulus;
  }
  return false;
}

bool side_has_span(BoundaryPart part) {
  return part == BoundaryPart::left || part == BoundaryPart::right ||
         part == BoundaryPart::bottom || part == BoundaryPart::top;
}

double side_extent(const Geometry& g, BoundaryPart part) {
  return (part == BoundaryPart::left || part == BoundaryPart::right) ? g.ly : g.lx;
}

void check_locator(const Geometry& g, const SegmentLocator& where, const std::string& who) {
  if (!part_matches_geometry(where.part, g.kind)) {
    throw ConfigError(who + ": boundary part does not belong to this geometry");
  }
  if (side_has_span(where.part)) {
    double ext = side_extent(g, where.part);
    if (!(where.lo < where.hi) || where.lo < -1e-12 || where.hi > ext + 1e-12) {
      std::ostringstream os;
      os << who << ": span [" << where.lo << ", " << where.hi << "] invalid for side of length "
         << ext;
      throw ConfigError(os.str());
    }
  }
}

// Point and outward normal at parameter t in [0,1) along the segment.
void locate(const Geometry& g, const SegmentLocator& w, double t, Vec& x, Vec& n) {
  switch (w.part) {
    case BoundaryPart::x0:
      x = Vec(0.0, 0.0);
      n = Vec(-1.0, 0.0);
      return;
    case BoundaryPart::x1:
      x = Vec(g.length, 0.0);
      n = Vec(1.0, 0.0);
      return;
    case BoundaryPart::left:
      x = Vec(0.0, w.lo + t * (w.hi - w.lo));
      n = Vec(-1.0, 0.0);
      return;
    case BoundaryPart::right:
      x = Vec(g.lx, w.lo + t * (w.hi - w.lo));
      n = Vec(1.0, 0.0);
      return;
    case BoundaryPart::bottom:
      x = Vec(w.lo + t * (w.hi - w.lo), 0.0);
      n = Vec(0.0, -1.0);
      return;
    case BoundaryPart::top:
      x = Vec(w.lo + t * (w.hi - w.lo), g.ly);
      n = Vec(0.0, 1.0);
      return;
    case BoundaryPart::inner: {
      double a = 2.0 * std::numbers::pi * t;
      Vec dir(std::cos(a), std::sin(a));
      x = g.r_inner * dir;
      n = -dir;
      return;
    }
    case BoundaryPart::outer: {
      double a = 2.0 * std::numbers::pi * t;
      Vec dir(std::cos(a), std::sin(a));
      x = g.r_outer * dir;
      n = dir;
      return;
    }
  }
}

}  // namespace

bool locator_contains(const Geometry& g, const SegmentLocator& w, const Vec& x, double tol) {
  switch (w.part) {
    case BoundaryPart::x0: return std::abs(x[0]) <= tol;
    case BoundaryPart::x1: return std::abs(x[0] - g.length) <= tol;
    case BoundaryPart::left:
      return std::abs(x[0]) <= tol && x[1] >= w.lo - tol && x[1] <= w.hi + tol;
    case BoundaryPart::right:
      return std::abs(x[0] - g.lx) <= tol && x[1] >= w.lo - tol && x[1] <= w.hi + tol;
    case BoundaryPart::bottom:
      return std::abs(x[1]) <= tol && x[0] >= w.lo - tol && x[0] <= w.hi + tol;
    case BoundaryPart::top:
      return std::abs(x[1] - g.ly) <= tol && x[0] >= w.lo - tol && x[0] <= w.hi + tol;
    case BoundaryPart::inner: return std::abs(x.norm() - g.r_inner) <= tol;
    case BoundaryPart::outer: return std::abs(x.norm() - g.r_outer) <= tol;
  }
  return false;
}

double segment_length(const Geometry& g, const SegmentLocator& w) {
  switch (w.part) {
    case BoundaryPart::x0:
    case BoundaryPart::x1:
      return 1.0;  // counting measure at an interval end
    case BoundaryPart::inner: return 2.0 * std::numbers::pi * g.r_inner;
    case BoundaryPart::outer: return 2.0 * std::numbers::pi * g.r_outer;
    default: return w.hi - w.lo;
  }
}

void ProblemSpec::validate() const {
  if (segments.empty()) throw ConfigError(name + ": no boundary segments");
  std::set<std::string> ids;
  bool has_macro = false, has_micro = false, has_pressure = false;
  for (const auto& s : segments) {
    if (s.id.empty()) throw ConfigError(name + ": segment with empty id");
    if (!ids.insert(s.id).second) throw ConfigError(name + ": duplicate segment id " + s.id);
    check_locator(geometry, s.where, name + "/" + s.id);
    if (!std::isfinite(s.value)) throw ConfigError(name + "/" + s.id + ": non-finite value");
    (s.network == NetworkId::macro ? has_macro : has_micro) = true;
    has_pressure |= s.kind == BcKind::pressure;
  }
  if (!has_macro || !has_micro) {
    throw ConfigError(name + ": each network needs at least one boundary segment");
  }
  if (gauge_free && has_pressure) {
    throw ConfigError(name + ": gauge_free set but a pressure condition exists");
  }
  if (!gauge_free && !has_pressure) {
    throw ConfigError(name +
                      ": no pressure condition anywhere; set gauge_free or add a pressure datum");
  }
  if (!(material.mu > 0)) throw ConfigError(name + ": mu must be positive");
  if (material.beta < 0) throw ConfigError(name + ": beta must be non-negative");
  for (const Bands* k : {&material.k1, &material.k2}) {
    if (k->values.size() != k->edges.size() + 1) {
      throw ConfigError(name + ": band values/edges size mismatch");
    }
    for (double v : k->values) {
      if (!(v > 0)) throw ConfigError(name + ": permeability must be positive");
    }
    if (!std::is_sorted(k->edges.begin(), k->edges.end(), std::less_equal<double>())) {
      throw ConfigError(name + ": band edges must be strictly increasing");
    }
  }
  if (observation) check_locator(geometry, *observation, name + "/observation");
}

BoundarySample sample_boundary(const ProblemSpec& p, int n_per_segment, Rng& rng) {
  if (n_per_segment <= 0) throw ConfigError("n_per_segment must be positive");
  const int dim = p.geometry.dim();
  const int total = n_per_segment * static_cast<int>(p.segments.size());
  BoundarySample out;
  out.points.resize(dim, total);
  out.normals.resize(dim, total);
  out.emitted_by.reserve(total);
  int col = 0;
  for (int si = 0; si < static_cast<int>(p.segments.size()); ++si) {
    for (int j = 0; j < n_per_segment; ++j) {
      Vec x, n;
      locate(p.geometry, p.segments[si].where, rng.uniform(), x, n);
      for (int a = 0; a < dim; ++a) {
        out.points(a, col) = x[a];
        out.normals(a, col) = n[a];
      }
      out.emitted_by.push_back(si);
      ++col;
    }
  }
  out.matches.resize(total);
  for (int i = 0; i < total; ++i) {
    Vec x = Vec::Zero();
    for (int a = 0; a < dim; ++a) x[a] = out.points(a, i);
    bool macro_hit = false, micro_hit = false;
    for (int si = 0; si < static_cast<int>(p.segments.size()); ++si) {
      if (locator_contains(p.geometry, p.segments[si].where, x, 1e-9)) {
        out.matches[i].push_back(si);
        (p.segments[si].network == NetworkId::macro ? macro_hit : micro_hit) = true;
      }
    }
    if (!macro_hit || !micro_hit) {
      std::ostringstream os;
      os << p.name << ": boundary point (" << x[0];
      if (dim > 1) os << ", " << x[1];
      os << ") has no condition for the " << (macro_hit ? "micro" : "macro")
         << " network; segments do not cover the boundary";
      throw ConfigError(os.str());
    }
  }
  return out;
}

SegmentQuadrature segment_midpoints(const Geometry& g, const SegmentLocator& w, int n) {
  if (n <= 0) throw ConfigError("quadrature node count must be positive");
  const int dim = g.dim();
  SegmentQuadrature q;
  q.points.resize(dim, n);
  q.normals.resize(dim, n);
  q.weight = segment_length(g, w) / n;
  for (int j = 0; j < n; ++j) {
    Vec x, nrm;
    locate(g, w, (j + 0.5) / n, x, nrm);
    for (int a = 0; a < dim; ++a) {
      q.points(a, j) = x[a];
      q.normals(a, j) = nrm[a];
    }
  }
  return q;
}

}  // namespace dpp

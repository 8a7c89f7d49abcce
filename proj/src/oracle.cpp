#include "dpp/oracle.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

namespace dpp {

namespace {

using Triplet = Eigen::Triplet<double>;
using Sparse = Eigen::SparseMatrix<double>;

Vector sparse_solve(const Sparse& A, const Vector& rhs, const std::string& who) {
  Eigen::SparseLU<Sparse> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) {
    throw OracleError(who + ": factorization failed; the system is singular, add a pressure datum");
  }
  Vector sol = lu.solve(rhs);
  double scale = std::max(rhs.norm(), 1.0);
  if (lu.info() != Eigen::Success || !sol.allFinite() ||
      (A * sol - rhs).norm() > 1e-8 * scale) {
    throw OracleError(who + ": solve did not reach a reliable solution");
  }
  return sol;
}

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

void require_zero_body_force(const ProblemSpec& p, const std::string& who) {
  if (p.material.body_force1.norm() != 0.0 || p.material.body_force2.norm() != 0.0) {
    throw OracleError(who + ": body forces are not supported by the grid solvers");
  }
}

// The unique segment of the given network on an interval end or annulus rim.
const BoundarySegment* end_condition(const ProblemSpec& p, NetworkId network, BoundaryPart part,
                                     const std::string& who) {
  const BoundarySegment* found = nullptr;
  for (const auto& s : p.segments) {
    if (s.network != network || s.where.part != part) continue;
    if (found) throw OracleError(who + ": duplicate end condition for one network");
    found = &s;
  }
  if (!found) throw OracleError(who + ": missing end condition for one network");
  return found;
}

// Radially weighted two-network solve shared by the interval and annulus
// grids: weight(r) = 1 gives the flat interval case.
GridSolution solve_two_point(const ProblemSpec& p, int n, double x0, double x1,
                             BoundaryPart lo_part, BoundaryPart hi_part, bool radial,
                             const std::string& who) {
  require_zero_body_force(p, who);
  p.validate();
  if (n < 5) throw OracleError(who + ": grid too coarse");
  const double h = (x1 - x0) / (n - 1);
  const double mu = p.material.mu;
  const double beta = p.material.beta;

  Vector coords(n);
  for (int i = 0; i < n; ++i) coords[i] = x0 + i * h;
  auto rw = [&](double r) { return radial ? r : 1.0; };

  std::vector<Triplet> trip;
  Vector rhs = Vector::Zero(2 * n);
  for (int net = 0; net < 2; ++net) {
    const NetworkId id = net == 0 ? NetworkId::macro : NetworkId::micro;
    const double s = net == 0 ? 1.0 : -1.0;
    const int off = net * n;
    auto kat = [&](double x) { return permeability_at(p, Vec(x, 0.0), id); };
    const auto* lo = end_condition(p, id, lo_part, who);
    const auto* hi = end_condition(p, id, hi_part, who);

    for (int j = 1; j < n - 1; ++j) {
      const double km = harmonic(kat(coords[j - 1]), kat(coords[j])) / h;
      const double kp = harmonic(kat(coords[j]), kat(coords[j + 1])) / h;
      const double tm = km * rw(coords[j] - 0.5 * h);
      const double tp = kp * rw(coords[j] + 0.5 * h);
      const double ex = s * beta * h * rw(coords[j]);
      trip.emplace_back(off + j, off + j, tm + tp);
      trip.emplace_back(off + j, off + j - 1, -tm);
      trip.emplace_back(off + j, off + j + 1, -tp);
      trip.emplace_back(off + j, j, ex);       // p1 coefficient of (p1 - p2)
      trip.emplace_back(off + j, n + j, -ex);  // p2 coefficient
    }

    if (lo->kind == BcKind::pressure) {
      trip.emplace_back(off + 0, off + 0, 1.0);
      rhs[off + 0] = lo->value;
    } else {
      // Half-cell balance with the prescribed outward flux at the low end.
      const double t = harmonic(kat(coords[0]), kat(coords[1])) / h * rw(coords[0] + 0.5 * h);
      const double ex = s * beta * (h / 2) * rw(coords[0] + 0.25 * h);
      trip.emplace_back(off + 0, off + 0, t);
      trip.emplace_back(off + 0, off + 1, -t);
      trip.emplace_back(off + 0, 0, ex);
      trip.emplace_back(off + 0, n + 0, -ex);
      rhs[off + 0] = -mu * lo->value * rw(coords[0]);
    }
    if (hi->kind == BcKind::pressure) {
      trip.emplace_back(off + n - 1, off + n - 1, 1.0);
      rhs[off + n - 1] = hi->value;
    } else {
      const double t =
          harmonic(kat(coords[n - 2]), kat(coords[n - 1])) / h * rw(coords[n - 1] - 0.5 * h);
      const double ex = s * beta * (h / 2) * rw(coords[n - 1] - 0.25 * h);
      trip.emplace_back(off + n - 1, off + n - 1, t);
      trip.emplace_back(off + n - 1, off + n - 2, -t);
      trip.emplace_back(off + n - 1, n - 1, ex);
      trip.emplace_back(off + n - 1, n + n - 1, -ex);
      rhs[off + n - 1] = -mu * hi->value * rw(coords[n - 1]);
    }
  }

  Sparse A(2 * n, 2 * n);
  A.setFromTriplets(trip.begin(), trip.end());
  Vector sol = sparse_solve(A, rhs, who);

  GridSolution g;
  g.tag = radial ? "r" : "x";
  g.coords = coords;
  g.p1 = sol.head(n);
  g.p2 = sol.tail(n);
  g.u1.resize(n);
  g.u2.resize(n);
  for (int net = 0; net < 2; ++net) {
    const NetworkId id = net == 0 ? NetworkId::macro : NetworkId::micro;
    const Vector& pr = net == 0 ? g.p1 : g.p2;
    Vector& u = net == 0 ? g.u1 : g.u2;
    for (int j = 0; j < n; ++j) {
      double dp;
      if (j == 0) {
        dp = (-3.0 * pr[0] + 4.0 * pr[1] - pr[2]) / (2.0 * h);
      } else if (j == n - 1) {
        dp = (3.0 * pr[n - 1] - 4.0 * pr[n - 2] + pr[n - 3]) / (2.0 * h);
      } else {
        dp = (pr[j + 1] - pr[j - 1]) / (2.0 * h);
      }
      u[j] = -permeability_at(p, Vec(coords[j], 0.0), id) / mu * dp;
    }
  }
  return g;
}

}  // namespace

double GridSolution::interp(const Vector& field, double x) const {
  const auto n = coords.size();
  if (x <= coords[0]) return field[0];
  if (x >= coords[n - 1]) return field[n - 1];
  const double h = coords[1] - coords[0];
  auto j = std::min<Eigen::Index>(static_cast<Eigen::Index>((x - coords[0]) / h), n - 2);
  const double t = (x - coords[j]) / (coords[j + 1] - coords[j]);
  return (1.0 - t) * field[j] + t * field[j + 1];
}

GridSolution fd_solve_1d(const ProblemSpec& p, int n_grid) {
  if (p.geometry.kind != GeometryKind::interval) {
    throw OracleError("fd_solve_1d expects an interval problem");
  }
  return solve_two_point(p, n_grid, 0.0, p.geometry.length, BoundaryPart::x0, BoundaryPart::x1,
                         false, "fd1d");
}

GridSolution fd_solve_radial(const ProblemSpec& p, int n_grid) {
  if (p.geometry.kind != GeometryKind::annulus) {
    throw OracleError("fd_solve_radial expects an annulus problem");
  }
  return solve_two_point(p, n_grid, p.geometry.r_inner, p.geometry.r_outer, BoundaryPart::inner,
                         BoundaryPart::outer, true, "fdradial");
}

double annulus_log_pressure(double r, double r_inner, double r_outer, double p_inner,
                            double p_outer) {
  return p_outer + (p_inner - p_outer) * std::log(r_outer / r) / std::log(r_outer / r_inner);
}

double GridSolution2D::interp(const Matrix& field, const Vec& x) const {
  const double hx = xs[1] - xs[0];
  const double hy = ys[1] - ys[0];
  auto i = std::clamp<Eigen::Index>(static_cast<Eigen::Index>((x[0] - xs[0]) / hx), 0,
                                    xs.size() - 2);
  auto j = std::clamp<Eigen::Index>(static_cast<Eigen::Index>((x[1] - ys[0]) / hy), 0,
                                    ys.size() - 2);
  const double tx = std::clamp((x[0] - xs[i]) / hx, 0.0, 1.0);
  const double ty = std::clamp((x[1] - ys[j]) / hy, 0.0, 1.0);
  return (1 - tx) * (1 - ty) * field(i, j) + tx * (1 - ty) * field(i + 1, j) +
         (1 - tx) * ty * field(i, j + 1) + tx * ty * field(i + 1, j + 1);
}

GridSolution2D fd_solve_rect(const ProblemSpec& p, int nx, int ny) {
  const std::string who = "fd2d";
  if (p.geometry.kind != GeometryKind::rectangle) {
    throw OracleError(who + ": expects a rectangle problem");
  }
  require_zero_body_force(p, who);
  p.validate();
  if (nx < 5 || ny < 5) throw OracleError(who + ": grid too coarse");
  const double hx = p.geometry.lx / (nx - 1);
  const double hy = p.geometry.ly / (ny - 1);
  const double mu = p.material.mu;
  const double beta = p.material.beta;
  const int nn = nx * ny;

  Vector xs(nx), ys(ny);
  for (int i = 0; i < nx; ++i) xs[i] = i * hx;
  for (int j = 0; j < ny; ++j) ys[j] = j * hy;
  auto id = [&](int i, int j) { return i + j * nx; };

  // First matching segment lookup, pressure preferred at shared endpoints.
  auto pressure_at = [&](NetworkId net, const Vec& x) -> const BoundarySegment* {
    for (const auto& s : p.segments) {
      if (s.network == net && s.kind == BcKind::pressure &&
          locator_contains(p.geometry, s.where, x, 1e-9)) {
        return &s;
      }
    }
    return nullptr;
  };
  auto velocity_at = [&](NetworkId net, const Vec& x) -> const BoundarySegment* {
    for (const auto& s : p.segments) {
      if (s.network == net && s.kind == BcKind::normal_velocity &&
          locator_contains(p.geometry, s.where, x, 1e-9)) {
        return &s;
      }
    }
    return nullptr;
  };

  std::vector<Triplet> trip;
  Vector rhs = Vector::Zero(2 * nn);
  std::vector<char> dirichlet(2 * nn, 0);

  for (int net = 0; net < 2; ++net) {
    const NetworkId nid = net == 0 ? NetworkId::macro : NetworkId::micro;
    const double s = net == 0 ? 1.0 : -1.0;
    const int off = net * nn;
    auto kat = [&](int i, int j) { return permeability_at(p, Vec(xs[i], ys[j]), nid); };

    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int r = off + id(i, j);
        const bool on_bnd = i == 0 || i == nx - 1 || j == 0 || j == ny - 1;
        if (on_bnd) {
          if (const auto* seg = pressure_at(nid, Vec(xs[i], ys[j]))) {
            trip.emplace_back(r, r, 1.0);
            rhs[r] = seg->value;
            dirichlet[r] = 1;
            continue;
          }
        }
        const double wx = (i == 0 || i == nx - 1) ? hx / 2 : hx;
        const double wy = (j == 0 || j == ny - 1) ? hy / 2 : hy;
        double diag = 0.0;
        auto couple = [&](int ii, int jj, double area, double dist) {
          const double t = harmonic(kat(i, j), kat(ii, jj)) / mu * area / dist;
          trip.emplace_back(r, off + id(ii, jj), -t);
          diag += t;
        };
        if (i > 0) couple(i - 1, j, wy, hx);
        if (i < nx - 1) couple(i + 1, j, wy, hx);
        if (j > 0) couple(i, j - 1, wx, hy);
        if (j < ny - 1) couple(i, j + 1, wx, hy);

        // Prescribed outflow through each boundary face of the half cell.
        auto boundary_face = [&](double cx, double cy, double area) {
          const auto* seg = velocity_at(nid, Vec(cx, cy));
          if (!seg) {
            throw OracleError(who + ": boundary face without a condition at (" +
                              std::to_string(cx) + ", " + std::to_string(cy) + ")");
          }
          rhs[r] -= seg->value * area;
        };
        const double ylo = ys[j] - (j > 0 ? hy / 2 : 0.0);
        const double yhi = ys[j] + (j < ny - 1 ? hy / 2 : 0.0);
        const double xlo = xs[i] - (i > 0 ? hx / 2 : 0.0);
        const double xhi = xs[i] + (i < nx - 1 ? hx / 2 : 0.0);
        if (i == 0) boundary_face(0.0, 0.5 * (ylo + yhi), wy);
        if (i == nx - 1) boundary_face(p.geometry.lx, 0.5 * (ylo + yhi), wy);
        if (j == 0) boundary_face(0.5 * (xlo + xhi), 0.0, wx);
        if (j == ny - 1) boundary_face(0.5 * (xlo + xhi), p.geometry.ly, wx);

        const double ex = s * (beta / mu) * wx * wy;
        trip.emplace_back(r, r, diag);
        trip.emplace_back(r, id(i, j), ex);
        trip.emplace_back(r, nn + id(i, j), -ex);
      }
    }
  }

  Sparse A(2 * nn, 2 * nn);
  A.setFromTriplets(trip.begin(), trip.end());
  Vector sol = sparse_solve(A, rhs, who);

  GridSolution2D g;
  g.tag = who;
  g.xs = xs;
  g.ys = ys;
  g.p1.resize(nx, ny);
  g.p2.resize(nx, ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      g.p1(i, j) = sol[id(i, j)];
      g.p2(i, j) = sol[nn + id(i, j)];
    }
  }

  auto recover = [&](const Matrix& pr, NetworkId nid, Matrix& ux, Matrix& uy) {
    ux.resize(nx, ny);
    uy.resize(nx, ny);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        double dx, dy;
        if (i == 0) {
          dx = (-3.0 * pr(0, j) + 4.0 * pr(1, j) - pr(2, j)) / (2.0 * hx);
        } else if (i == nx - 1) {
          dx = (3.0 * pr(nx - 1, j) - 4.0 * pr(nx - 2, j) + pr(nx - 3, j)) / (2.0 * hx);
        } else {
          dx = (pr(i + 1, j) - pr(i - 1, j)) / (2.0 * hx);
        }
        if (j == 0) {
          dy = (-3.0 * pr(i, 0) + 4.0 * pr(i, 1) - pr(i, 2)) / (2.0 * hy);
        } else if (j == ny - 1) {
          dy = (3.0 * pr(i, ny - 1) - 4.0 * pr(i, ny - 2) + pr(i, ny - 3)) / (2.0 * hy);
        } else {
          dy = (pr(i, j + 1) - pr(i, j - 1)) / (2.0 * hy);
        }
        const double k = permeability_at(p, Vec(xs[i], ys[j]), nid);
        ux(i, j) = -k / mu * dx;
        uy(i, j) = -k / mu * dy;
      }
    }
  };
  recover(g.p1, NetworkId::macro, g.u1x, g.u1y);
  recover(g.p2, NetworkId::micro, g.u2x, g.u2y);

  if (p.observation) {
    // Conservative flux through the observation nodes: each node's boundary
    // outflow is the residue of its interior-face balance, so the sum matches
    // the domain's discrete mass budget exactly.
    double q = 0.0;
    for (int net = 0; net < 2; ++net) {
      const NetworkId nid = net == 0 ? NetworkId::macro : NetworkId::micro;
      const double s = net == 0 ? 1.0 : -1.0;
      const int off = net * nn;
      auto kat = [&](int i, int j) { return permeability_at(p, Vec(xs[i], ys[j]), nid); };
      auto pv = [&](int i, int j) { return sol[off + id(i, j)]; };
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          const bool on_bnd = i == 0 || i == nx - 1 || j == 0 || j == ny - 1;
          if (!on_bnd || !locator_contains(p.geometry, *p.observation, Vec(xs[i], ys[j]), 1e-9)) {
            continue;
          }
          const double wx = (i == 0 || i == nx - 1) ? hx / 2 : hx;
          const double wy = (j == 0 || j == ny - 1) ? hy / 2 : hy;
          double balance = 0.0;
          auto face = [&](int ii, int jj, double area, double dist) {
            balance += harmonic(kat(i, j), kat(ii, jj)) / mu * area / dist * (pv(ii, jj) - pv(i, j));
          };
          if (i > 0) face(i - 1, j, wy, hx);
          if (i < nx - 1) face(i + 1, j, wy, hx);
          if (j > 0) face(i, j - 1, wx, hy);
          if (j < ny - 1) face(i, j + 1, wx, hy);
          q += balance - s * (beta / mu) * (sol[id(i, j)] - sol[nn + id(i, j)]) * wx * wy;
        }
      }
    }
    g.q_outlet = q;
  }
  return g;
}

FieldFn layered_exact_state(const ProblemSpec& p) {
  const std::string who = "layered_exact";
  if (p.geometry.kind != GeometryKind::rectangle) {
    throw OracleError(who + ": expects a rectangle problem");
  }
  require_zero_body_force(p, who);
  p.validate();
  if (!p.gauge_free) {
    throw OracleError(who + ": the patch state fixes pressure only up to a constant");
  }
  const double mu = p.material.mu;
  const double c = p.geometry.lx / 2.0;  // zero-mean pressure datum

  // The uniform-flow state must reproduce every prescribed boundary value.
  for (const auto& seg : p.segments) {
    SegmentQuadrature q = segment_midpoints(p.geometry, seg.where, 3);
    for (int j = 0; j < q.points.cols(); ++j) {
      Vec x(q.points(0, j), q.points(1, j));
      Vec n(q.normals(0, j), q.normals(1, j));
      const double k = permeability_at(p, x, seg.network);
      const double expect = (k / mu) * n[0];  // u = (k/mu, 0)
      if (std::abs(seg.value - expect) > 1e-12 * std::max(1.0, std::abs(expect))) {
        throw OracleError(who + ": boundary data on segment " + seg.id +
                          " is inconsistent with the uniform-flow state");
      }
    }
  }

  ProblemSpec copy = p;
  return [copy, mu, c](const Vec& x) {
    FieldSample f;
    f.p1 = f.p2 = c - x[0];
    f.grad_p1 = f.grad_p2 = Vec(-1.0, 0.0);
    f.u1 = Vec(permeability_at(copy, x, NetworkId::macro) / mu, 0.0);
    f.u2 = Vec(permeability_at(copy, x, NetworkId::micro) / mu, 0.0);
    f.div_u1 = f.div_u2 = 0.0;
    return f;
  };
}

FieldFn grid_fields(const GridSolution& g, bool radial) {
  return [g, radial](const Vec& x) {
    const double c = radial ? x.norm() : x[0];
    const Vec dir = radial && x.norm() > 0.0 ? Vec(x / x.norm()) : Vec(1.0, 0.0);
    FieldSample f;
    f.p1 = g.interp(g.p1, c);
    f.p2 = g.interp(g.p2, c);
    f.u1 = g.interp(g.u1, c) * dir;
    f.u2 = g.interp(g.u2, c) * dir;
    return f;
  };
}

FieldFn grid_fields(const GridSolution2D& g) {
  return [g](const Vec& x) {
    FieldSample f;
    f.p1 = g.interp(g.p1, x);
    f.p2 = g.interp(g.p2, x);
    f.u1 = Vec(g.interp(g.u1x, x), g.interp(g.u1y, x));
    f.u2 = Vec(g.interp(g.u2x, x), g.interp(g.u2y, x));
    return f;
  };
}

FieldErrors l2_error(const FieldFn& model, const FieldFn& reference, const std::vector<Vec>& pts,
                     const ErrorOptions& opt) {
  const auto n = pts.size();
  if (n == 0) throw ConfigError("l2_error needs at least one evaluation point");
  std::vector<FieldSample> fm(n), fr(n);
  for (std::size_t i = 0; i < n; ++i) {
    fm[i] = model(pts[i]);
    fr[i] = reference(pts[i]);
  }
  double shift_m = 0.0, shift_r = 0.0;
  if (opt.align_pressure_datum) {
    for (std::size_t i = 0; i < n; ++i) {
      shift_m += fm[i].p1;
      shift_r += fr[i].p1;
    }
    shift_m /= static_cast<double>(n);
    shift_r /= static_cast<double>(n);
  }
  double num_p1 = 0, den_p1 = 0, num_p2 = 0, den_p2 = 0;
  double num_u1 = 0, den_u1 = 0, num_u2 = 0, den_u2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rp1 = fr[i].p1 - shift_r, mp1 = fm[i].p1 - shift_m;
    const double rp2 = fr[i].p2 - shift_r, mp2 = fm[i].p2 - shift_m;
    num_p1 += (mp1 - rp1) * (mp1 - rp1);
    den_p1 += rp1 * rp1;
    num_p2 += (mp2 - rp2) * (mp2 - rp2);
    den_p2 += rp2 * rp2;
    num_u1 += (fm[i].u1 - fr[i].u1).squaredNorm();
    den_u1 += fr[i].u1.squaredNorm();
    num_u2 += (fm[i].u2 - fr[i].u2).squaredNorm();
    den_u2 += fr[i].u2.squaredNorm();
  }
  FieldErrors e;
  e.p1 = std::sqrt(num_p1) / std::max(std::sqrt(den_p1), opt.eps_norm);
  e.p2 = std::sqrt(num_p2) / std::max(std::sqrt(den_p2), opt.eps_norm);
  e.u1 = std::sqrt(num_u1) / std::max(std::sqrt(den_u1), opt.eps_norm);
  e.u2 = std::sqrt(num_u2) / std::max(std::sqrt(den_u2), opt.eps_norm);
  return e;
}

}  // namespace dpp

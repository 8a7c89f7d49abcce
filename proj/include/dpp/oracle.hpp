#pragma once

#include <string>
#include <vector>

#include "dpp/physics.hpp"
#include "dpp/problem.hpp"

namespace dpp {

// Nodal reference solution on a uniform 1D grid (interval problems) or a
// uniform radial grid (axisymmetric annulus problems). u holds the x- or
// r-component of the network velocities, recovered from the pressures at
// second order.
struct GridSolution {
  std::string tag;
  Vector coords;
  Vector p1, p2, u1, u2;

  double interp(const Vector& field, double x) const;  // piecewise linear
};

// Conservative two-network finite-volume solve of the coupled pressure
// system; boundary data is read from the problem's segments. Throws
// OracleError for singular systems (missing pressure datum) or unsupported
// data (non-zero body force, missing end conditions).
GridSolution fd_solve_1d(const ProblemSpec& p, int n_grid);
GridSolution fd_solve_radial(const ProblemSpec& p, int n_grid);

// Tensor-grid reference for rectangle problems. Fields are nx-by-ny, column
// j holding the values at height ys[j]. q_outlet is the discrete conservative
// flux of u1+u2 through the observation segment (zero if the problem has no
// observation).
struct GridSolution2D {
  std::string tag;
  Vector xs, ys;
  Matrix p1, p2, u1x, u1y, u2x, u2y;
  double q_outlet = 0.0;

  double interp(const Matrix& field, const Vec& x) const;  // bilinear
};

GridSolution2D fd_solve_rect(const ProblemSpec& p, int nx, int ny);

// Steady single-network annulus pressure with Dirichlet data at both rims;
// the exact profile is logarithmic in r.
double annulus_log_pressure(double r, double r_inner, double r_outer, double p_inner,
                            double p_outer);

// Exact uniform-flow state for the layered patch problem: per-layer constant
// horizontal velocities, unit pressure drop, zero exchange. Validates that
// the problem's boundary data actually matches this state and throws
// OracleError if not.
FieldFn layered_exact_state(const ProblemSpec& p);

// Views a nodal grid solution as a continuous field map. 1D solutions carry
// the velocity along x; radial ones return it along the outward radial
// direction at the query point.
FieldFn grid_fields(const GridSolution& g, bool radial);
FieldFn grid_fields(const GridSolution2D& g);

struct FieldErrors {
  double p1 = 0.0, p2 = 0.0, u1 = 0.0, u2 = 0.0;
};

struct ErrorOptions {
  bool align_pressure_datum = false;  // subtract each side's mean macro pressure
  double eps_norm = 1e-12;
};

// Relative L2 error per field over the given points. Vector fields stack
// their components. With align_pressure_datum, both pressures on each side
// are shifted by that side's mean macro pressure before comparing, which is
// the right comparison for gauge-free problems.
FieldErrors l2_error(const FieldFn& model, const FieldFn& reference, const std::vector<Vec>& pts,
                     const ErrorOptions& opt = {});

}  // namespace dpp

#pragma once

#include <functional>
#include <optional>

#include "dpp/net.hpp"
#include "dpp/problem.hpp"

namespace dpp {

// Pointwise state of the four flow fields and the derivatives the governing
// equations need. Unused components stay zero in 1D.
struct FieldSample {
  double p1 = 0.0, p2 = 0.0;
  Vec grad_p1 = Vec::Zero(), grad_p2 = Vec::Zero();
  Vec u1 = Vec::Zero(), u2 = Vec::Zero();
  double div_u1 = 0.0, div_u2 = 0.0;
};

// A trained (or training) model bundle: network, its fixed feature map, and
// the conditioning value fed to the beta input slot when the net has one.
struct Surrogate {
  const Network* net = nullptr;
  const Encoder* enc = nullptr;
  std::optional<double> beta_feature;
};

FieldSample eval_fields(const Surrogate& m, const Vec& x);
FieldSample fields_from_tape(const ModelTape& tape, const HeadLayout& lay, int col);

// First-order flow residuals at a point:
//   r1, r2: momentum balance of each network,
//   r3, r4: continuity with inter-network exchange.
struct Residuals {
  Vec r1 = Vec::Zero(), r2 = Vec::Zero();
  double r3 = 0.0, r4 = 0.0;
};

// beta overrides the material value during inversion, when the transfer
// coefficient is a live unknown rather than problem data.
Residuals residuals(const FieldSample& f, const ProblemSpec& p, const Vec& x,
                    std::optional<double> beta = std::nullopt);

double residual_indicator(const Residuals& r, int dim);

// Volumetric exchange from macro to micro network; positive when the micro
// pressure exceeds the macro pressure.
double transfer_rate(double p1, double p2, double beta, double mu);

using FieldFn = std::function<FieldSample(const Vec&)>;

FieldFn model_fields(const Surrogate& m);

// Homogeneous least-squares energy of a field state: interior momentum and
// continuity residuals without body force, plus |u.n|^2 on velocity segments
// and |p|^2 on pressure segments. Zero exactly on the zero state and
// quadratic under scaling. Interior nodes are Monte Carlo with weight
// measure/n; boundary nodes are midpoint rules per segment.
double ls_energy(const FieldFn& fields, const ProblemSpec& p, int n_interior, int n_per_segment,
                 Rng& rng);

}  // namespace dpp

#pragma once

#include <optional>

#include "dpp/physics.hpp"
#include "dpp/problem.hpp"

namespace dpp {

struct LossWeights {
  double pde = 1.0, bc = 1.0, obs = 1.0;
};

struct LossBreakdown {
  double pde = 0.0;
  double bc = 0.0;
  std::optional<double> obs;

  double total(const LossWeights& w) const {
    return w.pde * pde + w.bc * bc + (obs ? w.obs * *obs : 0.0);
  }
};

// Flux observation attached to the objective during inversion: fixed
// quadrature nodes on the observation segment and the measured total flux.
struct FluxObservation {
  SegmentQuadrature quad;
  double q_obs = 0.0;
};

// Per-task gradients, split so the loss balancer can reweight using the
// current epoch's losses before the tasks are combined. The beta_* scalars
// are d(task)/d(beta value): the conditioning-input cotangent plus, for the
// interior task, the explicit dependence of the continuity residuals on
// beta. The caller owns the softplus chain to the raw parameter.
struct TaskGrads {
  Vector pde, bc, obs;
  double beta_pde = 0.0, beta_bc = 0.0, beta_obs = 0.0;

  void reset(Eigen::Index n) {
    pde = Vector::Zero(n);
    bc = Vector::Zero(n);
    obs = Vector::Zero(n);
    beta_pde = beta_bc = beta_obs = 0.0;
  }
  Vector combined(const LossWeights& w) const {
    return w.pde * pde + w.bc * bc + w.obs * obs;
  }
  double beta_combined(const LossWeights& w) const {
    return w.pde * beta_pde + w.bc * beta_bc + w.obs * beta_obs;
  }
};

// Evaluates the composite objective over collocation clouds, batched through
// the model tape in fixed-size chunks.
//
//   pde: mean over interior points of the summed squared flow residuals.
//   bc:  mean over emitted boundary points of the squared mismatch of every
//        segment condition that covers the point.
//   obs: squared error of the predicted boundary flux (inverse runs only).
class LossEvaluator {
 public:
  LossEvaluator(const Network& net, const Encoder& enc, const ProblemSpec& problem);

  LossBreakdown eval(const Matrix& interior, const BoundarySample& boundary,
                     const FluxObservation* obs, std::optional<double> beta);

  // Unweighted per-task losses and gradients in one pass. grads must be
  // reset to the parameter count beforehand.
  LossBreakdown eval_task_grads(const Matrix& interior, const BoundarySample& boundary,
                                const FluxObservation* obs, std::optional<double> beta,
                                TaskGrads& grads);

  // Weighted-total convenience used where the weights are frozen.
  LossBreakdown eval_grad(const Matrix& interior, const BoundarySample& boundary,
                          const FluxObservation* obs, std::optional<double> beta,
                          const LossWeights& w, Vector& grad, double* dbeta_value = nullptr);

  // Residual norms per point, for refinement scoring.
  Vector indicators(const Matrix& pts, std::optional<double> beta);

  // Predicted total flux through fixed quadrature nodes.
  double flux(const SegmentQuadrature& quad, std::optional<double> beta);

 private:
  LossBreakdown run(const Matrix& interior, const BoundarySample& boundary,
                    const FluxObservation* obs, std::optional<double> beta, TaskGrads* grads);
  double flux_inner(const SegmentQuadrature& quad, std::optional<double> feed);

  const ProblemSpec& problem_;
  HeadLayout lay_;
  ModelTape tape_;
  Matrix ybar_;
  std::vector<Matrix> dybar_;
};

}  // namespace dpp

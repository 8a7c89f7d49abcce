#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dpp/adapt.hpp"
#include "dpp/loss.hpp"
#include "dpp/optim.hpp"

namespace dpp {

struct ModelSpec {
  EncoderSpec encoder;  // empty scales pick up the geometry's bounding box
  NetworkSpec net;
};

struct TrainConfig {
  int rounds = 4;        // total rounds; the cloud is enriched between rounds
  int epochs_adam = 1000;
  int batch_size = 0;    // interior points per Adam step; 0 uses the full cloud
  double lr = 1e-3;
  double lr_floor = 1e-5;
  int plateau_patience = 200;
  double grad_clip = 1.0;
  int n_interior = 256;
  int n_boundary = 8;    // points per boundary segment
  WeightingConfig weighting;
  RefineConfig refine;   // kappa = 0 means 10% of n_interior; capacity = 0 means 4x
  LbfgsConfig lbfgs;
  std::uint64_t seed = 1;
};

struct EpochRecord {
  int round = 0;
  int epoch = 0;
  double pde = 0.0, bc = 0.0;
  std::optional<double> obs;
  double w_pde = 1.0, w_bc = 1.0, w_obs = 1.0;
  double total = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> history;  // rounds * epochs_adam rows
  std::vector<EnrichReport> enrichments;
  LossBreakdown final_losses;        // full clouds, after the last polish
  LossWeights final_weights;
  double initial_indicator_mean = 0.0;
  double final_indicator_mean = 0.0;
  int lbfgs_iters = 0;
  int polish_reverts = 0;
  std::optional<double> beta_estimate;  // conditioned transfer coefficient
  Matrix interior_cloud;                // final interior collocation points
};

// A model ready to train or evaluate: the fixed feature map, the network,
// and for inverse problems the raw (pre-softplus) transfer coefficient.
struct TrainedModel {
  std::unique_ptr<Encoder> enc;
  std::unique_ptr<Network> net;
  std::optional<double> beta_raw;

  std::optional<double> beta_value() const;  // softplus of beta_raw
  Surrogate surrogate() const { return {net.get(), enc.get(), beta_value()}; }
};

double softplus(double x);
double softplus_inverse(double y);

// Draws the feature map and initial weights from named substreams of the
// seed. Inversion models (beta_input set) start the raw coefficient so that
// softplus(beta_raw) = beta_guess.
TrainedModel init_model(const ModelSpec& spec, const ProblemSpec& problem, std::uint64_t seed,
                        double beta_guess = 0.5);

// Two-stage adaptive training: per round, mini-batch Adam with loss
// rebalancing, then full-cloud quasi-Newton polishing under frozen weights
// (reverted if it ends worse than it started), then residual-guided cloud
// enrichment except after the final round. obs must be present exactly when
// the model has a beta input.
TrainReport train(TrainedModel& model, const ProblemSpec& problem, const TrainConfig& cfg,
                  const FluxObservation* obs = nullptr);

}  // namespace dpp

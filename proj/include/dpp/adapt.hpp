#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "dpp/loss.hpp"

namespace dpp {

struct WeightingConfig {
  double alpha = 1.0;  // maximum extra weight a slow task can earn
  int window = 50;     // epochs of improvement rates kept per task
  double rho = 2.0;    // min fastest/slowest rate ratio before rebalancing
};

// Loss balancing driven by relative improvement rates. Every epoch each
// task's relative one-step improvement is pushed into a fixed-length window;
// once all windows are full and the mean rates have spread beyond rho, the
// fastest task keeps weight 1 and slower tasks are boosted up to 1 + alpha.
// Weights persist between triggering updates.
class AdaptiveWeights {
 public:
  AdaptiveWeights(WeightingConfig cfg, int n_tasks);

  // losses must arrive in a fixed task order, one value per task.
  const std::vector<double>& update(const std::vector<double>& losses);
  const std::vector<double>& weights() const { return weights_; }

 private:
  WeightingConfig cfg_;
  std::vector<double> weights_;
  std::vector<std::deque<double>> rates_;
  std::vector<double> prev_;
  bool has_prev_ = false;
};

struct RefineConfig {
  int kappa = 25;        // points admitted per enrichment
  double gamma = 3.0;    // candidate pool oversampling factor
  int capacity = 1024;   // hard cap on the interior cloud
};

struct EnrichReport {
  int candidates = 0;
  int admitted = 0;
  int cloud_size = 0;  // after append and any capacity subsampling
};

// Residual-guided growth of the interior cloud: score a fresh candidate pool
// by residual norm, keep the kappa worst offenders (ties broken by candidate
// order), append them, then thin uniformly back to capacity if needed.
// Boundary clouds never change.
EnrichReport enrich(Matrix& cloud, LossEvaluator& loss, const ProblemSpec& problem,
                    const RefineConfig& cfg, std::optional<double> beta, Rng& sampling);

// Indices of the kappa highest scores, descending, ties by lower index.
std::vector<int> top_k_indices(const Vector& scores, int k);

}  // namespace dpp

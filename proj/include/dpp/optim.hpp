#pragma once

#include <functional>

#include "dpp/types.hpp"

namespace dpp {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double grad_clip = 1.0;  // global-norm ceiling; <= 0 disables clipping
};

class Adam {
 public:
  Adam(AdamConfig cfg, Eigen::Index n);
  void step(Vector& x, const Vector& grad);
  void set_lr(double lr) { cfg_.lr = lr; }
  double lr() const { return cfg_.lr; }
  int steps_taken() const { return t_; }

 private:
  AdamConfig cfg_;
  Vector m_, v_;
  int t_ = 0;
};

// Halves the learning rate after `patience` epochs without a new best loss,
// never dipping below `floor`.
class PlateauScheduler {
 public:
  PlateauScheduler(double initial_lr, double factor, int patience, double floor);
  double observe(double loss);
  double lr() const { return lr_; }

 private:
  double lr_, factor_, floor_;
  int patience_, stale_ = 0;
  double best_;
};

// Objective contract: fill grad and return the loss at x.
using Objective = std::function<double(const Vector& x, Vector& grad)>;

struct LbfgsConfig {
  int max_iters = 500;
  int history = 50;
  double grad_tol = 1e-9;
  double c1 = 1e-4;  // sufficient decrease
  double c2 = 0.9;   // curvature
  int max_line_iters = 30;
};

enum class LbfgsStatus { converged, max_iters, line_search_failed };

struct LbfgsResult {
  LbfgsStatus status = LbfgsStatus::max_iters;
  int iters = 0;
  int evals = 0;
  double final_loss = 0.0;
};

// Two-loop recursion with a strong Wolfe line search. x is updated in place;
// on line-search failure x keeps the best iterate reached so far. Throws
// DivergenceError if the objective is non-finite at the starting point.
LbfgsResult lbfgs_minimize(const Objective& f, Vector& x, const LbfgsConfig& cfg);

}  // namespace dpp

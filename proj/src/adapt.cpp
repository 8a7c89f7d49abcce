#include "dpp/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dpp {

namespace {
constexpr double kTiny = 1e-12;
}

AdaptiveWeights::AdaptiveWeights(WeightingConfig cfg, int n_tasks)
    : cfg_(cfg),
      weights_(n_tasks, 1.0),
      rates_(n_tasks),
      prev_(n_tasks, 0.0) {
  if (n_tasks < 1) throw ConfigError("weighting needs at least one task");
  if (cfg_.window < 1) throw ConfigError("weighting window must be positive");
  if (!(cfg_.alpha >= 0)) throw ConfigError("weighting alpha must be non-negative");
  if (!(cfg_.rho >= 1)) throw ConfigError("weighting rho must be at least 1");
}

const std::vector<double>& AdaptiveWeights::update(const std::vector<double>& losses) {
  const std::size_t nt = weights_.size();
  if (losses.size() != nt) throw ConfigError("weighting task count changed between updates");
  if (!has_prev_) {
    prev_ = losses;
    has_prev_ = true;
    return weights_;
  }
  for (std::size_t i = 0; i < nt; ++i) {
    double rate = (prev_[i] - losses[i]) / (prev_[i] + kTiny);
    if (rates_[i].size() == static_cast<std::size_t>(cfg_.window)) rates_[i].pop_front();
    rates_[i].push_back(std::max(rate, 0.0));
    prev_[i] = losses[i];
  }
  for (const auto& r : rates_) {
    if (r.size() < static_cast<std::size_t>(cfg_.window)) return weights_;
  }
  std::vector<double> mean(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    mean[i] = std::accumulate(rates_[i].begin(), rates_[i].end(), 0.0) / cfg_.window;
  }
  std::size_t fastest = 0;
  double vmax = mean[0], vmin = mean[0];
  for (std::size_t i = 1; i < nt; ++i) {
    if (mean[i] > vmax) {
      vmax = mean[i];
      fastest = i;
    }
    vmin = std::min(vmin, mean[i]);
  }
  if (vmax == vmin) return weights_;              // no spread to act on
  if (vmax / std::max(vmin, kTiny) <= cfg_.rho) return weights_;
  for (std::size_t i = 0; i < nt; ++i) {
    weights_[i] =
        (i == fastest) ? 1.0 : 1.0 + cfg_.alpha * (vmax - mean[i]) / (vmax - vmin);
  }
  return weights_;
}

std::vector<int> top_k_indices(const Vector& scores, int k) {
  std::vector<int> idx(static_cast<std::size_t>(scores.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  if (k < static_cast<int>(idx.size())) idx.resize(k);
  return idx;
}

EnrichReport enrich(Matrix& cloud, LossEvaluator& loss, const ProblemSpec& problem,
                    const RefineConfig& cfg, std::optional<double> beta, Rng& sampling) {
  if (cfg.kappa < 1) throw ConfigError("refinement kappa must be positive");
  if (!(cfg.gamma >= 1)) throw ConfigError("refinement gamma must be at least 1");
  EnrichReport rep;
  rep.candidates = static_cast<int>(std::ceil(cfg.gamma * cfg.kappa));
  Matrix pool = sample_interior(problem.geometry, rep.candidates, sampling);
  Vector scores = loss.indicators(pool, beta);
  std::vector<int> keep = top_k_indices(scores, cfg.kappa);
  rep.admitted = static_cast<int>(keep.size());

  Matrix grown(cloud.rows(), cloud.cols() + rep.admitted);
  grown.leftCols(cloud.cols()) = cloud;
  for (int i = 0; i < rep.admitted; ++i) {
    grown.col(cloud.cols() + i) = pool.col(keep[i]);
  }
  if (grown.cols() > cfg.capacity) {
    auto chosen = sampling.sample_without_replacement(
        static_cast<std::size_t>(grown.cols()), static_cast<std::size_t>(cfg.capacity));
    Matrix thin(grown.rows(), cfg.capacity);
    for (int i = 0; i < cfg.capacity; ++i) thin.col(i) = grown.col(static_cast<int>(chosen[i]));
    grown = std::move(thin);
  }
  cloud = std::move(grown);
  rep.cloud_size = static_cast<int>(cloud.cols());
  return rep;
}

}  // namespace dpp

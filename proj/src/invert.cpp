#include "dpp/invert.hpp"

namespace dpp {

InversionResult recover_beta(const ModelSpec& spec, const ProblemSpec& problem,
                             const TrainConfig& train_cfg, const InversionConfig& inv_cfg,
                             double q_obs, TrainedModel* model_out) {
  if (!problem.observation) {
    throw ConfigError(problem.name + ": inversion needs an observation segment");
  }
  if (!spec.net.beta_input) {
    throw ConfigError("inversion needs a network with the beta conditioning input");
  }
  if (!(inv_cfg.beta_guess > 0)) throw ConfigError("beta guess must be positive");

  FluxObservation obs;
  obs.quad = segment_midpoints(problem.geometry, *problem.observation, inv_cfg.quadrature_n);
  obs.q_obs = q_obs;

  TrainedModel model = init_model(spec, problem, train_cfg.seed, inv_cfg.beta_guess);
  InversionResult res;
  res.report = train(model, problem, train_cfg, &obs);
  res.beta_hat = *model.beta_value();
  LossEvaluator loss(*model.net, *model.enc, problem);
  res.q_predicted = loss.flux(obs.quad, model.beta_value());
  if (model_out) *model_out = std::move(model);
  return res;
}

std::vector<std::pair<double, double>> beta_flux_sweep(const ProblemSpec& problem,
                                                       const std::vector<double>& betas, int nx,
                                                       int ny) {
  if (!problem.observation) {
    throw ConfigError(problem.name + ": flux sweep needs an observation segment");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(betas.size());
  for (double b : betas) {
    ProblemSpec variant = problem;
    variant.material.beta = b;
    out.emplace_back(b, fd_solve_rect(variant, nx, ny).q_outlet);
  }
  return out;
}

}  // namespace dpp

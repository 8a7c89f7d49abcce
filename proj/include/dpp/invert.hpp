#pragma once

#include <utility>
#include <vector>

#include "dpp/oracle.hpp"
#include "dpp/train.hpp"

namespace dpp {

struct InversionConfig {
  double beta_guess = 0.5;
  int quadrature_n = 64;  // flux quadrature nodes on the observation segment
};

struct InversionResult {
  double beta_hat = 0.0;     // recovered transfer coefficient
  double q_predicted = 0.0;  // model flux at the recovered coefficient
  TrainReport report;
};

// Builds the observation term from the problem's observation segment and the
// measured flux, then trains the beta-conditioned model. The recovered
// coefficient is softplus of the raw trainable, so it stays positive.
InversionResult recover_beta(const ModelSpec& spec, const ProblemSpec& problem,
                             const TrainConfig& train_cfg, const InversionConfig& inv_cfg,
                             double q_obs, TrainedModel* model_out = nullptr);

// Reference beta -> outlet-flux map from the grid oracle, for generating
// synthetic observations and checking identifiability.
std::vector<std::pair<double, double>> beta_flux_sweep(const ProblemSpec& problem,
                                                       const std::vector<double>& betas, int nx,
                                                       int ny);

}  // namespace dpp

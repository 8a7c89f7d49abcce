#include "dpp/train.hpp"

#include <cmath>

namespace dpp {

double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double softplus_inverse(double y) {
  if (!(y > 0)) throw ConfigError("softplus inverse needs a positive value");
  // y + log(1 - exp(-y)), stable for small and large y
  return y + std::log(-std::expm1(-y));
}

std::optional<double> TrainedModel::beta_value() const {
  if (!beta_raw) return std::nullopt;
  return softplus(*beta_raw);
}

TrainedModel init_model(const ModelSpec& spec, const ProblemSpec& problem, std::uint64_t seed,
                        double beta_guess) {
  problem.validate();
  EncoderSpec enc_spec = spec.encoder;
  if (enc_spec.scales.size() == 0) enc_spec.scales = problem.geometry.bbox_extent();
  if (enc_spec.scales.size() != problem.geometry.dim()) {
    throw ConfigError("encoder scales do not match the problem dimension");
  }
  Rng root(seed);
  Rng enc_stream = root.stream("encoder");
  Rng init_stream = root.stream("init");
  TrainedModel m;
  m.enc = std::make_unique<Encoder>(enc_spec, enc_stream);
  m.net = std::make_unique<Network>(spec.net, m.enc->out_dim(), init_stream);
  if (spec.net.beta_input) m.beta_raw = softplus_inverse(beta_guess);
  return m;
}

namespace {

struct FlatParams {
  // The optimization vector is the network parameters with beta_raw
  // appended for inverse models.
  static Vector gather(const TrainedModel& m) {
    Vector theta = m.net->params();
    if (m.beta_raw) {
      theta.conservativeResize(theta.size() + 1);
      theta[theta.size() - 1] = *m.beta_raw;
    }
    return theta;
  }
  static void scatter(TrainedModel& m, const Vector& theta) {
    if (m.beta_raw) {
      m.net->set_params(theta.head(theta.size() - 1));
      m.beta_raw = theta[theta.size() - 1];
    } else {
      m.net->set_params(theta);
    }
  }
};

}  // namespace

TrainReport train(TrainedModel& model, const ProblemSpec& problem, const TrainConfig& cfg,
                  const FluxObservation* obs) {
  problem.validate();
  if (cfg.rounds < 1) throw ConfigError("training needs at least one round");
  if (cfg.epochs_adam < 1) throw ConfigError("training needs at least one epoch per round");
  if (cfg.n_interior < 1) throw ConfigError("training needs interior points");
  const bool inverse = model.net->spec().beta_input;
  if (inverse != (obs != nullptr)) {
    throw ConfigError(inverse ? "inverse training needs a flux observation"
                              : "flux observation given to a forward model");
  }

  Rng root(cfg.seed);
  Rng sampling = root.stream("sampling");
  Rng batching = root.stream("batching");

  Matrix cloud = sample_interior(problem.geometry, cfg.n_interior, sampling);
  BoundarySample boundary = sample_boundary(problem, cfg.n_boundary, sampling);

  RefineConfig refine = cfg.refine;
  if (refine.kappa == 0) refine.kappa = std::max(1, cfg.n_interior / 10);
  if (refine.capacity == 0) refine.capacity = 4 * cfg.n_interior;

  LossEvaluator loss(*model.net, *model.enc, problem);
  const int n_tasks = inverse ? 3 : 2;
  AdaptiveWeights balancer(cfg.weighting, n_tasks);
  LossWeights weights;

  Vector theta = FlatParams::gather(model);
  const auto np = theta.size();
  const auto np_net = model.net->param_count();
  AdamConfig adam_cfg;
  adam_cfg.lr = cfg.lr;
  adam_cfg.grad_clip = cfg.grad_clip;
  Adam adam(adam_cfg, np);
  PlateauScheduler sched(cfg.lr, 0.5, cfg.plateau_patience, cfg.lr_floor);

  TrainReport report;
  report.history.reserve(static_cast<std::size_t>(cfg.rounds) * cfg.epochs_adam);
  report.initial_indicator_mean = loss.indicators(cloud, model.beta_value()).mean();

  TaskGrads grads;
  Vector grad(np);
  for (int round = 0; round < cfg.rounds; ++round) {
    for (int epoch = 0; epoch < cfg.epochs_adam; ++epoch) {
      const Matrix* batch = &cloud;
      Matrix subset;
      if (cfg.batch_size > 0 && cfg.batch_size < cloud.cols()) {
        auto idx = batching.sample_without_replacement(
            static_cast<std::size_t>(cloud.cols()), static_cast<std::size_t>(cfg.batch_size));
        subset.resize(cloud.rows(), cfg.batch_size);
        for (int i = 0; i < cfg.batch_size; ++i) {
          subset.col(i) = cloud.col(static_cast<Eigen::Index>(idx[i]));
        }
        batch = &subset;
      }

      grads.reset(np_net);
      LossBreakdown bd = loss.eval_task_grads(*batch, boundary, obs, model.beta_value(), grads);

      // Rebalance from this epoch's losses before combining the gradients.
      std::vector<double> task_losses{bd.pde, bd.bc};
      if (inverse) task_losses.push_back(*bd.obs);
      const auto& w = balancer.update(task_losses);
      weights.pde = w[0];
      weights.bc = w[1];
      if (inverse) weights.obs = w[2];

      const double total = bd.total(weights);
      if (!std::isfinite(total)) {
        throw DivergenceError("training loss became non-finite during the Adam stage");
      }

      grad.head(np_net) = grads.combined(weights);
      if (inverse) {
        grad[np - 1] = grads.beta_combined(weights) / (1.0 + std::exp(-theta[np - 1]));
      }
      adam.set_lr(sched.lr());
      adam.step(theta, grad);
      FlatParams::scatter(model, theta);
      sched.observe(total);

      EpochRecord rec;
      rec.round = round;
      rec.epoch = epoch;
      rec.pde = bd.pde;
      rec.bc = bd.bc;
      rec.obs = bd.obs;
      rec.w_pde = weights.pde;
      rec.w_bc = weights.bc;
      rec.w_obs = inverse ? weights.obs : 1.0;
      rec.total = total;
      report.history.push_back(rec);
    }

    // Quasi-Newton polish on the full cloud with the weights frozen.
    if (cfg.lbfgs.max_iters > 0) {
      const Vector theta_entry = theta;
      Vector probe_grad(np);
      auto objective = [&](const Vector& x, Vector& g) {
        FlatParams::scatter(model, x);
        g.setZero(np);
        Vector gnet = Vector::Zero(np_net);
        double dbeta = 0.0;
        LossBreakdown bd =
            loss.eval_grad(cloud, boundary, obs, model.beta_value(), weights, gnet, &dbeta);
        g.head(np_net) = gnet;
        if (inverse) g[np - 1] = dbeta / (1.0 + std::exp(-x[np - 1]));
        return bd.total(weights);
      };
      const double entry_loss = objective(theta, probe_grad);
      LbfgsResult res = lbfgs_minimize(objective, theta, cfg.lbfgs);
      report.lbfgs_iters += res.iters;
      if (res.final_loss > entry_loss) {
        theta = theta_entry;
        ++report.polish_reverts;
      }
      FlatParams::scatter(model, theta);
    }

    if (round + 1 < cfg.rounds) {
      report.enrichments.push_back(
          enrich(cloud, loss, problem, refine, model.beta_value(), sampling));
    }
  }

  report.final_losses = loss.eval(cloud, boundary, obs, model.beta_value());
  report.final_weights = weights;
  report.final_indicator_mean = loss.indicators(cloud, model.beta_value()).mean();
  if (inverse) report.beta_estimate = model.beta_value();
  report.interior_cloud = std::move(cloud);
  return report;
}

}  // namespace dpp

#include "dpp/runner.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "dpp/checkpoint.hpp"
#include "dpp/config.hpp"
#include "dpp/io.hpp"
#include "dpp/presets.hpp"

namespace dpp {

namespace {

using nlohmann::json;

constexpr int kGrid1D = 4097;
constexpr int kRectBase = 128;  // cells across the shorter rectangle axis

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

ResolvedConfig load_config(const RunOptions& opt) {
  std::optional<std::string> text;
  if (opt.config_path) text = read_text(*opt.config_path);
  std::vector<std::string> overrides = opt.overrides;
  if (opt.seed) overrides.push_back("train.seed=" + std::to_string(*opt.seed));
  return resolve_config(opt.preset, text, overrides);
}

std::pair<int, int> rect_grid(const Geometry& g) {
  const double h = std::min(g.lx, g.ly) / kRectBase;
  return {static_cast<int>(std::lround(g.lx / h)) + 1,
          static_cast<int>(std::lround(g.ly / h)) + 1};
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

json losses_json(const LossBreakdown& l, const LossWeights& w) {
  return json{{"pde", l.pde},
              {"bc", l.bc},
              {"obs", l.obs ? json(*l.obs) : json(nullptr)},
              {"total", l.total(w)}};
}

json weights_json(const LossWeights& w) {
  return json{{"pde", w.pde}, {"bc", w.bc}, {"obs", w.obs}};
}

json report_json(const TrainReport& rep) {
  return json{{"losses", losses_json(rep.final_losses, rep.final_weights)},
              {"weights", weights_json(rep.final_weights)},
              {"indicator_initial", rep.initial_indicator_mean},
              {"indicator_final", rep.final_indicator_mean},
              {"lbfgs_iters", rep.lbfgs_iters},
              {"polish_reverts", rep.polish_reverts},
              {"enrichments", rep.enrichments.size()},
              {"cloud_size", rep.interior_cloud.cols()}};
}

// Samples the exact layered state onto a tensor grid so the oracle command
// has something to emit for pure-velocity problems, where the linear solver
// would be singular.
GridSolution2D sampled_state(const FieldFn& fields, const Geometry& g, int nx, int ny) {
  GridSolution2D out;
  out.tag = "exact";
  out.xs = Vector::LinSpaced(nx, 0.0, g.lx);
  out.ys = Vector::LinSpaced(ny, 0.0, g.ly);
  for (Matrix* m : {&out.p1, &out.p2, &out.u1x, &out.u1y, &out.u2x, &out.u2y})
    m->resize(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const FieldSample f = fields(Vec(out.xs[i], out.ys[j]));
      out.p1(i, j) = f.p1;
      out.p2(i, j) = f.p2;
      out.u1x(i, j) = f.u1.x();
      out.u1y(i, j) = f.u1.y();
      out.u2x(i, j) = f.u2.x();
      out.u2y(i, j) = f.u2.y();
    }
  return out;
}

int cmd_solve(const RunOptions& opt) {
  const ResolvedConfig rc = load_config(opt);
  if (rc.preset.model.net.beta_input)
    throw ConfigError("this configuration conditions on beta; use the invert command");
  Stopwatch watch;
  TrainedModel model = init_model(rc.preset.model, rc.preset.problem, rc.preset.train.seed);
  const TrainReport rep = train(model, rc.preset.problem, rc.preset.train);

  const auto& mat = rc.preset.problem.material;
  write_json(opt.out_dir / "config.json", rc.tree);
  write_text_atomic(opt.out_dir / "history.csv", history_csv(rep.history));
  write_text_atomic(opt.out_dir / "fields.csv",
                    fields_csv(model_fields(model.surrogate()), rc.preset.problem.geometry,
                               mat.beta, mat.mu));
  write_json(opt.out_dir / "checkpoint.json", checkpoint_to_json(model));

  json summary = report_json(rep);
  summary["command"] = "solve";
  summary["problem"] = rc.preset.problem.name;
  summary["seed"] = rc.preset.train.seed;
  summary["wall_seconds"] = watch.seconds();
  write_json(opt.out_dir / "summary.json", summary);
  return 0;
}

int cmd_invert(const RunOptions& opt) {
  if (!opt.q_obs) throw ConfigError("invert requires --q-obs");
  const ResolvedConfig rc = load_config(opt);
  if (!rc.preset.model.net.beta_input)
    throw ConfigError("this configuration has no beta input; use an inversion preset");
  Stopwatch watch;
  TrainedModel model;
  const InversionResult res = recover_beta(rc.preset.model, rc.preset.problem, rc.preset.train,
                                           rc.preset.inversion, *opt.q_obs, &model);

  const auto& mat = rc.preset.problem.material;
  write_json(opt.out_dir / "config.json", rc.tree);
  write_text_atomic(opt.out_dir / "history.csv", history_csv(res.report.history));
  write_text_atomic(opt.out_dir / "fields.csv",
                    fields_csv(model_fields(model.surrogate()), rc.preset.problem.geometry,
                               res.beta_hat, mat.mu));
  write_json(opt.out_dir / "checkpoint.json", checkpoint_to_json(model));

  json summary = report_json(res.report);
  summary["command"] = "invert";
  summary["problem"] = rc.preset.problem.name;
  summary["seed"] = rc.preset.train.seed;
  summary["q_obs"] = *opt.q_obs;
  summary["q_predicted"] = res.q_predicted;
  summary["beta_hat"] = res.beta_hat;
  summary["wall_seconds"] = watch.seconds();
  write_json(opt.out_dir / "summary.json", summary);
  return 0;
}

int cmd_oracle(const RunOptions& opt) {
  const ResolvedConfig rc = load_config(opt);
  const ProblemSpec& p = rc.preset.problem;
  json summary{{"command", "oracle"}, {"problem", p.name}};

  if (p.geometry.dim() == 1) {
    const GridSolution g = fd_solve_1d(p, kGrid1D);
    write_text_atomic(opt.out_dir / "oracle.csv", grid1d_csv(g));
    summary["n_grid"] = kGrid1D;
  } else if (p.geometry.kind == GeometryKind::annulus) {
    const GridSolution g = fd_solve_radial(p, kGrid1D);
    write_text_atomic(opt.out_dir / "oracle.csv", grid1d_csv(g));
    summary["n_grid"] = kGrid1D;
  } else {
    const auto [nx, ny] = rect_grid(p.geometry);
    GridSolution2D g;
    if (p.gauge_free)
      g = sampled_state(layered_exact_state(p), p.geometry, nx, ny);
    else
      g = fd_solve_rect(p, nx, ny);
    write_text_atomic(opt.out_dir / "oracle.csv", grid2d_csv(g));
    summary["nx"] = nx;
    summary["ny"] = ny;
    if (p.observation) summary["q_outlet"] = g.q_outlet;
  }
  write_json(opt.out_dir / "summary.json", summary);
  return 0;
}

int cmd_sweep(const RunOptions& opt) {
  const ResolvedConfig rc = load_config(opt);
  const ProblemSpec& p = rc.preset.problem;
  if (!p.observation) throw ConfigError("sweep needs a problem with an observation segment");
  if (p.geometry.kind != GeometryKind::rectangle)
    throw ConfigError("sweep supports rectangle problems only");

  std::vector<double> betas = opt.betas;
  if (betas.empty()) {
    const int n = 12;
    for (int i = 0; i < n; ++i)
      betas.push_back(0.1 * std::pow(5.0 / 0.1, i / (n - 1.0)));
  }
  const auto [nx, ny] = rect_grid(p.geometry);
  const auto bq = beta_flux_sweep(p, betas, nx, ny);

  // Strictly monotone in either direction; the sign of Q depends on whether
  // the observation segment sees inflow or outflow.
  bool increasing = true, decreasing = true;
  for (std::size_t i = 1; i < bq.size(); ++i) {
    if (bq[i].second <= bq[i - 1].second) increasing = false;
    if (bq[i].second >= bq[i - 1].second) decreasing = false;
  }
  const bool monotone = increasing || decreasing;

  write_text_atomic(opt.out_dir / "sweep.csv", sweep_csv(bq));
  write_json(opt.out_dir / "summary.json", json{{"command", "sweep"},
                                                {"problem", p.name},
                                                {"nx", nx},
                                                {"ny", ny},
                                                {"monotone", monotone}});
  return 0;
}

int cmd_bench(const RunOptions& opt) {
  const ResolvedConfig rc = load_config(opt);
  const ProblemSpec& p = rc.preset.problem;

  FieldFn reference;
  if (p.geometry.dim() == 1)
    reference = grid_fields(fd_solve_1d(p, 2049), false);
  else if (p.geometry.kind == GeometryKind::annulus)
    reference = grid_fields(fd_solve_radial(p, 2049), true);
  else if (p.gauge_free)
    reference = layered_exact_state(p);

  Rng sampler(rc.preset.train.seed);
  Matrix pts = sample_interior(p.geometry, 512, sampler);
  std::vector<Vec> eval_pts;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) eval_pts.emplace_back(pts.col(i));
  ErrorOptions eopt;
  eopt.align_pressure_datum = p.gauge_free;

  std::string csv = "depth,width,err_p1,err_p2,err_u1,err_u2,total_loss,seconds,diverged\n";
  for (int depth : {4, 6, 8})
    for (int width : {64, 128, 256}) {
      Preset cell = rc.preset;
      cell.model.net.depth = depth;
      cell.model.net.width = width;
      Stopwatch watch;
      FieldErrors err{};
      double total = std::numeric_limits<double>::quiet_NaN();
      bool diverged = false;
      try {
        TrainedModel model = init_model(cell.model, cell.problem, cell.train.seed);
        const TrainReport rep = train(model, cell.problem, cell.train);
        total = rep.final_losses.total(rep.final_weights);
        if (reference)
          err = l2_error(model_fields(model.surrogate()), reference, eval_pts, eopt);
        else
          err = {std::nan(""), std::nan(""), std::nan(""), std::nan("")};
      } catch (const DivergenceError&) {
        diverged = true;
        err = {std::nan(""), std::nan(""), std::nan(""), std::nan("")};
      }
      csv += std::to_string(depth) + "," + std::to_string(width) + "," + format_full(err.p1) +
             "," + format_full(err.p2) + "," + format_full(err.u1) + "," + format_full(err.u2) +
             "," + format_full(total) + "," + format_full(watch.seconds()) + "," +
             (diverged ? "1" : "0") + "\n";
    }

  write_text_atomic(opt.out_dir / "bench.csv", csv);
  write_json(opt.out_dir / "summary.json",
             json{{"command", "bench"}, {"problem", p.name}, {"cells", 9}});
  return 0;
}

int cmd_export(const RunOptions& opt) {
  const auto config_path = opt.out_dir / "config.json";
  const auto ckpt_path = opt.out_dir / "checkpoint.json";
  if (!std::filesystem::exists(config_path) || !std::filesystem::exists(ckpt_path))
    throw ConfigError("export needs config.json and checkpoint.json in the output directory");

  json tree;
  json ckpt;
  try {
    tree = json::parse(read_text(config_path));
    ckpt = json::parse(read_text(ckpt_path));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("export: ") + e.what());
  }
  const Preset ps = preset_from_json(tree);
  const TrainedModel model = checkpoint_from_json(ckpt);
  const double beta = model.beta_value().value_or(ps.problem.material.beta);

  write_text_atomic(opt.out_dir / "fields_long.csv",
                    fields_long_csv(model_fields(model.surrogate()), ps.problem.geometry, beta,
                                    ps.problem.material.mu));
  return 0;
}

}  // namespace

int run_command(const RunOptions& opt) {
  std::filesystem::create_directories(opt.out_dir);
  if (opt.command == "solve") return cmd_solve(opt);
  if (opt.command == "invert") return cmd_invert(opt);
  if (opt.command == "oracle") return cmd_oracle(opt);
  if (opt.command == "sweep") return cmd_sweep(opt);
  if (opt.command == "bench") return cmd_bench(opt);
  if (opt.command == "export") return cmd_export(opt);
  throw ConfigError("unknown command: " + opt.command);
}

}  // namespace dpp

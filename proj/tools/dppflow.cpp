#include <cstdio>
#include <exception>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpp/io.hpp"
#include "dpp/runner.hpp"
#include "dpp/types.hpp"

namespace {

int report_failure(const dpp::RunOptions& opt, const char* type, const std::string& message,
                   int code) {
  std::fprintf(stderr, "error (%s): %s\n", type, message.c_str());
  try {
    dpp::write_text_atomic(
        opt.out_dir / "error.json",
        nlohmann::json{{"type", type}, {"message", message}, {"exit_code", code}}.dump(2) + "\n");
  } catch (...) {
    // the error record is best effort; the exit code carries the result
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mesh-free solver for two-network porous media flow"};
  app.require_subcommand(1);

  dpp::RunOptions opt;
  std::string out_dir = ".";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--preset", opt.preset, "Built-in problem name");
    sub->add_option("--config", opt.config_path, "Configuration file (JSON)");
    sub->add_option("--override", opt.overrides, "Dotted-path override, e.g. train.lr=5e-4")
        ->take_all();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", opt.seed, "Run seed (shorthand for train.seed)");
    return sub;
  };

  add_common(app.add_subcommand("solve", "Train a forward surrogate"));
  auto* invert = add_common(app.add_subcommand("invert", "Recover the transfer coefficient"));
  invert->add_option("--q-obs", opt.q_obs, "Observed outlet flux");
  add_common(app.add_subcommand("oracle", "Write the grid reference solution"));
  auto* sweep = add_common(app.add_subcommand("sweep", "Tabulate outlet flux versus beta"));
  sweep->add_option("--beta", opt.betas, "Coefficients to probe")->take_all();
  add_common(app.add_subcommand("bench", "Width-depth refinement study"));
  add_common(app.add_subcommand("export", "Re-emit a run's fields as long-format plot data"));

  CLI11_PARSE(app, argc, argv);
  opt.command = app.get_subcommands().front()->get_name();
  opt.out_dir = out_dir;

  try {
    return dpp::run_command(opt);
  } catch (const dpp::ConfigError& e) {
    return report_failure(opt, "config", e.what(), 2);
  } catch (const dpp::DivergenceError& e) {
    return report_failure(opt, "divergence", e.what(), 3);
  } catch (const dpp::OracleError& e) {
    return report_failure(opt, "oracle", e.what(), 4);
  } catch (const std::exception& e) {
    return report_failure(opt, "internal", e.what(), 1);
  }
}

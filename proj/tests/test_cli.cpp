#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "dpp/io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(DPPFLOW_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir(const char* tag) : path(fs::temp_directory_path() / tag) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

// Shrinks a preset run far enough for a smoke test.
const char* kTinyOverrides =
    " --override train.rounds=1 --override train.epochs_adam=5"
    " --override train.n_interior=8 --override train.lbfgs.max_iters=2"
    " --override model.net.width=8 --override model.net.depth=2"
    " --override model.encoder.n_freq=2";

}  // namespace

TEST_CASE("help and argument errors") {
  CHECK(run("--help") == 0);
  CHECK(run("") != 0);            // a subcommand is required
  CHECK(run("frobnicate") != 0);  // unknown subcommand
}

TEST_CASE("oracle writes the grid reference") {
  TempDir dir("dpp_cli_oracle");
  CHECK(run("oracle --preset pressure1d --out " + dir.str()) == 0);
  CHECK(fs::exists(dir.path / "oracle.csv"));
  json summary = json::parse(dpp::read_text(dir.path / "summary.json"));
  CHECK(summary["command"] == "oracle");
}

TEST_CASE("solve emits the full artifact set and export replays it") {
  TempDir dir("dpp_cli_solve");
  CHECK(run("solve --preset pressure1d --seed 4 --out " + dir.str() + kTinyOverrides) == 0);
  for (const char* f :
       {"config.json", "history.csv", "fields.csv", "checkpoint.json", "summary.json"}) {
    CHECK(fs::exists(dir.path / f));
  }
  json summary = json::parse(dpp::read_text(dir.path / "summary.json"));
  CHECK(summary["command"] == "solve");
  CHECK(summary["problem"] == "pressure1d");
  CHECK(summary.contains("losses"));
  CHECK(summary.contains("indicator_final"));

  // The seed flag is shorthand for train.seed and lands in the config tree.
  json config = json::parse(dpp::read_text(dir.path / "config.json"));
  CHECK(config["train"]["seed"] == 4);

  CHECK(run("export --out " + dir.str()) == 0);
  CHECK(fs::exists(dir.path / "fields_long.csv"));
}

TEST_CASE("config failures exit with code 2 and an error record") {
  TempDir dir("dpp_cli_err");
  CHECK(run("solve --preset nope --out " + dir.str()) == 2);
  json err = json::parse(dpp::read_text(dir.path / "error.json"));
  CHECK(err["type"] == "config");
  CHECK(err["exit_code"] == 2);

  CHECK(run("solve --preset pressure1d --override train.nope=1 --out " + dir.str()) == 2);

  std::ofstream(dir.path / "bad.json") << R"({"preset": "pressure1d", "trian": {}})";
  CHECK(run("solve --config " + (dir.path / "bad.json").string() + " --out " + dir.str()) == 2);
}

TEST_CASE("export before any run is a config error") {
  TempDir dir("dpp_cli_export");
  CHECK(run("export --out " + dir.str()) == 2);
}

TEST_CASE("sweep tabulates the oracle flux per coefficient") {
  TempDir dir("dpp_cli_sweep");
  CHECK(run("sweep --preset inverse2d --beta 0.5 --beta 2.0 --out " + dir.str()) == 0);
  std::string csv = dpp::read_text(dir.path / "sweep.csv");
  CHECK(csv.rfind("beta,q\n", 0) == 0);
  CHECK(csv.find("\n0.5,") != std::string::npos);
  CHECK(csv.find("\n2,") != std::string::npos);
}

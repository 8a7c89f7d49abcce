#include <doctest.h>

#include "dpp/checkpoint.hpp"
#include "dpp/presets.hpp"

using namespace dpp;
using nlohmann::json;

TEST_CASE("trained state round-trips exactly, bytes included") {
  Preset ps = make_preset("pressure1d");
  ps.model.net.width = 12;
  ps.model.net.depth = 3;
  TrainedModel model = init_model(ps.model, ps.problem, 99);

  json j = checkpoint_to_json(model);
  TrainedModel back = checkpoint_from_json(j);

  CHECK((back.net->params() - model.net->params()).norm() == 0.0);
  CHECK((back.enc->frequencies() - model.enc->frequencies()).norm() == 0.0);
  CHECK(back.enc->spec().n_freq == model.enc->spec().n_freq);
  CHECK_FALSE(back.beta_raw.has_value());

  // Saving the restored model reproduces the original text.
  CHECK(checkpoint_to_json(back).dump() == j.dump());
}

TEST_CASE("restored model evaluates identically") {
  Preset ps = make_preset("radial2d");
  ps.model.net.width = 10;
  ps.model.net.depth = 2;
  ps.model.encoder.n_freq = 4;
  TrainedModel model = init_model(ps.model, ps.problem, 123);
  TrainedModel back = checkpoint_from_json(checkpoint_to_json(model));

  for (double r : {0.35, 0.6, 0.95}) {
    Vec x(r, 0.0);
    FieldSample a = eval_fields(model.surrogate(), x);
    FieldSample b = eval_fields(back.surrogate(), x);
    CHECK(a.p1 == b.p1);
    CHECK(a.p2 == b.p2);
    CHECK((a.u1 - b.u1).norm() == 0.0);
    CHECK(a.div_u2 == b.div_u2);
  }
}

TEST_CASE("inversion models carry the raw transfer coefficient") {
  Preset ps = make_preset("inverse2d");
  ps.model.net.width = 8;
  ps.model.net.depth = 2;
  TrainedModel model = init_model(ps.model, ps.problem, 7, 1.3);
  REQUIRE(model.beta_raw.has_value());
  CHECK(model.beta_value().value() == doctest::Approx(1.3).epsilon(1e-12));

  TrainedModel back = checkpoint_from_json(checkpoint_to_json(model));
  REQUIRE(back.beta_raw.has_value());
  CHECK(*back.beta_raw == *model.beta_raw);
  CHECK(back.net->spec().beta_input);
}

TEST_CASE("malformed checkpoints are rejected") {
  Preset ps = make_preset("pressure1d");
  ps.model.net.width = 6;
  TrainedModel model = init_model(ps.model, ps.problem, 1);
  json j = checkpoint_to_json(model);

  SUBCASE("missing block") {
    j.erase("encoder");
    CHECK_THROWS_AS(checkpoint_from_json(j), ConfigError);
  }
  SUBCASE("wrong parameter count") {
    j["params"].push_back(0.0);
    CHECK_THROWS_AS(checkpoint_from_json(j), ConfigError);
  }
  SUBCASE("bad activation") {
    j["net"]["activation"] = "relu";
    CHECK_THROWS_AS(checkpoint_from_json(j), ConfigError);
  }
}

#include "dpp/checkpoint.hpp"

namespace dpp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("checkpoint: " + msg); }

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix rows_matrix(const json& j, int cols_expected) {
  if (!j.is_array()) fail("frequency table must be an array of rows");
  Matrix m(j.size(), cols_expected);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols_expected)
      fail("frequency row has the wrong width");
    for (int c = 0; c < cols_expected; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

const json& req(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key '") + key + "'");
  return *it;
}

}  // namespace

json checkpoint_to_json(const TrainedModel& model) {
  const Encoder& enc = *model.enc;
  const Network& net = *model.net;

  json scales = json::array();
  for (Eigen::Index i = 0; i < enc.spec().scales.size(); ++i)
    scales.push_back(enc.spec().scales[i]);

  json heads = json::array();
  for (const auto& h : net.spec().heads)
    heads.push_back(json{{"name", h.name}, {"dim", h.dim}, {"scale", h.scale}});

  const Vector theta = net.params();
  json params = json::array();
  for (Eigen::Index i = 0; i < theta.size(); ++i) params.push_back(theta[i]);

  return json{
      {"schema_version", 1},
      {"encoder", json{{"n_freq", enc.spec().n_freq},
                       {"tau", enc.spec().tau},
                       {"scales", scales},
                       {"frequencies", matrix_rows(enc.frequencies())}}},
      {"net", json{{"depth", net.spec().depth},
                   {"width", net.spec().width},
                   {"activation", net.spec().activation == Activation::swish ? "swish" : "tanh"},
                   {"swish_slope_init", net.spec().swish_slope_init},
                   {"heads", heads},
                   {"beta_input", net.spec().beta_input}}},
      {"params", params},
      {"beta_raw", model.beta_raw ? json(*model.beta_raw) : json(nullptr)}};
}

TrainedModel checkpoint_from_json(const json& j) {
  if (!j.is_object()) fail("top level must be an object");
  if (req(j, "schema_version").get<int>() != 1) fail("unsupported schema_version");

  const json& e = req(j, "encoder");
  EncoderSpec espec;
  espec.n_freq = req(e, "n_freq").get<int>();
  espec.tau = req(e, "tau").get<double>();
  const json& scales = req(e, "scales");
  espec.scales = Vector(scales.size());
  for (std::size_t i = 0; i < scales.size(); ++i) espec.scales[i] = scales[i].get<double>();

  const json& n = req(j, "net");
  NetworkSpec nspec;
  nspec.depth = req(n, "depth").get<int>();
  nspec.width = req(n, "width").get<int>();
  const std::string act = req(n, "activation").get<std::string>();
  if (act != "swish" && act != "tanh") fail("bad activation '" + act + "'");
  nspec.activation = act == "swish" ? Activation::swish : Activation::tanh;
  nspec.swish_slope_init = req(n, "swish_slope_init").get<double>();
  for (const auto& h : req(n, "heads"))
    nspec.heads.push_back(
        HeadSpec{req(h, "name").get<std::string>(), req(h, "dim").get<int>(),
                 req(h, "scale").get<double>()});
  nspec.beta_input = req(n, "beta_input").get<bool>();

  TrainedModel model;
  model.enc = std::make_unique<Encoder>(
      espec, rows_matrix(req(e, "frequencies"), static_cast<int>(espec.scales.size())));

  Rng scratch(0);
  model.net = std::make_unique<Network>(nspec, model.enc->out_dim(), scratch);
  const json& params = req(j, "params");
  if (static_cast<int>(params.size()) != model.net->param_count())
    fail("parameter vector has the wrong length");
  Vector theta(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) theta[i] = params[i].get<double>();
  model.net->set_params(theta);

  const json& braw = req(j, "beta_raw");
  if (!braw.is_null()) model.beta_raw = braw.get<double>();
  return model;
}

}  // namespace dpp

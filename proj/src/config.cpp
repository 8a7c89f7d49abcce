#include "dpp/config.hpp"

#include <initializer_list>

namespace dpp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::string where(const std::string& ctx, const char* key) {
  return ctx.empty() ? std::string(key) : ctx + "." + key;
}

void check_keys(const json& j, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail("config: '" + ctx + "' must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) fail("config: unknown key '" + where(ctx, item.key().c_str()) + "'");
  }
}

const json& req(const json& j, const std::string& ctx, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail("config: missing key '" + where(ctx, key) + "'");
  return *it;
}

double num(const json& j, const std::string& ctx, const char* key) {
  const json& v = req(j, ctx, key);
  if (!v.is_number()) fail("config: '" + where(ctx, key) + "' must be a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& ctx, const char* key) {
  const json& v = req(j, ctx, key);
  if (!v.is_number_integer()) fail("config: '" + where(ctx, key) + "' must be an integer");
  return v.get<int>();
}

std::uint64_t uinteger(const json& j, const std::string& ctx, const char* key) {
  const json& v = req(j, ctx, key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0))
    fail("config: '" + where(ctx, key) + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

bool boolean(const json& j, const std::string& ctx, const char* key) {
  const json& v = req(j, ctx, key);
  if (!v.is_boolean()) fail("config: '" + where(ctx, key) + "' must be a boolean");
  return v.get<bool>();
}

std::string str(const json& j, const std::string& ctx, const char* key) {
  const json& v = req(j, ctx, key);
  if (!v.is_string()) fail("config: '" + where(ctx, key) + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> num_list(const json& j, const std::string& ctx, const char* key) {
  const json& v = req(j, ctx, key);
  if (!v.is_array()) fail("config: '" + where(ctx, key) + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) fail("config: '" + where(ctx, key) + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// --- enum spellings ---

const char* network_name(NetworkId n) { return n == NetworkId::macro ? "macro" : "micro"; }
NetworkId network_from(const std::string& s, const std::string& ctx) {
  if (s == "macro") return NetworkId::macro;
  if (s == "micro") return NetworkId::micro;
  fail("config: '" + ctx + "': bad network '" + s + "'");
}

const char* kind_name(BcKind k) { return k == BcKind::pressure ? "pressure" : "normal_velocity"; }
BcKind kind_from(const std::string& s, const std::string& ctx) {
  if (s == "pressure") return BcKind::pressure;
  if (s == "normal_velocity") return BcKind::normal_velocity;
  fail("config: '" + ctx + "': bad condition kind '" + s + "'");
}

constexpr const char* kPartNames[] = {"x0",  "x1",     "left", "right",
                                      "bottom", "top", "inner", "outer"};
const char* part_name(BoundaryPart p) { return kPartNames[static_cast<int>(p)]; }
BoundaryPart part_from(const std::string& s, const std::string& ctx) {
  for (int i = 0; i < 8; ++i)
    if (s == kPartNames[i]) return static_cast<BoundaryPart>(i);
  fail("config: '" + ctx + "': bad boundary part '" + s + "'");
}

const char* activation_name(Activation a) { return a == Activation::swish ? "swish" : "tanh"; }
Activation activation_from(const std::string& s, const std::string& ctx) {
  if (s == "swish") return Activation::swish;
  if (s == "tanh") return Activation::tanh;
  fail("config: '" + ctx + "': bad activation '" + s + "'");
}

// --- serialization ---

json bands_to_json(const Bands& b) {
  return json{{"values", b.values}, {"edges", b.edges}};
}

Bands bands_from_json(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"values", "edges"});
  Bands b;
  b.values = num_list(j, ctx, "values");
  b.edges = num_list(j, ctx, "edges");
  return b;
}

json geometry_to_json(const Geometry& g) {
  switch (g.kind) {
    case GeometryKind::interval:
      return json{{"kind", "interval"}, {"length", g.length}};
    case GeometryKind::rectangle:
      return json{{"kind", "rectangle"}, {"lx", g.lx}, {"ly", g.ly}};
    default:
      return json{{"kind", "annulus"}, {"r_inner", g.r_inner}, {"r_outer", g.r_outer}};
  }
}

Geometry geometry_from_json(const json& j, const std::string& ctx) {
  const std::string kind = str(j, ctx, "kind");
  if (kind == "interval") {
    check_keys(j, ctx, {"kind", "length"});
    return Geometry::interval(num(j, ctx, "length"));
  }
  if (kind == "rectangle") {
    check_keys(j, ctx, {"kind", "lx", "ly"});
    return Geometry::rectangle(num(j, ctx, "lx"), num(j, ctx, "ly"));
  }
  if (kind == "annulus") {
    check_keys(j, ctx, {"kind", "r_inner", "r_outer"});
    return Geometry::annulus(num(j, ctx, "r_inner"), num(j, ctx, "r_outer"));
  }
  fail("config: '" + ctx + "': bad geometry kind '" + kind + "'");
}

json locator_to_json(const SegmentLocator& w) {
  return json{{"part", part_name(w.part)}, {"lo", w.lo}, {"hi", w.hi}};
}

SegmentLocator locator_from_json(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"part", "lo", "hi"});
  return SegmentLocator{part_from(str(j, ctx, "part"), ctx), num(j, ctx, "lo"),
                        num(j, ctx, "hi")};
}

json segment_to_json(const BoundarySegment& s) {
  return json{{"id", s.id},
              {"network", network_name(s.network)},
              {"kind", kind_name(s.kind)},
              {"value", s.value},
              {"part", part_name(s.where.part)},
              {"lo", s.where.lo},
              {"hi", s.where.hi}};
}

BoundarySegment segment_from_json(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"id", "network", "kind", "value", "part", "lo", "hi"});
  BoundarySegment s;
  s.id = str(j, ctx, "id");
  s.network = network_from(str(j, ctx, "network"), ctx);
  s.kind = kind_from(str(j, ctx, "kind"), ctx);
  s.value = num(j, ctx, "value");
  s.where = SegmentLocator{part_from(str(j, ctx, "part"), ctx), num(j, ctx, "lo"),
                           num(j, ctx, "hi")};
  return s;
}

json problem_to_json(const ProblemSpec& p) {
  json segs = json::array();
  for (const auto& s : p.segments) segs.push_back(segment_to_json(s));
  json obs = p.observation ? locator_to_json(*p.observation) : json(nullptr);
  return json{{"name", p.name},
              {"geometry", geometry_to_json(p.geometry)},
              {"material",
               json{{"mu", p.material.mu},
                    {"beta", p.material.beta},
                    {"k1", bands_to_json(p.material.k1)},
                    {"k2", bands_to_json(p.material.k2)},
                    {"body_force1", {p.material.body_force1.x(), p.material.body_force1.y()}},
                    {"body_force2", {p.material.body_force2.x(), p.material.body_force2.y()}}}},
              {"segments", segs},
              {"observation", obs},
              {"gauge_free", p.gauge_free}};
}

Vec vec_from_json(const json& j, const std::string& ctx, const char* key) {
  const auto v = num_list(j, ctx, key);
  if (v.size() != 2) fail("config: '" + where(ctx, key) + "' must have two entries");
  return Vec(v[0], v[1]);
}

ProblemSpec problem_from_json(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"name", "geometry", "material", "segments", "observation", "gauge_free"});
  ProblemSpec p;
  p.name = str(j, ctx, "name");
  p.geometry = geometry_from_json(req(j, ctx, "geometry"), where(ctx, "geometry"));
  const json& m = req(j, ctx, "material");
  const std::string mctx = where(ctx, "material");
  check_keys(m, mctx, {"mu", "beta", "k1", "k2", "body_force1", "body_force2"});
  p.material.mu = num(m, mctx, "mu");
  p.material.beta = num(m, mctx, "beta");
  p.material.k1 = bands_from_json(req(m, mctx, "k1"), where(mctx, "k1"));
  p.material.k2 = bands_from_json(req(m, mctx, "k2"), where(mctx, "k2"));
  p.material.body_force1 = vec_from_json(m, mctx, "body_force1");
  p.material.body_force2 = vec_from_json(m, mctx, "body_force2");
  const json& segs = req(j, ctx, "segments");
  if (!segs.is_array()) fail("config: '" + where(ctx, "segments") + "' must be an array");
  for (std::size_t i = 0; i < segs.size(); ++i)
    p.segments.push_back(
        segment_from_json(segs[i], where(ctx, "segments") + "[" + std::to_string(i) + "]"));
  const json& obs = req(j, ctx, "observation");
  if (!obs.is_null()) p.observation = locator_from_json(obs, where(ctx, "observation"));
  p.gauge_free = boolean(j, ctx, "gauge_free");
  return p;
}

json model_to_json(const ModelSpec& m) {
  json scales = json::array();
  for (Eigen::Index i = 0; i < m.encoder.scales.size(); ++i) scales.push_back(m.encoder.scales[i]);
  json heads = json::array();
  for (const auto& h : m.net.heads)
    heads.push_back(json{{"name", h.name}, {"dim", h.dim}, {"scale", h.scale}});
  return json{{"encoder",
               json{{"n_freq", m.encoder.n_freq}, {"tau", m.encoder.tau}, {"scales", scales}}},
              {"net", json{{"depth", m.net.depth},
                           {"width", m.net.width},
                           {"activation", activation_name(m.net.activation)},
                           {"swish_slope_init", m.net.swish_slope_init},
                           {"heads", heads},
                           {"beta_input", m.net.beta_input}}}};
}

ModelSpec model_from_json(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"encoder", "net"});
  ModelSpec m;
  const json& e = req(j, ctx, "encoder");
  const std::string ectx = where(ctx, "encoder");
  check_keys(e, ectx, {"n_freq", "tau", "scales"});
  m.encoder.n_freq = integer(e, ectx, "n_freq");
  m.encoder.tau = num(e, ectx, "tau");
  const auto scales = num_list(e, ectx, "scales");
  m.encoder.scales = Eigen::Map<const Vector>(scales.data(), scales.size());
  const json& n = req(j, ctx, "net");
  const std::string nctx = where(ctx, "net");
  check_keys(n, nctx,
             {"depth", "width", "activation", "swish_slope_init", "heads", "beta_input"});
  m.net.depth = integer(n, nctx, "depth");
  m.net.width = integer(n, nctx, "width");
  m.net.activation = activation_from(str(n, nctx, "activation"), nctx);
  m.net.swish_slope_init = num(n, nctx, "swish_slope_init");
  const json& heads = req(n, nctx, "heads");
  if (!heads.is_array()) fail("config: '" + where(nctx, "heads") + "' must be an array");
  for (std::size_t i = 0; i < heads.size(); ++i) {
    const std::string hctx = where(nctx, "heads") + "[" + std::to_string(i) + "]";
    check_keys(heads[i], hctx, {"name", "dim", "scale"});
    m.net.heads.push_back(HeadSpec{str(heads[i], hctx, "name"), integer(heads[i], hctx, "dim"),
                                   num(heads[i], hctx, "scale")});
  }
  m.net.beta_input = boolean(n, nctx, "beta_input");
  return m;
}

json train_to_json(const TrainConfig& t) {
  return json{
      {"rounds", t.rounds},
      {"epochs_adam", t.epochs_adam},
      {"batch_size", t.batch_size},
      {"lr", t.lr},
      {"lr_floor", t.lr_floor},
      {"plateau_patience", t.plateau_patience},
      {"grad_clip", t.grad_clip},
      {"n_interior", t.n_interior},
      {"n_boundary", t.n_boundary},
      {"weighting",
       json{{"alpha", t.weighting.alpha}, {"window", t.weighting.window}, {"rho", t.weighting.rho}}},
      {"refine",
       json{{"kappa", t.refine.kappa}, {"gamma", t.refine.gamma}, {"capacity", t.refine.capacity}}},
      {"lbfgs", json{{"max_iters", t.lbfgs.max_iters},
                     {"history", t.lbfgs.history},
                     {"grad_tol", t.lbfgs.grad_tol},
                     {"c1", t.lbfgs.c1},
                     {"c2", t.lbfgs.c2},
                     {"max_line_iters", t.lbfgs.max_line_iters}}},
      {"seed", t.seed}};
}

TrainConfig train_from_json(const json& j, const std::string& ctx) {
  check_keys(j, ctx,
             {"rounds", "epochs_adam", "batch_size", "lr", "lr_floor", "plateau_patience",
              "grad_clip", "n_interior", "n_boundary", "weighting", "refine", "lbfgs", "seed"});
  TrainConfig t;
  t.rounds = integer(j, ctx, "rounds");
  t.epochs_adam = integer(j, ctx, "epochs_adam");
  t.batch_size = integer(j, ctx, "batch_size");
  t.lr = num(j, ctx, "lr");
  t.lr_floor = num(j, ctx, "lr_floor");
  t.plateau_patience = integer(j, ctx, "plateau_patience");
  t.grad_clip = num(j, ctx, "grad_clip");
  t.n_interior = integer(j, ctx, "n_interior");
  t.n_boundary = integer(j, ctx, "n_boundary");
  const json& w = req(j, ctx, "weighting");
  const std::string wctx = where(ctx, "weighting");
  check_keys(w, wctx, {"alpha", "window", "rho"});
  t.weighting.alpha = num(w, wctx, "alpha");
  t.weighting.window = integer(w, wctx, "window");
  t.weighting.rho = num(w, wctx, "rho");
  const json& r = req(j, ctx, "refine");
  const std::string rctx = where(ctx, "refine");
  check_keys(r, rctx, {"kappa", "gamma", "capacity"});
  t.refine.kappa = integer(r, rctx, "kappa");
  t.refine.gamma = num(r, rctx, "gamma");
  t.refine.capacity = integer(r, rctx, "capacity");
  const json& l = req(j, ctx, "lbfgs");
  const std::string lctx = where(ctx, "lbfgs");
  check_keys(l, lctx, {"max_iters", "history", "grad_tol", "c1", "c2", "max_line_iters"});
  t.lbfgs.max_iters = integer(l, lctx, "max_iters");
  t.lbfgs.history = integer(l, lctx, "history");
  t.lbfgs.grad_tol = num(l, lctx, "grad_tol");
  t.lbfgs.c1 = num(l, lctx, "c1");
  t.lbfgs.c2 = num(l, lctx, "c2");
  t.lbfgs.max_line_iters = integer(l, lctx, "max_line_iters");
  t.seed = uinteger(j, ctx, "seed");
  return t;
}

// Deep-merges patch over base. Object-into-object recurses with key
// checking; everything else replaces the base value wholesale. A null base
// (optional slot) accepts any patch.
void merge_into(json& base, const json& patch, const std::string& path) {
  if (base.is_object() && patch.is_object()) {
    for (const auto& item : patch.items()) {
      if (!base.contains(item.key()))
        fail("config: unknown key '" + where(path, item.key().c_str()) + "'");
      merge_into(base[item.key()], item.value(), where(path, item.key().c_str()));
    }
    return;
  }
  if (base.is_object() && !patch.is_null())
    fail("config: '" + path + "' must be an object or null");
  base = patch;
}

void apply_override(json& tree, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    fail("config: override '" + text + "' is not of the form path=value");
  const std::string path = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);

  json* node = &tree;
  std::string walked;
  std::size_t pos = 0;
  while (true) {
    const auto dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (key.empty()) fail("config: override '" + text + "' has an empty path component");
    if (!node->is_object())
      fail("config: override path '" + walked + "' is not an object");
    if (!node->contains(key))
      fail("config: unknown key '" + where(walked, key.c_str()) + "'");
    walked = where(walked, key.c_str());
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }

  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = json(value);  // bare words become strings
  }
  *node = parsed;
}

}  // namespace

json preset_to_json(const Preset& ps) {
  return json{{"schema_version", kSchemaVersion},
              {"problem", problem_to_json(ps.problem)},
              {"model", model_to_json(ps.model)},
              {"train", train_to_json(ps.train)},
              {"inversion", json{{"beta_guess", ps.inversion.beta_guess},
                                 {"quadrature_n", ps.inversion.quadrature_n}}}};
}

Preset preset_from_json(const json& j) {
  check_keys(j, "", {"schema_version", "preset", "problem", "model", "train", "inversion"});
  if (integer(j, "", "schema_version") != kSchemaVersion)
    fail("config: unsupported schema_version");
  Preset ps;
  ps.problem = problem_from_json(req(j, "", "problem"), "problem");
  ps.model = model_from_json(req(j, "", "model"), "model");
  ps.train = train_from_json(req(j, "", "train"), "train");
  const json& inv = req(j, "", "inversion");
  check_keys(inv, "inversion", {"beta_guess", "quadrature_n"});
  ps.inversion.beta_guess = num(inv, "inversion", "beta_guess");
  ps.inversion.quadrature_n = integer(inv, "inversion", "quadrature_n");
  return ps;
}

ResolvedConfig resolve_config(const std::optional<std::string>& preset_name,
                              const std::optional<std::string>& config_text,
                              const std::vector<std::string>& overrides) {
  json file;
  if (config_text) {
    try {
      file = json::parse(*config_text);
    } catch (const json::parse_error& e) {
      fail(std::string("config: ") + e.what());
    }
    if (!file.is_object()) fail("config: top level must be an object");
  }

  std::optional<std::string> base = preset_name;
  if (!base && config_text && file.contains("preset")) {
    if (!file["preset"].is_string()) fail("config: 'preset' must be a string");
    base = file["preset"].get<std::string>();
  }

  json tree;
  if (base) {
    tree = preset_to_json(make_preset(*base));
    if (config_text) {
      file.erase("preset");
      merge_into(tree, file, "");
    }
  } else if (config_text) {
    tree = file;
  } else {
    fail("config: a preset name or a config file is required");
  }

  for (const auto& ov : overrides) apply_override(tree, ov);

  Preset ps = preset_from_json(tree);
  ps.problem.validate();
  return ResolvedConfig{std::move(ps), std::move(tree)};
}

}  // namespace dpp

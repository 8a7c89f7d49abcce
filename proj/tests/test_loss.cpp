#include <doctest.h>

#include <cmath>
#include <optional>

#include "dpp/loss.hpp"
#include "dpp/presets.hpp"
#include "dpp/train.hpp"

using namespace dpp;

namespace {

TrainedModel small_model(Preset& ps, int width, int depth) {
  ps.model.net.width = width;
  ps.model.net.depth = depth;
  ps.model.encoder.n_freq = 3;
  return init_model(ps.model, ps.problem, 11, 0.9);
}

struct Fixture {
  Preset ps;
  TrainedModel model;
  explicit Fixture(const std::string& name, int width = 8, int depth = 2)
      : ps(make_preset(name)), model(small_model(ps, width, depth)) {}
  Surrogate surrogate() const { return model.surrogate(); }
};

}  // namespace

TEST_CASE("pde and bc terms agree with a direct pointwise evaluation") {
  Fixture fx("pressure1d");
  const ProblemSpec& p = fx.ps.problem;
  LossEvaluator loss(*fx.model.net, *fx.model.enc, p);

  Rng rng = Rng(3).stream("sampling");
  Matrix interior = sample_interior(p.geometry, 7, rng);
  BoundarySample bdry = sample_boundary(p, 1, rng);
  LossBreakdown out = loss.eval(interior, bdry, nullptr, std::nullopt);

  Surrogate m = fx.surrogate();
  double pde_ref = 0.0;
  for (int i = 0; i < interior.cols(); ++i) {
    Vec x(interior(0, i), 0.0);
    FieldSample f = eval_fields(m, x);
    double ind = residual_indicator(residuals(f, p, x), p.geometry.dim());
    pde_ref += ind * ind;
  }
  pde_ref /= interior.cols();
  CHECK(out.pde == doctest::Approx(pde_ref).epsilon(1e-10));

  double bc_ref = 0.0;
  for (int i = 0; i < bdry.size(); ++i) {
    Vec x(bdry.points(0, i), 0.0);
    FieldSample f = eval_fields(m, x);
    for (int si : bdry.matches[i]) {
      const auto& seg = p.segments[si];
      double got = (seg.network == NetworkId::macro) ? f.p1 : f.p2;
      bc_ref += (got - seg.value) * (got - seg.value);
    }
  }
  bc_ref /= bdry.size();
  CHECK(out.bc == doctest::Approx(bc_ref).epsilon(1e-10));
  CHECK_FALSE(out.obs.has_value());
}

TEST_CASE("velocity conditions project onto the outward normal") {
  Fixture fx("radial2d");
  const ProblemSpec& p = fx.ps.problem;
  LossEvaluator loss(*fx.model.net, *fx.model.enc, p);

  Rng rng = Rng(7).stream("sampling");
  Matrix interior = sample_interior(p.geometry, 3, rng);
  BoundarySample bdry = sample_boundary(p, 3, rng);
  LossBreakdown out = loss.eval(interior, bdry, nullptr, std::nullopt);

  Surrogate m = fx.surrogate();
  double bc_ref = 0.0;
  for (int i = 0; i < bdry.size(); ++i) {
    Vec x = bdry.points.col(i);
    Vec n = bdry.normals.col(i);
    FieldSample f = eval_fields(m, x);
    for (int si : bdry.matches[i]) {
      const auto& seg = p.segments[si];
      double got = (seg.kind == BcKind::pressure)
                       ? ((seg.network == NetworkId::macro) ? f.p1 : f.p2)
                       : ((seg.network == NetworkId::macro) ? f.u1 : f.u2).dot(n);
      bc_ref += (got - seg.value) * (got - seg.value);
    }
  }
  bc_ref /= bdry.size();
  CHECK(out.bc == doctest::Approx(bc_ref).epsilon(1e-10));
}

TEST_CASE("observation term is the squared flux mismatch") {
  Fixture fx("inverse2d");
  const ProblemSpec& p = fx.ps.problem;
  LossEvaluator loss(*fx.model.net, *fx.model.enc, p);

  FluxObservation obs;
  obs.quad = segment_midpoints(p.geometry, *p.observation, 16);
  obs.q_obs = -2.0;

  const double beta = 1.1;
  double q = loss.flux(obs.quad, beta);

  Surrogate m = fx.surrogate();
  m.beta_feature = beta;
  double q_ref = 0.0;
  for (int j = 0; j < obs.quad.points.cols(); ++j) {
    FieldSample f = eval_fields(m, obs.quad.points.col(j));
    q_ref += obs.quad.weight * (f.u1 + f.u2).dot(obs.quad.normals.col(j));
  }
  CHECK(q == doctest::Approx(q_ref).epsilon(1e-10));

  Rng rng = Rng(5).stream("sampling");
  Matrix interior = sample_interior(p.geometry, 4, rng);
  BoundarySample bdry = sample_boundary(p, 2, rng);
  LossBreakdown out = loss.eval(interior, bdry, &obs, beta);
  REQUIRE(out.obs.has_value());
  CHECK(*out.obs == doctest::Approx((q - obs.q_obs) * (q - obs.q_obs)).epsilon(1e-10));
}

TEST_CASE("a conditioned net refuses to evaluate without beta") {
  Fixture fx("inverse2d");
  LossEvaluator loss(*fx.model.net, *fx.model.enc, fx.ps.problem);
  Rng rng(2);
  Matrix interior = sample_interior(fx.ps.problem.geometry, 2, rng);
  BoundarySample bdry = sample_boundary(fx.ps.problem, 1, rng);
  CHECK_THROWS_AS(loss.eval(interior, bdry, nullptr, std::nullopt), ConfigError);
}

TEST_CASE("indicators equal pointwise residual norms") {
  Fixture fx("mixed1d");
  const ProblemSpec& p = fx.ps.problem;
  LossEvaluator loss(*fx.model.net, *fx.model.enc, p);
  Rng rng(9);
  Matrix pts = sample_interior(p.geometry, 11, rng);
  Vector ind = loss.indicators(pts, std::nullopt);
  REQUIRE(ind.size() == 11);

  Surrogate m = fx.surrogate();
  for (int i = 0; i < 11; ++i) {
    Vec x(pts(0, i), 0.0);
    FieldSample f = eval_fields(m, x);
    CHECK(ind[i] ==
          doctest::Approx(residual_indicator(residuals(f, p, x), 1)).epsilon(1e-10));
  }
}

TEST_CASE("task gradients match finite differences of the task losses") {
  Fixture fx("inverse2d", 6, 2);
  const ProblemSpec& p = fx.ps.problem;
  Network& net = *fx.model.net;
  LossEvaluator loss(net, *fx.model.enc, p);

  Rng rng = Rng(13).stream("sampling");
  Matrix interior = sample_interior(p.geometry, 5, rng);
  BoundarySample bdry = sample_boundary(p, 1, rng);
  FluxObservation obs;
  obs.quad = segment_midpoints(p.geometry, *p.observation, 8);
  obs.q_obs = -1.0;
  const double beta = 0.8;

  TaskGrads grads;
  grads.reset(net.param_count());
  loss.eval_task_grads(interior, bdry, &obs, beta, grads);

  Vector theta = net.params();
  const double h = 1e-6;
  const int stride = std::max(1, static_cast<int>(theta.size() / 12));
  for (int k = 0; k < theta.size(); k += stride) {
    Vector tp = theta, tm = theta;
    tp[k] += h;
    tm[k] -= h;
    net.set_params(tp);
    LossBreakdown up = loss.eval(interior, bdry, &obs, beta);
    net.set_params(tm);
    LossBreakdown dn = loss.eval(interior, bdry, &obs, beta);
    net.set_params(theta);
    CHECK(std::abs((up.pde - dn.pde) / (2 * h) - grads.pde[k]) /
              std::max(1.0, std::abs(grads.pde[k])) < 2e-5);
    CHECK(std::abs((up.bc - dn.bc) / (2 * h) - grads.bc[k]) /
              std::max(1.0, std::abs(grads.bc[k])) < 2e-5);
    CHECK(std::abs((*up.obs - *dn.obs) / (2 * h) - grads.obs[k]) /
              std::max(1.0, std::abs(grads.obs[k])) < 2e-5);
  }

  // The beta cotangents: conditioning input plus the explicit residual term.
  LossBreakdown up = loss.eval(interior, bdry, &obs, beta + h);
  LossBreakdown dn = loss.eval(interior, bdry, &obs, beta - h);
  CHECK(std::abs((up.pde - dn.pde) / (2 * h) - grads.beta_pde) /
            std::max(1.0, std::abs(grads.beta_pde)) < 2e-5);
  CHECK(std::abs((up.bc - dn.bc) / (2 * h) - grads.beta_bc) /
            std::max(1.0, std::abs(grads.beta_bc)) < 2e-5);
  CHECK(std::abs((*up.obs - *dn.obs) / (2 * h) - grads.beta_obs) /
            std::max(1.0, std::abs(grads.beta_obs)) < 2e-5);

  // eval_grad combines with the weights.
  LossWeights w{1.0, 1.7, 0.6};
  Vector g = Vector::Zero(net.param_count());
  double dbeta = 0.0;
  loss.eval_grad(interior, bdry, &obs, beta, w, g, &dbeta);
  CHECK((g - grads.combined(w)).norm() < 1e-12);
  CHECK(dbeta == doctest::Approx(grads.beta_combined(w)).epsilon(1e-12));
}

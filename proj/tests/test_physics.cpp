#include <doctest.h>

#include <cmath>

#include "dpp/physics.hpp"
#include "dpp/presets.hpp"

using namespace dpp;

namespace {

ProblemSpec plain_rect() {
  ProblemSpec p = make_preset("inverse2d").problem;
  p.material.k1 = Bands::uniform(2.0);
  p.material.k2 = Bands::uniform(0.5);
  p.material.mu = 3.0;
  p.material.beta = 1.5;
  return p;
}

}  // namespace

TEST_CASE("residuals reproduce the governing equations by hand") {
  ProblemSpec p = plain_rect();
  FieldSample f;
  f.p1 = 2.0;
  f.p2 = 0.5;
  f.grad_p1 = Vec(0.3, -0.1);
  f.grad_p2 = Vec(-0.2, 0.4);
  f.u1 = Vec(1.0, 2.0);
  f.u2 = Vec(-0.5, 0.25);
  f.div_u1 = 0.7;
  f.div_u2 = -0.2;

  Residuals r = residuals(f, p, Vec(0.5, 0.5));
  // mu/k1 = 1.5, mu/k2 = 6, (beta/mu)(p1-p2) = 0.75
  CHECK(r.r1[0] == doctest::Approx(1.5 * 1.0 + 0.3));
  CHECK(r.r1[1] == doctest::Approx(1.5 * 2.0 - 0.1));
  CHECK(r.r2[0] == doctest::Approx(6.0 * -0.5 - 0.2));
  CHECK(r.r2[1] == doctest::Approx(6.0 * 0.25 + 0.4));
  CHECK(r.r3 == doctest::Approx(0.7 + 0.75));
  CHECK(r.r4 == doctest::Approx(-0.2 - 0.75));

  // Continuity residuals sum to the total divergence: exchange conserves mass.
  CHECK(r.r3 + r.r4 == doctest::Approx(f.div_u1 + f.div_u2));
}

TEST_CASE("body force shifts the momentum residual only") {
  ProblemSpec p = plain_rect();
  p.material.body_force1 = Vec(0.9, -0.3);
  p.material.body_force2 = Vec(0.0, 1.1);
  FieldSample f;
  f.u1 = Vec(1.0, 1.0);
  f.u2 = Vec(1.0, 1.0);
  Residuals r0 = residuals(f, p, Vec(0.1, 0.1));
  p.material.body_force1 = Vec::Zero();
  p.material.body_force2 = Vec::Zero();
  Residuals r1 = residuals(f, p, Vec(0.1, 0.1));
  CHECK(r1.r1[0] - r0.r1[0] == doctest::Approx(0.9));
  CHECK(r1.r1[1] - r0.r1[1] == doctest::Approx(-0.3));
  CHECK(r1.r2[1] - r0.r2[1] == doctest::Approx(1.1));
  CHECK(r0.r3 == r1.r3);
}

TEST_CASE("beta override replaces the material value") {
  ProblemSpec p = plain_rect();
  FieldSample f;
  f.p1 = 4.0;
  f.p2 = 1.0;
  Residuals r = residuals(f, p, Vec(0.2, 0.2), 6.0);
  CHECK(r.r3 == doctest::Approx((6.0 / 3.0) * 3.0));
  CHECK(r.r4 == doctest::Approx(-(6.0 / 3.0) * 3.0));
}

TEST_CASE("indicator is the stacked residual norm") {
  Residuals r;
  r.r1 = Vec(3.0, 0.0);
  r.r2 = Vec(0.0, 4.0);
  r.r3 = 0.0;
  r.r4 = 0.0;
  CHECK(residual_indicator(r, 2) == doctest::Approx(5.0));
  CHECK(residual_indicator(r, 1) == doctest::Approx(3.0));  // y-components ignored in 1D
}

TEST_CASE("transfer rate sign convention") {
  // Positive exchange into the macro network when the micro pressure is higher.
  CHECK(transfer_rate(1.0, 3.0, 2.0, 4.0) == doctest::Approx(1.0));
  CHECK(transfer_rate(3.0, 1.0, 2.0, 4.0) == doctest::Approx(-1.0));
  CHECK(transfer_rate(2.0, 2.0, 5.0, 1.0) == 0.0);
}

TEST_CASE("ls_energy: zero kernel, strict positivity, exact quadratic scaling") {
  ProblemSpec p = make_preset("mixed1d").problem;

  FieldFn zero = [](const Vec&) { return FieldSample{}; };
  Rng r0(5);
  CHECK(ls_energy(zero, p, 64, 8, r0) == 0.0);

  FieldFn state = [](const Vec& x) {
    FieldSample f;
    f.p1 = std::sin(3 * x[0]);
    f.p2 = 0.2 * x[0] * x[0];
    f.grad_p1 = Vec(3 * std::cos(3 * x[0]), 0.0);
    f.grad_p2 = Vec(0.4 * x[0], 0.0);
    f.u1 = Vec(1.0 + x[0], 0.0);
    f.u2 = Vec(0.5, 0.0);
    f.div_u1 = 1.0;
    return f;
  };
  FieldFn doubled = [&](const Vec& x) {
    FieldSample f = state(x);
    f.p1 *= 2;
    f.p2 *= 2;
    f.grad_p1 *= 2;
    f.grad_p2 *= 2;
    f.u1 *= 2;
    f.u2 *= 2;
    f.div_u1 *= 2;
    f.div_u2 *= 2;
    return f;
  };
  // Same seed on both evaluations so the Monte Carlo nodes coincide and the
  // quadratic identity holds exactly.
  Rng ra(5), rb(5);
  double e1 = ls_energy(state, p, 64, 8, ra);
  double e2 = ls_energy(doubled, p, 64, 8, rb);
  CHECK(e1 > 0.0);
  CHECK(e2 == doctest::Approx(4.0 * e1).epsilon(1e-14));
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "dpp/oracle.hpp"
#include "dpp/presets.hpp"

using namespace dpp;

namespace {

// Closed form for the equal-end-pressure 1D column. With w = p1 - p2 and
// lambda^2 = (beta/mu)(1/k1 + 1/k2):
//   w(x)  = W cosh(lambda (x - 1/2)) / cosh(lambda / 2),
//   k1 p1 + k2 p2 = const (zero total flux),
//   u1 = -u2 = -(k1 k2 / (k1 + k2)) w'.
struct ColumnExact {
  double k1 = 1.0, k2 = 0.01, mu = 1.0, beta = 1.0;
  double P1 = 10.0, P2 = 1.0;
  double lambda() const { return std::sqrt(beta / mu * (1 / k1 + 1 / k2)); }
  double w(double x) const {
    return (P1 - P2) * std::cosh(lambda() * (x - 0.5)) / std::cosh(lambda() / 2);
  }
  double wp(double x) const {
    return (P1 - P2) * lambda() * std::sinh(lambda() * (x - 0.5)) / std::cosh(lambda() / 2);
  }
  double p1(double x) const { return (k1 * P1 + k2 * P2 + k2 * w(x)) / (k1 + k2); }
  double p2(double x) const { return p1(x) - w(x); }
  double u1(double x) const { return -k1 * k2 * wp(x) / (k1 + k2); }
};

}  // namespace

TEST_CASE("column closed form: frozen spot values") {
  ColumnExact ex;
  CHECK(ex.lambda() == doctest::Approx(10.04987562112089).epsilon(1e-14));
  CHECK(ex.w(0.5) == doctest::Approx(0.11829080432412195).epsilon(1e-13));
  CHECK(ex.p1(0.5) == doctest::Approx(9.912062285191327).epsilon(1e-13));
  CHECK(ex.p2(0.5) == doctest::Approx(9.793771480867205).epsilon(1e-13));
  CHECK(ex.u1(0.0) == doctest::Approx(0.8954561163413827).epsilon(1e-13));
  CHECK(ex.u1(0.25) == doctest::Approx(0.07211873201583299).epsilon(1e-13));
}

TEST_CASE("1D solver matches the column closed form") {
  ProblemSpec p = make_preset("pressure1d").problem;
  GridSolution g = fd_solve_1d(p, 1024);
  REQUIRE(g.coords.size() == 1024);

  ColumnExact ex;
  double p_err = 0.0, u_err = 0.0;
  for (int i = 0; i < g.coords.size(); ++i) {
    double x = g.coords[i];
    p_err = std::max(p_err, std::abs(g.p1[i] - ex.p1(x)) + std::abs(g.p2[i] - ex.p2(x)));
    u_err = std::max(u_err, std::abs(g.u1[i] - ex.u1(x)) + std::abs(g.u2[i] + ex.u1(x)));
  }
  CHECK(p_err < 2e-4);   // second order; the exchange layer is ~0.1 wide
  CHECK(u_err < 2e-3);
  // End flux against the frozen derived value.
  CHECK(g.interp(g.u1, 0.0) == doctest::Approx(0.8954561163413827).epsilon(5e-4));
}

TEST_CASE("decoupled networks reduce to independent linear profiles") {
  ProblemSpec p = make_preset("pressure1d").problem;
  p.material.beta = 0.0;
  p.segments[1].value = 4.0;  // macro now drops 10 -> 4
  p.segments[3].value = 0.0;  // micro drops 1 -> 0
  GridSolution g = fd_solve_1d(p, 64);
  for (int i = 0; i < g.coords.size(); ++i) {
    double x = g.coords[i];
    CHECK(g.p1[i] == doctest::Approx(10.0 - 6.0 * x).epsilon(1e-12));
    CHECK(g.p2[i] == doctest::Approx(1.0 - 1.0 * x).epsilon(1e-12));
    CHECK(g.u1[i] == doctest::Approx(6.0).epsilon(1e-10));        // -k1 dp1/dx
    CHECK(g.u2[i] == doctest::Approx(0.01).epsilon(1e-10));
  }
}

TEST_CASE("annulus log profile formula") {
  double pi = annulus_log_pressure(0.3, 0.3, 1.0, 1.0, 0.0);
  double po = annulus_log_pressure(1.0, 0.3, 1.0, 1.0, 0.0);
  CHECK(pi == doctest::Approx(1.0));
  CHECK(po == doctest::Approx(0.0));
  // p(r) = (ln(r_out) - ln(r)) / (ln(r_out) - ln(r_in)) for this data.
  double mid = annulus_log_pressure(0.6, 0.3, 1.0, 1.0, 0.0);
  CHECK(mid == doctest::Approx(std::log(1.0 / 0.6) / std::log(1.0 / 0.3)).epsilon(1e-12));
}

TEST_CASE("radial solver recovers the single-network log profile") {
  // Decoupled (beta = 0) with micro pressures pinned too, so both networks
  // carry a pure log profile.
  ProblemSpec p = make_preset("radial2d").problem;
  p.material.beta = 0.0;
  p.segments[2] = p.segments[0];
  p.segments[2].id = "p2_inner";
  p.segments[2].network = NetworkId::micro;
  p.segments[3] = p.segments[1];
  p.segments[3].id = "p2_outer";
  p.segments[3].network = NetworkId::micro;

  GridSolution g = fd_solve_radial(p, 256);
  for (int i = 0; i < g.coords.size(); ++i) {
    double r = g.coords[i];
    double exact = annulus_log_pressure(r, 0.3, 1.0, 1.0, 0.0);
    CHECK(std::abs(g.p1[i] - exact) < 1e-4);
    CHECK(std::abs(g.p2[i] - exact) < 1e-4);
  }
  // Conservation: r * u1 is constant for the decoupled radial network.
  double c0 = g.coords[1] * g.interp(g.u1, g.coords[1]);
  double c1 = g.coords[g.coords.size() - 2] * g.interp(g.u1, g.coords[g.coords.size() - 2]);
  CHECK(c0 == doctest::Approx(c1).epsilon(1e-3));
}

TEST_CASE("rect solver reproduces uniform flow exactly") {
  ProblemSpec p;
  p.name = "uniform";
  p.geometry = Geometry::rectangle(1.5, 1.0);
  p.material.mu = 2.0;
  p.material.beta = 3.0;  // irrelevant: p1 = p2 kills the exchange
  p.material.k1 = Bands::uniform(2.0);
  p.material.k2 = Bands::uniform(0.5);
  auto add = [&](std::string id, NetworkId n, BcKind k, double v, BoundaryPart part, double lo,
                 double hi) {
    p.segments.push_back(BoundarySegment{std::move(id), n, k, v, SegmentLocator{part, lo, hi}});
  };
  for (auto [net, tag] :
       {std::pair{NetworkId::macro, "1"}, std::pair{NetworkId::micro, "2"}}) {
    add(std::string("p") + tag + "_l", net, BcKind::pressure, 1.0, BoundaryPart::left, 0.0, 1.0);
    add(std::string("p") + tag + "_r", net, BcKind::pressure, 0.0, BoundaryPart::right, 0.0, 1.0);
    add(std::string("u") + tag + "_b", net, BcKind::normal_velocity, 0.0, BoundaryPart::bottom,
        0.0, 1.5);
    add(std::string("u") + tag + "_t", net, BcKind::normal_velocity, 0.0, BoundaryPart::top, 0.0,
        1.5);
  }
  p.observation = SegmentLocator{BoundaryPart::left, 0.0, 1.0};
  p.validate();

  GridSolution2D g = fd_solve_rect(p, 48, 32);
  for (int i = 0; i < g.xs.size(); ++i) {
    for (int j = 0; j < g.ys.size(); ++j) {
      double exact = 1.0 - g.xs[i] / 1.5;
      CHECK(std::abs(g.p1(i, j) - exact) < 1e-10);
      CHECK(std::abs(g.p2(i, j) - exact) < 1e-10);
      CHECK(std::abs(g.u1x(i, j) - 2.0 / 2.0 / 1.5) < 1e-9);
      CHECK(std::abs(g.u2x(i, j) - 0.5 / 2.0 / 1.5) < 1e-9);
      CHECK(std::abs(g.u1y(i, j)) < 1e-10);
    }
  }
  // Inflow through the left side: (u1x + u2x) * ly against the -x normal.
  CHECK(g.q_outlet == doctest::Approx(-(2.0 / 2.0 / 1.5 + 0.5 / 2.0 / 1.5) * 1.0).epsilon(1e-8));
}

TEST_CASE("rect solver keeps the mirror symmetry of symmetric data") {
  // Footing-like box with the load re-centred and drains at both top ends,
  // so the data (and hence the solution) is mirror symmetric in x.
  ProblemSpec p = make_preset("footing2d").problem;
  p.segments.resize(6);  // keep the sealed sides and bottom
  auto top = [&](std::string id, NetworkId n, BcKind k, double v, double lo, double hi) {
    p.segments.push_back(
        BoundarySegment{std::move(id), n, k, v, SegmentLocator{BoundaryPart::top, lo, hi}});
  };
  top("p1_load", NetworkId::macro, BcKind::pressure, 100.0, 3.75, 6.25);
  top("u2_load", NetworkId::micro, BcKind::normal_velocity, 0.0, 3.75, 6.25);
  top("p1_drain_l", NetworkId::macro, BcKind::pressure, 0.0, 0.0, 3.75);
  top("u2_drain_l", NetworkId::micro, BcKind::normal_velocity, 0.0, 0.0, 3.75);
  top("p1_drain_r", NetworkId::macro, BcKind::pressure, 0.0, 6.25, 10.0);
  top("u2_drain_r", NetworkId::micro, BcKind::normal_velocity, 0.0, 6.25, 10.0);
  p.validate();

  GridSolution2D g = fd_solve_rect(p, 64, 32);
  const auto nx = g.xs.size();
  for (int i = 0; i < nx / 2; ++i) {
    for (int j = 0; j < g.ys.size(); ++j) {
      CHECK(g.p1(i, j) ==
            doctest::Approx(g.p1(static_cast<int>(nx) - 1 - i, j)).epsilon(1e-9));
      CHECK(g.u1x(i, j) ==
            doctest::Approx(-g.u1x(static_cast<int>(nx) - 1 - i, j)).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("layered exact state and its validation") {
  ProblemSpec p = make_preset("layered2d").problem;
  FieldFn exact = layered_exact_state(p);

  FieldSample mid = exact(Vec(2.5, 2.0));  // middle band, k1 = 1
  CHECK(mid.u1[0] == doctest::Approx(1.0));
  CHECK(mid.u1[1] == 0.0);
  CHECK(mid.div_u1 == 0.0);
  CHECK(mid.grad_p1[0] == doctest::Approx(-1.0));
  CHECK(mid.p1 - mid.p2 == doctest::Approx(0.0));  // no exchange

  FieldSample band2 = exact(Vec(2.5, 1.0));  // second band, k1 = 5
  CHECK(band2.u1[0] == doctest::Approx(5.0));
  CHECK(band2.u2[0] == doctest::Approx(0.5));

  // Pressure drops linearly: datum-aligned difference over one unit of x.
  FieldSample a = exact(Vec(1.0, 2.0)), b = exact(Vec(2.0, 2.0));
  CHECK(a.p1 - b.p1 == doctest::Approx(1.0));

  // Boundary data inconsistent with the uniform-flow state is rejected.
  ProblemSpec broken = p;
  broken.segments[0].value *= 2.0;
  CHECK_THROWS_AS(layered_exact_state(broken), OracleError);
}

TEST_CASE("missing pressure datum raises an oracle error") {
  ProblemSpec p = make_preset("pressure1d").problem;
  for (auto& s : p.segments) {
    s.kind = BcKind::normal_velocity;
    s.value = 0.0;
  }
  p.gauge_free = true;
  CHECK_THROWS_AS(fd_solve_1d(p, 32), OracleError);
}

TEST_CASE("grid interpolation is piecewise linear / bilinear") {
  GridSolution g;
  g.coords = Vector::LinSpaced(3, 0.0, 1.0);
  g.p1 = Vector{{0.0, 2.0, 6.0}};
  CHECK(g.interp(g.p1, 0.25) == doctest::Approx(1.0));
  CHECK(g.interp(g.p1, 0.75) == doctest::Approx(4.0));
  CHECK(g.interp(g.p1, 1.0) == doctest::Approx(6.0));

  GridSolution2D g2;
  g2.xs = Vector::LinSpaced(2, 0.0, 1.0);
  g2.ys = Vector::LinSpaced(2, 0.0, 1.0);
  g2.p1 = Matrix(2, 2);
  g2.p1 << 0.0, 1.0, 2.0, 3.0;  // p(x, y) = 2x + y on the unit cell
  CHECK(g2.interp(g2.p1, Vec(0.5, 0.5)) == doctest::Approx(1.5));
  CHECK(g2.interp(g2.p1, Vec(0.25, 0.75)) == doctest::Approx(1.25));
}

TEST_CASE("field error norms and the gauge-aligned comparison") {
  FieldFn ref = [](const Vec& x) {
    FieldSample f;
    f.p1 = x[0];
    f.p2 = 2 * x[0];
    f.u1 = Vec(1.0, 0.0);
    f.u2 = Vec(0.0, 1.0);
    return f;
  };
  FieldFn shifted = [&](const Vec& x) {
    FieldSample f = ref(x);
    f.p1 += 5.0;
    f.p2 += 5.0;
    return f;
  };
  std::vector<Vec> pts;
  for (int i = 1; i <= 20; ++i) pts.push_back(Vec(i / 21.0, 0.5));

  FieldErrors self = l2_error(ref, ref, pts);
  CHECK(self.p1 == 0.0);
  CHECK(self.u2 == 0.0);

  FieldErrors off = l2_error(shifted, ref, pts);
  CHECK(off.p1 > 1.0);  // the shift dominates the linear profile
  CHECK(off.u1 == 0.0);

  ErrorOptions opt;
  opt.align_pressure_datum = true;
  FieldErrors aligned = l2_error(shifted, ref, pts, opt);
  CHECK(aligned.p1 < 1e-12);
  CHECK(aligned.p2 < 1e-12);
}

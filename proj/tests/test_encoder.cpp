#include <doctest.h>

#include <cmath>
#include <vector>

#include "dpp/encoder.hpp"

using namespace dpp;

namespace {

EncoderSpec spec2d(int n_freq, double tau, double sx, double sy) {
  EncoderSpec s;
  s.n_freq = n_freq;
  s.tau = tau;
  s.scales = Vector{{sx, sy}};
  return s;
}

}  // namespace

TEST_CASE("output layout: normalized coordinates then sin/cos pairs") {
  Rng stream = Rng(5).stream("encoder");
  Encoder enc(spec2d(6, 1.0, 2.0, 4.0), stream);
  CHECK(enc.in_dim() == 2);
  CHECK(enc.out_dim() == 2 + 12);

  Matrix X(2, 3);
  X << 0.0, 1.0, 2.0, 0.0, 2.0, 4.0;
  Matrix phi;
  enc.encode(X, phi);
  REQUIRE(phi.rows() == enc.out_dim());
  REQUIRE(phi.cols() == 3);

  // First rows are x / scale.
  CHECK(phi(0, 1) == doctest::Approx(0.5));
  CHECK(phi(1, 1) == doctest::Approx(0.5));
  CHECK(phi(0, 2) == doctest::Approx(1.0));

  const Matrix& B = enc.frequencies();
  REQUIRE(B.rows() == 6);
  REQUIRE(B.cols() == 2);
  for (int f = 0; f < 6; ++f) {
    double arg = 2 * M_PI * (B(f, 0) * 0.5 + B(f, 1) * 0.5);
    CHECK(phi(2 + f, 1) == doctest::Approx(std::sin(arg)));
    CHECK(phi(2 + 6 + f, 1) == doctest::Approx(std::cos(arg)));
  }
}

TEST_CASE("n_freq 0 degenerates to the normalized identity") {
  Rng stream = Rng(5).stream("encoder");
  Encoder enc(spec2d(0, 1.0, 1.0, 2.0), stream);
  CHECK(enc.out_dim() == 2);
  Matrix X(2, 1);
  X << 3.0, 1.0;
  Matrix phi;
  enc.encode(X, phi);
  CHECK(phi(0, 0) == doctest::Approx(3.0));
  CHECK(phi(1, 0) == doctest::Approx(0.5));
}

TEST_CASE("frequencies are a deterministic function of the stream") {
  Rng s1 = Rng(9).stream("encoder");
  Rng s2 = Rng(9).stream("encoder");
  Encoder a(spec2d(8, 1.5, 1.0, 1.0), s1);
  Encoder b(spec2d(8, 1.5, 1.0, 1.0), s2);
  CHECK((a.frequencies() - b.frequencies()).norm() == 0.0);

  Rng s3 = Rng(10).stream("encoder");
  Encoder c(spec2d(8, 1.5, 1.0, 1.0), s3);
  CHECK((a.frequencies() - c.frequencies()).norm() > 0.0);
}

TEST_CASE("restore from stored frequencies reproduces the map") {
  Rng stream = Rng(2).stream("encoder");
  Encoder a(spec2d(4, 2.0, 1.0, 3.0), stream);
  Encoder b(a.spec(), a.frequencies());
  Matrix X = Matrix::Random(2, 5);
  Matrix pa, pb;
  a.encode(X, pa);
  b.encode(X, pb);
  CHECK((pa - pb).norm() == 0.0);
}

TEST_CASE("tangents match central differences, anisotropic scales included") {
  Rng stream = Rng(17).stream("encoder");
  Encoder enc(spec2d(5, 1.2, 40.0, 4.0), stream);
  Matrix X = Matrix::Random(2, 4);
  X.row(0) = (X.row(0).array() + 1.0) * 20.0;  // spread over [0, 40]
  X.row(1) = (X.row(1).array() + 1.0) * 2.0;

  Matrix phi;
  std::vector<Matrix> dphi;
  enc.encode_with_tangents(X, phi, dphi);
  REQUIRE(dphi.size() == 2);

  const double h = 1e-6;
  for (int j = 0; j < 2; ++j) {
    Matrix Xp = X, Xm = X;
    Xp.row(j).array() += h;
    Xm.row(j).array() -= h;
    Matrix pp, pm;
    enc.encode(Xp, pp);
    enc.encode(Xm, pm);
    Matrix fd = (pp - pm) / (2 * h);
    CHECK((fd - dphi[j]).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("larger per-axis scale lowers the effective frequency along that axis") {
  // The same physical step moves x / scale less when the scale grows, so the
  // feature map varies more slowly along that axis.
  Rng s1 = Rng(3).stream("encoder");
  Encoder iso(spec2d(16, 2.0, 1.0, 1.0), s1);
  Rng s2 = Rng(3).stream("encoder");
  Encoder aniso(spec2d(16, 2.0, 10.0, 1.0), s2);

  Matrix X0(2, 1), X1(2, 1);
  X0 << 0.3, 0.3;
  X1 << 0.45, 0.3;  // step along x only
  Matrix a0, a1, b0, b1;
  iso.encode(X0, a0);
  iso.encode(X1, a1);
  aniso.encode(X0, b0);
  aniso.encode(X1, b1);
  CHECK((b1 - b0).norm() < (a1 - a0).norm());
}

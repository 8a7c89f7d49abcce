#include "dpp/encoder.hpp"

#include <cmath>
#include <numbers>

namespace dpp {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Encoder::Encoder(EncoderSpec spec, Rng& stream) : spec_(std::move(spec)) {
  check_shapes();
  const int d = in_dim();
  b_.resize(spec_.n_freq, d);
  // Row-major draw order so adding an axis only appends draws per row.
  for (int i = 0; i < spec_.n_freq; ++i) {
    for (int j = 0; j < d; ++j) b_(i, j) = spec_.tau * stream.normal();
  }
}

Encoder::Encoder(EncoderSpec spec, Matrix frequencies)
    : spec_(std::move(spec)), b_(std::move(frequencies)) {
  check_shapes();
  if (b_.rows() != spec_.n_freq || b_.cols() != in_dim()) {
    throw ConfigError("encoder frequency matrix shape does not match spec");
  }
}

void Encoder::check_shapes() const {
  if (spec_.n_freq < 0) throw ConfigError("encoder n_freq must be non-negative");
  if (!(spec_.tau > 0)) throw ConfigError("encoder tau must be positive");
  if (spec_.scales.size() < 1 || spec_.scales.size() > 2) {
    throw ConfigError("encoder expects 1 or 2 axis scales");
  }
  for (int j = 0; j < spec_.scales.size(); ++j) {
    if (!(spec_.scales[j] > 0)) throw ConfigError("encoder scales must be positive");
  }
}

void Encoder::encode(const Eigen::Ref<const Matrix>& X, Matrix& Phi) const {
  const int d = in_dim();
  const auto n = X.cols();
  const int nf = spec_.n_freq;
  Phi.resize(out_dim(), n);
  Matrix xh = spec_.scales.cwiseInverse().asDiagonal() * X;
  Phi.topRows(d) = xh;
  if (nf > 0) {
    Matrix arg = kTwoPi * (b_ * xh);
    Phi.middleRows(d, nf) = arg.array().sin();
    Phi.bottomRows(nf) = arg.array().cos();
  }
}

void Encoder::encode_with_tangents(const Eigen::Ref<const Matrix>& X, Matrix& Phi,
                                   std::vector<Matrix>& dPhi) const {
  const int d = in_dim();
  const auto n = X.cols();
  const int nf = spec_.n_freq;
  Phi.resize(out_dim(), n);
  dPhi.assign(d, Matrix::Zero(out_dim(), n));
  Matrix xh = spec_.scales.cwiseInverse().asDiagonal() * X;
  Phi.topRows(d) = xh;
  Matrix s, c;
  if (nf > 0) {
    Matrix arg = kTwoPi * (b_ * xh);
    s = arg.array().sin();
    c = arg.array().cos();
    Phi.middleRows(d, nf) = s;
    Phi.bottomRows(nf) = c;
  }
  for (int j = 0; j < d; ++j) {
    dPhi[j].row(j).setConstant(1.0 / spec_.scales[j]);
    if (nf > 0) {
      Vector wj = (kTwoPi / spec_.scales[j]) * b_.col(j);
      dPhi[j].middleRows(d, nf) = wj.asDiagonal() * c;
      dPhi[j].bottomRows(nf) = (-wj).asDiagonal() * s;
    }
  }
}

}  // namespace dpp

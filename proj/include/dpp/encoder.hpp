#pragma once

#include <vector>

#include "dpp/rng.hpp"
#include "dpp/types.hpp"

namespace dpp {

struct EncoderSpec {
  int n_freq = 8;        // random frequency rows; 0 degenerates to plain input
  double tau = 1.0;      // frequency scale, entries of B are N(0, tau^2)
  Vector scales;         // per-axis lengths used to normalize coordinates
};

// Random Fourier feature map. Coordinates are first normalized per axis,
// then lifted to [x_hat; sin(2 pi B x_hat); cos(2 pi B x_hat)]. B is drawn
// once at construction and never trained, so the map is a fixed deterministic
// function of the seed.
class Encoder {
 public:
  Encoder(EncoderSpec spec, Rng& stream);
  Encoder(EncoderSpec spec, Matrix frequencies);  // restore from a checkpoint

  int in_dim() const { return static_cast<int>(spec_.scales.size()); }
  int out_dim() const { return in_dim() + 2 * spec_.n_freq; }
  const EncoderSpec& spec() const { return spec_; }
  const Matrix& frequencies() const { return b_; }

  // X is dim x n, one point per column; Phi comes back out_dim x n.
  void encode(const Eigen::Ref<const Matrix>& X, Matrix& Phi) const;

  // Additionally fills dPhi[j] = d Phi / d x_j, same shape as Phi.
  void encode_with_tangents(const Eigen::Ref<const Matrix>& X, Matrix& Phi,
                            std::vector<Matrix>& dPhi) const;

 private:
  void check_shapes() const;
  EncoderSpec spec_;
  Matrix b_;  // n_freq x dim
};

}  // namespace dpp

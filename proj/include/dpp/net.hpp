#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpp/encoder.hpp"
#include "dpp/rng.hpp"
#include "dpp/types.hpp"

namespace dpp {

enum class Activation { swish, tanh };

struct HeadSpec {
  std::string name;
  int dim = 1;
  double scale = 1.0;  // fixed output multiplier; keeps head weights O(1)
};

struct NetworkSpec {
  int depth = 6;
  int width = 64;
  Activation activation = Activation::swish;
  double swish_slope_init = 1.0;
  std::vector<HeadSpec> heads;
  bool beta_input = false;  // append a conditioning scalar to the features
};

// Shared trunk with independent affine heads. Parameters flatten to a single
// vector in a fixed order: trunk (W column-major, then bias) layer by layer,
// then each head's (W, bias), then the per-layer swish slopes when present.
class Network {
 public:
  Network(NetworkSpec spec, int feature_dim, Rng& init_stream);

  const NetworkSpec& spec() const { return spec_; }
  int feature_dim() const { return feature_dim_; }
  int input_dim() const { return feature_dim_ + (spec_.beta_input ? 1 : 0); }
  int output_dim() const { return output_dim_; }
  int head_offset(int k) const { return head_offsets_[k]; }
  int param_count() const { return param_count_; }

  Vector params() const;
  void set_params(const Vector& theta);

  const Matrix& trunk_w(int l) const { return w_[l]; }
  const Vector& trunk_b(int l) const { return b_[l]; }
  const Matrix& head_w(int k) const { return hw_[k]; }
  const Vector& head_b(int k) const { return hb_[k]; }
  double slope(int l) const { return slopes_.size() ? slopes_[l] : 1.0; }

 private:
  friend class ModelTape;
  NetworkSpec spec_;
  int feature_dim_ = 0;
  int output_dim_ = 0;
  int param_count_ = 0;
  std::vector<int> head_offsets_;
  std::vector<Matrix> w_;
  std::vector<Vector> b_;
  std::vector<Matrix> hw_;
  std::vector<Vector> hb_;
  Vector slopes_;  // empty unless swish
};

// Row offsets of the four flow fields in the stacked network output.
struct HeadLayout {
  int p1 = 0, p2 = 1, u1 = 2, u2 = 3;
  int dim = 1;  // spatial dimension, u-heads are this wide
};

// Canonical heads (p1, p2, u1, u2) with optional output scales.
std::vector<HeadSpec> flow_heads(int dim, double p_scale = 1.0, double u_scale = 1.0);

// Validates the canonical layout and returns the row offsets.
HeadLayout field_layout(const Network& net, int dim);

// Batched evaluator. forward() runs the encoder and trunk over a batch of
// points, optionally carrying d tangent directions (one per coordinate) so
// that pressure gradients and velocity divergences come out exactly.
// backward() replays the tape to turn output cotangents into parameter
// cotangents, including the second-order terms the tangents introduce.
class ModelTape {
 public:
  ModelTape(const Network& net, const Encoder& enc);

  void forward(const Eigen::Ref<const Matrix>& X, std::optional<double> beta, bool tangents);

  int n() const { return static_cast<int>(y_.cols()); }
  bool has_tangents() const { return with_tangents_; }
  const Matrix& y() const { return y_; }
  const Matrix& dy(int j) const { return dy_[j]; }

  // ybar pairs with y(), dybar[j] with dy(j); pass an empty dybar when the
  // forward pass ran without tangents. Adds into grad (layout of
  // Network::params) and returns the cotangent of the beta input slot.
  double backward(const Matrix& ybar, const std::vector<Matrix>& dybar, Vector& grad);

  const Network& net() const { return net_; }
  const Encoder& encoder() const { return enc_; }

 private:
  const Network& net_;
  const Encoder& enc_;
  bool with_tangents_ = false;
  int nd_ = 0;  // coordinate dimension
  Matrix phi_;
  std::vector<Matrix> dphi_;
  std::vector<Matrix> a_, h_, sg_;
  std::vector<std::vector<Matrix>> da_, dh_;
  Matrix y_;
  std::vector<Matrix> dy_;
  Matrix hbar_, abar_;
  std::vector<Matrix> dhbar_, dabar_;
};

}  // namespace dpp

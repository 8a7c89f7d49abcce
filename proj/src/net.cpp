#include "dpp/net.hpp"

#include <cmath>

namespace dpp {

namespace {

double trunk_gain(Activation act) {
  return act == Activation::tanh ? 5.0 / 3.0 : 1.0;
}

void fill_uniform(Matrix& w, double limit, Rng& rng) {
  // Column-major to match the flattening order used by params().
  for (int j = 0; j < w.cols(); ++j) {
    for (int i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-limit, limit);
  }
}

}  // namespace

Network::Network(NetworkSpec spec, int feature_dim, Rng& init_stream)
    : spec_(std::move(spec)), feature_dim_(feature_dim) {
  if (spec_.depth < 1 || spec_.width < 1) throw ConfigError("network needs depth,width >= 1");
  if (spec_.heads.empty()) throw ConfigError("network needs at least one head");
  if (feature_dim_ < 1) throw ConfigError("network feature dimension must be positive");
  for (const auto& h : spec_.heads) {
    if (h.dim < 1) throw ConfigError("head " + h.name + " has non-positive dim");
    if (!(h.scale != 0)) throw ConfigError("head " + h.name + " has zero scale");
  }

  const int in = input_dim();
  const int wdt = spec_.width;
  w_.reserve(spec_.depth);
  b_.reserve(spec_.depth);
  for (int l = 0; l < spec_.depth; ++l) {
    int fan_in = (l == 0) ? in : wdt;
    Matrix W(wdt, fan_in);
    fill_uniform(W, trunk_gain(spec_.activation) * std::sqrt(3.0 / fan_in), init_stream);
    w_.push_back(std::move(W));
    b_.push_back(Vector::Zero(wdt));
  }
  for (const auto& h : spec_.heads) {
    Matrix W(h.dim, wdt);
    fill_uniform(W, std::sqrt(3.0 / wdt), init_stream);
    hw_.push_back(std::move(W));
    hb_.push_back(Vector::Zero(h.dim));
    head_offsets_.push_back(output_dim_);
    output_dim_ += h.dim;
  }
  if (spec_.activation == Activation::swish) {
    slopes_ = Vector::Constant(spec_.depth, spec_.swish_slope_init);
  }

  param_count_ = 0;
  for (int l = 0; l < spec_.depth; ++l) {
    param_count_ += static_cast<int>(w_[l].size() + b_[l].size());
  }
  for (std::size_t k = 0; k < hw_.size(); ++k) {
    param_count_ += static_cast<int>(hw_[k].size() + hb_[k].size());
  }
  param_count_ += static_cast<int>(slopes_.size());
}

Vector Network::params() const {
  Vector theta(param_count_);
  Eigen::Index off = 0;
  auto put = [&](const auto& m) {
    theta.segment(off, m.size()) = Eigen::Map<const Vector>(m.data(), m.size());
    off += m.size();
  };
  for (int l = 0; l < spec_.depth; ++l) {
    put(w_[l]);
    put(b_[l]);
  }
  for (std::size_t k = 0; k < hw_.size(); ++k) {
    put(hw_[k]);
    put(hb_[k]);
  }
  if (slopes_.size()) put(slopes_);
  return theta;
}

void Network::set_params(const Vector& theta) {
  if (theta.size() != param_count_) throw ConfigError("parameter vector size mismatch");
  Eigen::Index off = 0;
  auto take = [&](auto& m) {
    Eigen::Map<Vector>(m.data(), m.size()) = theta.segment(off, m.size());
    off += m.size();
  };
  for (int l = 0; l < spec_.depth; ++l) {
    take(w_[l]);
    take(b_[l]);
  }
  for (std::size_t k = 0; k < hw_.size(); ++k) {
    take(hw_[k]);
    take(hb_[k]);
  }
  if (slopes_.size()) take(slopes_);
}

std::vector<HeadSpec> flow_heads(int dim, double p_scale, double u_scale) {
  return {{"p1", 1, p_scale}, {"p2", 1, p_scale}, {"u1", dim, u_scale}, {"u2", dim, u_scale}};
}

HeadLayout field_layout(const Network& net, int dim) {
  const auto& heads = net.spec().heads;
  if (heads.size() != 4 || heads[0].name != "p1" || heads[1].name != "p2" ||
      heads[2].name != "u1" || heads[3].name != "u2" || heads[0].dim != 1 ||
      heads[1].dim != 1 || heads[2].dim != dim || heads[3].dim != dim) {
    throw ConfigError("network heads do not follow the p1,p2,u1,u2 flow layout");
  }
  HeadLayout lay;
  lay.p1 = net.head_offset(0);
  lay.p2 = net.head_offset(1);
  lay.u1 = net.head_offset(2);
  lay.u2 = net.head_offset(3);
  lay.dim = dim;
  return lay;
}

ModelTape::ModelTape(const Network& net, const Encoder& enc) : net_(net), enc_(enc) {
  if (net_.feature_dim() != enc_.out_dim()) {
    throw ConfigError("network feature dimension does not match encoder output");
  }
}

void ModelTape::forward(const Eigen::Ref<const Matrix>& X, std::optional<double> beta,
                        bool tangents) {
  if (X.rows() != enc_.in_dim()) throw ConfigError("point batch has wrong dimension");
  if (net_.spec().beta_input != beta.has_value()) {
    throw ConfigError(net_.spec().beta_input ? "model expects a beta value"
                                             : "model takes no beta value");
  }
  const auto& spec = net_.spec();
  const int L = spec.depth;
  const auto n = X.cols();
  nd_ = static_cast<int>(X.rows());
  with_tangents_ = tangents;

  const int in = net_.input_dim();
  if (spec.beta_input) {
    Matrix raw;
    std::vector<Matrix> draw;
    if (tangents) {
      enc_.encode_with_tangents(X, raw, draw);
    } else {
      enc_.encode(X, raw);
    }
    phi_.resize(in, n);
    phi_.topRows(in - 1) = raw;
    phi_.row(in - 1).setConstant(*beta);
    if (tangents) {
      dphi_.assign(nd_, Matrix::Zero(in, n));
      for (int j = 0; j < nd_; ++j) dphi_[j].topRows(in - 1) = draw[j];
    }
  } else if (tangents) {
    enc_.encode_with_tangents(X, phi_, dphi_);
  } else {
    enc_.encode(X, phi_);
  }

  a_.resize(L);
  h_.resize(L);
  sg_.resize(spec.activation == Activation::swish ? L : 0);
  da_.assign(tangents ? L : 0, {});
  dh_.assign(tangents ? L : 0, {});

  const Matrix* prev = &phi_;
  const std::vector<Matrix>* dprev = &dphi_;
  for (int l = 0; l < L; ++l) {
    a_[l].resize(spec.width, n);
    a_[l].noalias() = net_.w_[l] * (*prev);
    a_[l].colwise() += net_.b_[l];
    if (spec.activation == Activation::swish) {
      const double s = net_.slopes_[l];
      sg_[l] = (1.0 + (-s * a_[l].array()).exp()).inverse().matrix();
      h_[l] = a_[l].cwiseProduct(sg_[l]);
    } else {
      h_[l] = a_[l].array().tanh().matrix();
    }
    if (tangents) {
      Matrix s1;  // activation derivative at the pre-activations
      if (spec.activation == Activation::swish) {
        const double s = net_.slopes_[l];
        auto e = sg_[l].array();
        s1 = (e * (1.0 + s * a_[l].array() * (1.0 - e))).matrix();
      } else {
        s1 = (1.0 - h_[l].array().square()).matrix();
      }
      da_[l].resize(nd_);
      dh_[l].resize(nd_);
      for (int j = 0; j < nd_; ++j) {
        da_[l][j].resize(spec.width, n);
        da_[l][j].noalias() = net_.w_[l] * (*dprev)[j];
        dh_[l][j] = s1.cwiseProduct(da_[l][j]);
      }
      dprev = &dh_[l];
    }
    prev = &h_[l];
  }

  y_.resize(net_.output_dim(), n);
  dy_.assign(tangents ? nd_ : 0, Matrix());
  for (int j = 0; tangents && j < nd_; ++j) dy_[j].resize(net_.output_dim(), n);
  const Matrix& last = h_[L - 1];
  for (std::size_t k = 0; k < net_.hw_.size(); ++k) {
    const int off = net_.head_offsets_[k];
    const int m = static_cast<int>(net_.hw_[k].rows());
    const double sc = spec.heads[k].scale;
    y_.middleRows(off, m).noalias() = sc * (net_.hw_[k] * last);
    y_.middleRows(off, m).colwise() += sc * net_.hb_[k];
    if (tangents) {
      for (int j = 0; j < nd_; ++j) {
        dy_[j].middleRows(off, m).noalias() = sc * (net_.hw_[k] * dh_[L - 1][j]);
      }
    }
  }
}

double ModelTape::backward(const Matrix& ybar, const std::vector<Matrix>& dybar, Vector& grad) {
  const auto& spec = net_.spec();
  const int L = spec.depth;
  const auto n = y_.cols();
  const bool tg = with_tangents_ && !dybar.empty();
  if (grad.size() != net_.param_count()) throw ConfigError("gradient vector size mismatch");

  // Offsets into the flat parameter vector, mirroring Network::params().
  std::vector<Eigen::Index> woff(L), boff(L), hwoff(net_.hw_.size()), hboff(net_.hw_.size());
  Eigen::Index off = 0;
  for (int l = 0; l < L; ++l) {
    woff[l] = off;
    off += net_.w_[l].size();
    boff[l] = off;
    off += net_.b_[l].size();
  }
  for (std::size_t k = 0; k < net_.hw_.size(); ++k) {
    hwoff[k] = off;
    off += net_.hw_[k].size();
    hboff[k] = off;
    off += net_.hb_[k].size();
  }
  const Eigen::Index soff = off;

  hbar_.setZero(spec.width, n);
  if (tg) {
    dhbar_.assign(nd_, Matrix());
    for (int j = 0; j < nd_; ++j) dhbar_[j].setZero(spec.width, n);
  }
  const Matrix& last = h_[L - 1];
  for (std::size_t k = 0; k < net_.hw_.size(); ++k) {
    const int ho = net_.head_offsets_[k];
    const int m = static_cast<int>(net_.hw_[k].rows());
    const double sc = spec.heads[k].scale;
    auto yb = ybar.middleRows(ho, m);
    Eigen::Map<Matrix> wg(grad.data() + hwoff[k], m, spec.width);
    Eigen::Map<Vector> bg(grad.data() + hboff[k], m);
    wg.noalias() += sc * (yb * last.transpose());
    bg.noalias() += sc * yb.rowwise().sum();
    hbar_.noalias() += sc * (net_.hw_[k].transpose() * yb);
    if (tg) {
      for (int j = 0; j < nd_; ++j) {
        auto dyb = dybar[j].middleRows(ho, m);
        wg.noalias() += sc * (dyb * dh_[L - 1][j].transpose());
        dhbar_[j].noalias() += sc * (net_.hw_[k].transpose() * dyb);
      }
    }
  }

  double beta_bar = 0.0;
  Eigen::ArrayXXd s1, s2;
  for (int l = L - 1; l >= 0; --l) {
    if (spec.activation == Activation::swish) {
      const double s = net_.slopes_[l];
      auto e = sg_[l].array();
      auto a = a_[l].array();
      s1 = e * (1.0 + s * a * (1.0 - e));
      if (tg) s2 = s * e * (1.0 - e) * (2.0 + s * a * (1.0 - 2.0 * e));
      // Slope cotangent: the activation value and its input-derivative both
      // move with the slope parameter.
      double sg_grad = (a.square() * e * (1.0 - e) * hbar_.array()).sum();
      if (tg) {
        Eigen::ArrayXXd dps = a * e * (1.0 - e) * (2.0 + s * a * (1.0 - 2.0 * e));
        for (int j = 0; j < nd_; ++j) {
          sg_grad += (dps * da_[l][j].array() * dhbar_[j].array()).sum();
        }
      }
      grad[soff + l] += sg_grad;
    } else {
      auto t = h_[l].array();
      s1 = 1.0 - t.square();
      if (tg) s2 = -2.0 * t * (1.0 - t.square());
    }

    abar_ = (s1 * hbar_.array()).matrix();
    if (tg) {
      dabar_.resize(nd_);
      for (int j = 0; j < nd_; ++j) {
        abar_.array() += s2 * da_[l][j].array() * dhbar_[j].array();
        dabar_[j] = (s1 * dhbar_[j].array()).matrix();
      }
    }

    const Matrix& prev = (l == 0) ? phi_ : h_[l - 1];
    Eigen::Map<Matrix> wg(grad.data() + woff[l], spec.width, prev.rows());
    Eigen::Map<Vector> bg(grad.data() + boff[l], spec.width);
    wg.noalias() += abar_ * prev.transpose();
    bg.noalias() += abar_.rowwise().sum();
    if (tg) {
      for (int j = 0; j < nd_; ++j) {
        const Matrix& dprev = (l == 0) ? dphi_[j] : dh_[l - 1][j];
        wg.noalias() += dabar_[j] * dprev.transpose();
      }
    }

    if (l > 0) {
      hbar_ = net_.w_[l].transpose() * abar_;
      if (tg) {
        for (int j = 0; j < nd_; ++j) dhbar_[j] = net_.w_[l].transpose() * dabar_[j];
      }
    } else if (spec.beta_input) {
      // Only the primal path reaches the beta slot: its tangent rows are zero.
      beta_bar = (net_.w_[0].col(net_.input_dim() - 1).transpose() * abar_).sum();
    }
  }
  return beta_bar;
}

}  // namespace dpp

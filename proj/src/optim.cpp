#include "dpp/optim.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace dpp {

Adam::Adam(AdamConfig cfg, Eigen::Index n)
    : cfg_(cfg), m_(Vector::Zero(n)), v_(Vector::Zero(n)) {
  if (!(cfg_.lr > 0)) throw ConfigError("adam lr must be positive");
}

void Adam::step(Vector& x, const Vector& grad) {
  Vector g = grad;
  if (cfg_.grad_clip > 0) {
    double norm = g.norm();
    if (norm > cfg_.grad_clip) g *= cfg_.grad_clip / norm;
  }
  ++t_;
  m_ = cfg_.beta1 * m_ + (1.0 - cfg_.beta1) * g;
  v_ = cfg_.beta2 * v_ + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
  const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
  const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
  x.array() -=
      cfg_.lr * (m_.array() / bc1) / ((v_.array() / bc2).sqrt() + cfg_.eps);
}

PlateauScheduler::PlateauScheduler(double initial_lr, double factor, int patience, double floor)
    : lr_(initial_lr),
      factor_(factor),
      floor_(floor),
      patience_(patience),
      best_(std::numeric_limits<double>::infinity()) {
  if (!(factor_ > 0) || !(factor_ < 1)) throw ConfigError("scheduler factor must be in (0,1)");
  if (patience_ < 1) throw ConfigError("scheduler patience must be positive");
}

double PlateauScheduler::observe(double loss) {
  if (loss < best_) {
    best_ = loss;
    stale_ = 0;
  } else if (++stale_ >= patience_) {
    lr_ = std::max(lr_ * factor_, floor_);
    stale_ = 0;
  }
  return lr_;
}

LbfgsResult lbfgs_minimize(const Objective& f, Vector& x, const LbfgsConfig& cfg) {
  LbfgsResult res;
  const auto n = x.size();
  Vector g(n), g_new(n);
  double fx = f(x, g);
  ++res.evals;
  if (!std::isfinite(fx)) throw DivergenceError("objective non-finite at line-search start");

  std::deque<Vector> s_hist, y_hist;
  std::deque<double> rho_hist;
  Vector d(n), x_new(n);

  for (int it = 0; it < cfg.max_iters; ++it) {
    if (g.norm() < cfg.grad_tol) {
      res.status = LbfgsStatus::converged;
      break;
    }

    // Two-loop recursion for the search direction.
    d = -g;
    const int m = static_cast<int>(s_hist.size());
    std::vector<double> a(m);
    for (int i = m - 1; i >= 0; --i) {
      a[i] = rho_hist[i] * s_hist[i].dot(d);
      d -= a[i] * y_hist[i];
    }
    if (m > 0) d *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (int i = 0; i < m; ++i) {
      double b = rho_hist[i] * y_hist[i].dot(d);
      d += (a[i] - b) * s_hist[i];
    }

    double dg0 = g.dot(d);
    if (!(dg0 < 0)) {  // not a descent direction; restart from steepest descent
      d = -g;
      dg0 = g.dot(d);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    // Strong Wolfe line search: bracketing phase, then zoom by bisection.
    const double f0 = fx;
    double alpha = (it == 0) ? std::min(1.0, 1.0 / std::max(g.norm(), 1e-16)) : 1.0;
    double alpha_prev = 0.0, f_prev = f0;
    double lo = -1.0, hi = -1.0, f_lo = f0;
    bool accepted = false, bracketed = false;
    double f_alpha = f0, dg_alpha = 0.0;

    for (int ls = 0; ls < cfg.max_line_iters && !accepted && !bracketed; ++ls) {
      x_new = x + alpha * d;
      f_alpha = f(x_new, g_new);
      ++res.evals;
      if (!std::isfinite(f_alpha) || f_alpha > f0 + cfg.c1 * alpha * dg0 ||
          (ls > 0 && f_alpha >= f_prev)) {
        lo = alpha_prev;
        f_lo = f_prev;
        hi = alpha;
        bracketed = true;
        break;
      }
      dg_alpha = g_new.dot(d);
      if (std::abs(dg_alpha) <= -cfg.c2 * dg0) {
        accepted = true;
        break;
      }
      if (dg_alpha >= 0) {
        lo = alpha;
        f_lo = f_alpha;
        hi = alpha_prev;
        bracketed = true;
        break;
      }
      alpha_prev = alpha;
      f_prev = f_alpha;
      alpha = std::min(2.0 * alpha, 1e8);
    }

    if (bracketed) {
      for (int z = 0; z < cfg.max_line_iters && !accepted; ++z) {
        alpha = 0.5 * (lo + hi);
        x_new = x + alpha * d;
        f_alpha = f(x_new, g_new);
        ++res.evals;
        if (!std::isfinite(f_alpha) || f_alpha > f0 + cfg.c1 * alpha * dg0 || f_alpha >= f_lo) {
          hi = alpha;
        } else {
          dg_alpha = g_new.dot(d);
          if (std::abs(dg_alpha) <= -cfg.c2 * dg0) {
            accepted = true;
            break;
          }
          if (dg_alpha * (hi - lo) >= 0) hi = lo;
          lo = alpha;
          f_lo = f_alpha;
        }
        if (std::abs(hi - lo) < 1e-16 * std::max(1.0, std::abs(lo))) break;
      }
    }

    if (!accepted) {
      res.status = LbfgsStatus::line_search_failed;
      break;
    }

    Vector s = alpha * d;
    Vector yv = g_new - g;
    double sy = s.dot(yv);
    if (sy > 1e-10 * s.norm() * yv.norm()) {
      if (static_cast<int>(s_hist.size()) == cfg.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
    }
    x = x_new;
    fx = f_alpha;
    g = g_new;
    res.iters = it + 1;
  }

  res.final_loss = fx;
  return res;
}

}  // namespace dpp

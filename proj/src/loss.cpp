#include "dpp/loss.hpp"

#include <cmath>

namespace dpp {

namespace {
constexpr int kChunk = 512;  // keeps the tape workspace modest on big clouds
}

LossEvaluator::LossEvaluator(const Network& net, const Encoder& enc, const ProblemSpec& problem)
    : problem_(problem),
      lay_(field_layout(net, problem.geometry.dim())),
      tape_(net, enc) {}

LossBreakdown LossEvaluator::eval(const Matrix& interior, const BoundarySample& boundary,
                                  const FluxObservation* obs, std::optional<double> beta) {
  return run(interior, boundary, obs, beta, nullptr);
}

LossBreakdown LossEvaluator::eval_task_grads(const Matrix& interior,
                                             const BoundarySample& boundary,
                                             const FluxObservation* obs,
                                             std::optional<double> beta, TaskGrads& grads) {
  return run(interior, boundary, obs, beta, &grads);
}

LossBreakdown LossEvaluator::eval_grad(const Matrix& interior, const BoundarySample& boundary,
                                       const FluxObservation* obs, std::optional<double> beta,
                                       const LossWeights& w, Vector& grad, double* dbeta_value) {
  TaskGrads grads;
  grads.reset(grad.size());
  LossBreakdown out = run(interior, boundary, obs, beta, &grads);
  grad += grads.combined(w);
  if (dbeta_value) *dbeta_value = grads.beta_combined(w);
  return out;
}

LossBreakdown LossEvaluator::run(const Matrix& interior, const BoundarySample& boundary,
                                 const FluxObservation* obs, std::optional<double> beta,
                                 TaskGrads* grads) {
  const int dim = problem_.geometry.dim();
  const double mu = problem_.material.mu;
  const double bval = beta.value_or(problem_.material.beta);
  const std::optional<double> feed =
      tape_.net().spec().beta_input ? beta : std::optional<double>();
  if (tape_.net().spec().beta_input && !beta) {
    throw ConfigError("inverse model evaluated without a beta value");
  }
  const auto ni = interior.cols();
  const auto nb = boundary.points.cols();
  LossBreakdown out;

  double pde_sum = 0.0;
  for (Eigen::Index s = 0; s < ni; s += kChunk) {
    const auto c = std::min<Eigen::Index>(kChunk, ni - s);
    auto X = interior.middleCols(s, c);
    tape_.forward(X, feed, true);
    const Matrix& y = tape_.y();

    Eigen::ArrayXd ik1(c), ik2(c);
    for (Eigen::Index i = 0; i < c; ++i) {
      Vec x(X(0, i), dim > 1 ? X(1, i) : 0.0);
      ik1[i] = mu / permeability_at(problem_, x, NetworkId::macro);
      ik2[i] = mu / permeability_at(problem_, x, NetworkId::micro);
    }

    Eigen::ArrayXXd r1(dim, c), r2(dim, c);
    for (int j = 0; j < dim; ++j) {
      r1.row(j) = ik1.transpose() * y.row(lay_.u1 + j).array() +
                  tape_.dy(j).row(lay_.p1).array() - problem_.material.body_force1[j];
      r2.row(j) = ik2.transpose() * y.row(lay_.u2 + j).array() +
                  tape_.dy(j).row(lay_.p2).array() - problem_.material.body_force2[j];
    }
    Eigen::ArrayXd pd =
        (bval / mu) * (y.row(lay_.p1).array() - y.row(lay_.p2).array()).transpose();
    Eigen::ArrayXd r3 = pd, r4 = -pd;
    for (int j = 0; j < dim; ++j) {
      r3 += tape_.dy(j).row(lay_.u1 + j).array().transpose();
      r4 += tape_.dy(j).row(lay_.u2 + j).array().transpose();
    }
    pde_sum += r1.square().sum() + r2.square().sum() + r3.square().sum() + r4.square().sum();

    if (grads) {
      const double sc = 2.0 / static_cast<double>(ni);
      ybar_.setZero(y.rows(), c);
      dybar_.assign(dim, Matrix::Zero(y.rows(), c));
      Eigen::ArrayXd pres = sc * (bval / mu) * (r3 - r4);
      ybar_.row(lay_.p1) = pres.matrix().transpose();
      ybar_.row(lay_.p2) = -pres.matrix().transpose();
      for (int j = 0; j < dim; ++j) {
        ybar_.row(lay_.u1 + j) = (sc * ik1.transpose() * r1.row(j)).matrix();
        ybar_.row(lay_.u2 + j) = (sc * ik2.transpose() * r2.row(j)).matrix();
        dybar_[j].row(lay_.p1) = sc * r1.row(j).matrix();
        dybar_[j].row(lay_.p2) = sc * r2.row(j).matrix();
        dybar_[j].row(lay_.u1 + j) = sc * r3.matrix().transpose();
        dybar_[j].row(lay_.u2 + j) = sc * r4.matrix().transpose();
      }
      grads->beta_pde +=
          sc / mu *
          ((r3 - r4) * (y.row(lay_.p1).array() - y.row(lay_.p2).array()).transpose()).sum();
      grads->beta_pde += tape_.backward(ybar_, dybar_, grads->pde);
    }
  }
  out.pde = ni > 0 ? pde_sum / static_cast<double>(ni) : 0.0;

  double bc_sum = 0.0;
  const std::vector<Matrix> no_tangents;
  for (Eigen::Index s = 0; s < nb; s += kChunk) {
    const auto c = std::min<Eigen::Index>(kChunk, nb - s);
    tape_.forward(boundary.points.middleCols(s, c), feed, false);
    const Matrix& y = tape_.y();
    if (grads) ybar_.setZero(y.rows(), c);
    const double sc = 2.0 / static_cast<double>(nb);
    for (Eigen::Index i = 0; i < c; ++i) {
      const auto gi = s + i;
      for (int si : boundary.matches[gi]) {
        const auto& seg = problem_.segments[si];
        if (seg.kind == BcKind::pressure) {
          const int row = (seg.network == NetworkId::macro) ? lay_.p1 : lay_.p2;
          const double diff = y(row, i) - seg.value;
          bc_sum += diff * diff;
          if (grads) ybar_(row, i) += sc * diff;
        } else {
          const int row = (seg.network == NetworkId::macro) ? lay_.u1 : lay_.u2;
          double un = 0.0;
          for (int a = 0; a < dim; ++a) un += y(row + a, i) * boundary.normals(a, gi);
          const double diff = un - seg.value;
          bc_sum += diff * diff;
          if (grads) {
            for (int a = 0; a < dim; ++a) {
              ybar_(row + a, i) += sc * diff * boundary.normals(a, gi);
            }
          }
        }
      }
    }
    if (grads) grads->beta_bc += tape_.backward(ybar_, no_tangents, grads->bc);
  }
  out.bc = nb > 0 ? bc_sum / static_cast<double>(nb) : 0.0;

  if (obs) {
    const double q = flux_inner(obs->quad, feed);
    const double diff = q - obs->q_obs;
    out.obs = diff * diff;
    if (grads) {
      // flux_inner left the forward state on the tape
      ybar_.setZero(tape_.y().rows(), obs->quad.points.cols());
      const double sc = 2.0 * diff * obs->quad.weight;
      for (Eigen::Index j = 0; j < obs->quad.points.cols(); ++j) {
        for (int a = 0; a < dim; ++a) {
          ybar_(lay_.u1 + a, j) += sc * obs->quad.normals(a, j);
          ybar_(lay_.u2 + a, j) += sc * obs->quad.normals(a, j);
        }
      }
      grads->beta_obs += tape_.backward(ybar_, no_tangents, grads->obs);
    }
  }
  return out;
}

double LossEvaluator::flux_inner(const SegmentQuadrature& quad, std::optional<double> feed) {
  tape_.forward(quad.points, feed, false);
  const int dim = problem_.geometry.dim();
  double q = 0.0;
  for (Eigen::Index j = 0; j < quad.points.cols(); ++j) {
    for (int a = 0; a < dim; ++a) {
      q += quad.weight * (tape_.y()(lay_.u1 + a, j) + tape_.y()(lay_.u2 + a, j)) *
           quad.normals(a, j);
    }
  }
  return q;
}

double LossEvaluator::flux(const SegmentQuadrature& quad, std::optional<double> beta) {
  const std::optional<double> feed =
      tape_.net().spec().beta_input ? beta : std::optional<double>();
  return flux_inner(quad, feed);
}

Vector LossEvaluator::indicators(const Matrix& pts, std::optional<double> beta) {
  const int dim = problem_.geometry.dim();
  const double bval = beta.value_or(problem_.material.beta);
  const std::optional<double> feed =
      tape_.net().spec().beta_input ? beta : std::optional<double>();
  const auto n = pts.cols();
  Vector out(n);
  for (Eigen::Index s = 0; s < n; s += kChunk) {
    const auto c = std::min<Eigen::Index>(kChunk, n - s);
    auto X = pts.middleCols(s, c);
    tape_.forward(X, feed, true);
    for (Eigen::Index i = 0; i < c; ++i) {
      Vec x(X(0, i), dim > 1 ? X(1, i) : 0.0);
      FieldSample f = fields_from_tape(tape_, lay_, static_cast<int>(i));
      Residuals r = residuals(f, problem_, x, bval);
      out[s + i] = residual_indicator(r, dim);
    }
  }
  return out;
}

}  // namespace dpp

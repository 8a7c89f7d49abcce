#include "dpp/physics.hpp"

#include <cmath>

namespace dpp {

FieldSample fields_from_tape(const ModelTape& tape, const HeadLayout& lay, int col) {
  FieldSample f;
  const Matrix& y = tape.y();
  f.p1 = y(lay.p1, col);
  f.p2 = y(lay.p2, col);
  for (int a = 0; a < lay.dim; ++a) {
    f.u1[a] = y(lay.u1 + a, col);
    f.u2[a] = y(lay.u2 + a, col);
  }
  if (tape.has_tangents()) {
    for (int j = 0; j < lay.dim; ++j) {
      const Matrix& dyj = tape.dy(j);
      f.grad_p1[j] = dyj(lay.p1, col);
      f.grad_p2[j] = dyj(lay.p2, col);
      f.div_u1 += dyj(lay.u1 + j, col);
      f.div_u2 += dyj(lay.u2 + j, col);
    }
  }
  return f;
}

FieldSample eval_fields(const Surrogate& m, const Vec& x) {
  const int dim = m.enc->in_dim();
  ModelTape tape(*m.net, *m.enc);
  Matrix X(dim, 1);
  for (int a = 0; a < dim; ++a) X(a, 0) = x[a];
  tape.forward(X, m.beta_feature, true);
  return fields_from_tape(tape, field_layout(*m.net, dim), 0);
}

Residuals residuals(const FieldSample& f, const ProblemSpec& p, const Vec& x,
                    std::optional<double> beta) {
  const int dim = p.geometry.dim();
  const double mu = p.material.mu;
  const double b = beta.value_or(p.material.beta);
  const double k1 = permeability_at(p, x, NetworkId::macro);
  const double k2 = permeability_at(p, x, NetworkId::micro);
  Residuals r;
  for (int a = 0; a < dim; ++a) {
    r.r1[a] = (mu / k1) * f.u1[a] + f.grad_p1[a] - p.material.body_force1[a];
    r.r2[a] = (mu / k2) * f.u2[a] + f.grad_p2[a] - p.material.body_force2[a];
  }
  const double pd = (b / mu) * (f.p1 - f.p2);
  r.r3 = f.div_u1 + pd;
  r.r4 = f.div_u2 - pd;
  return r;
}

double residual_indicator(const Residuals& r, int dim) {
  double s = r.r3 * r.r3 + r.r4 * r.r4;
  for (int a = 0; a < dim; ++a) s += r.r1[a] * r.r1[a] + r.r2[a] * r.r2[a];
  return std::sqrt(s);
}

double transfer_rate(double p1, double p2, double beta, double mu) {
  return -(beta / mu) * (p1 - p2);
}

FieldFn model_fields(const Surrogate& m) {
  return [m](const Vec& x) { return eval_fields(m, x); };
}

double ls_energy(const FieldFn& fields, const ProblemSpec& p, int n_interior, int n_per_segment,
                 Rng& rng) {
  const int dim = p.geometry.dim();
  double acc = 0.0;
  const double wi = p.geometry.measure() / n_interior;
  for (int i = 0; i < n_interior; ++i) {
    Vec x = p.geometry.sample_point(rng);
    FieldSample f = fields(x);
    const double mu = p.material.mu;
    const double k1 = permeability_at(p, x, NetworkId::macro);
    const double k2 = permeability_at(p, x, NetworkId::micro);
    const double pd = (p.material.beta / mu) * (f.p1 - f.p2);
    double q = 0.0;
    for (int a = 0; a < dim; ++a) {
      double m1 = (mu / k1) * f.u1[a] + f.grad_p1[a];
      double m2 = (mu / k2) * f.u2[a] + f.grad_p2[a];
      q += m1 * m1 + m2 * m2;
    }
    double c1 = f.div_u1 + pd;
    double c2 = f.div_u2 - pd;
    acc += wi * (q + c1 * c1 + c2 * c2);
  }
  for (const auto& seg : p.segments) {
    SegmentQuadrature q = segment_midpoints(p.geometry, seg.where, n_per_segment);
    for (int j = 0; j < q.points.cols(); ++j) {
      Vec x = Vec::Zero(), n = Vec::Zero();
      for (int a = 0; a < dim; ++a) {
        x[a] = q.points(a, j);
        n[a] = q.normals(a, j);
      }
      FieldSample f = fields(x);
      double v = 0.0;
      if (seg.kind == BcKind::pressure) {
        v = (seg.network == NetworkId::macro) ? f.p1 : f.p2;
      } else {
        const Vec& u = (seg.network == NetworkId::macro) ? f.u1 : f.u2;
        for (int a = 0; a < dim; ++a) v += u[a] * n[a];
      }
      acc += q.weight * v * v;
    }
  }
  return acc;
}

}  // namespace dpp

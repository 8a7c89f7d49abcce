#include "dpp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dpp {

namespace {

constexpr int kLattice1D = 1001;
constexpr int kLattice2D = 201;

void append(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

// Lattice nodes kept inside (or on the rim of) the geometry, row-major with
// x varying fastest.
std::vector<Vec> lattice_points(const Geometry& g) {
  std::vector<Vec> pts;
  if (g.dim() == 1) {
    pts.reserve(kLattice1D);
    for (int i = 0; i < kLattice1D; ++i)
      pts.emplace_back(g.length * i / (kLattice1D - 1.0), 0.0);
    return pts;
  }
  double x0 = 0.0, y0 = 0.0, lx = g.lx, ly = g.ly;
  if (g.kind == GeometryKind::annulus) {
    x0 = y0 = -g.r_outer;
    lx = ly = 2.0 * g.r_outer;
  }
  for (int j = 0; j < kLattice2D; ++j)
    for (int i = 0; i < kLattice2D; ++i) {
      const Vec x(x0 + lx * i / (kLattice2D - 1.0), y0 + ly * j / (kLattice2D - 1.0));
      if (g.kind != GeometryKind::annulus || g.contains(x)) pts.push_back(x);
    }
  return pts;
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::string out = "round,epoch,pde,bc,obs,lambda_pde,lambda_bc,lambda_obs,total\n";
  for (const auto& r : history) {
    out += std::to_string(r.round);
    out += ',';
    out += std::to_string(r.epoch);
    out += ',';
    append(out, r.pde);
    out += ',';
    append(out, r.bc);
    out += ',';
    if (r.obs) append(out, *r.obs);
    out += ',';
    append(out, r.w_pde);
    out += ',';
    append(out, r.w_bc);
    out += ',';
    append(out, r.w_obs);
    out += ',';
    append(out, r.total);
    out += '\n';
  }
  return out;
}

std::string grid1d_csv(const GridSolution& g) {
  std::string out = g.tag + ",p1,p2,u1,u2\n";
  for (Eigen::Index i = 0; i < g.coords.size(); ++i) {
    append(out, g.coords[i]);
    out += ',';
    append(out, g.p1[i]);
    out += ',';
    append(out, g.p2[i]);
    out += ',';
    append(out, g.u1[i]);
    out += ',';
    append(out, g.u2[i]);
    out += '\n';
  }
  return out;
}

std::string grid2d_csv(const GridSolution2D& g) {
  std::string out = "x,y,p1,p2,u1x,u1y,u2x,u2y\n";
  for (Eigen::Index j = 0; j < g.ys.size(); ++j)
    for (Eigen::Index i = 0; i < g.xs.size(); ++i) {
      append(out, g.xs[i]);
      out += ',';
      append(out, g.ys[j]);
      for (const Matrix* f : {&g.p1, &g.p2, &g.u1x, &g.u1y, &g.u2x, &g.u2y}) {
        out += ',';
        append(out, (*f)(i, j));
      }
      out += '\n';
    }
  return out;
}

std::string fields_csv(const FieldFn& fields, const Geometry& geom, double beta, double mu) {
  const bool two_d = geom.dim() == 2;
  std::string out =
      two_d ? "x,y,p1,p2,u1x,u1y,u2x,u2y,chi\n" : "x,p1,p2,u1,u2,chi\n";
  for (const Vec& x : lattice_points(geom)) {
    const FieldSample f = fields(x);
    append(out, x.x());
    if (two_d) {
      out += ',';
      append(out, x.y());
    }
    out += ',';
    append(out, f.p1);
    out += ',';
    append(out, f.p2);
    out += ',';
    append(out, f.u1.x());
    if (two_d) {
      out += ',';
      append(out, f.u1.y());
    }
    out += ',';
    append(out, f.u2.x());
    if (two_d) {
      out += ',';
      append(out, f.u2.y());
    }
    out += ',';
    append(out, transfer_rate(f.p1, f.p2, beta, mu));
    out += '\n';
  }
  return out;
}

std::string fields_long_csv(const FieldFn& fields, const Geometry& geom, double beta, double mu) {
  const bool two_d = geom.dim() == 2;
  const std::vector<Vec> pts = lattice_points(geom);
  std::vector<FieldSample> samples;
  samples.reserve(pts.size());
  for (const Vec& x : pts) samples.push_back(fields(x));

  std::vector<std::pair<std::string, std::function<double(const FieldSample&)>>> cols;
  cols.emplace_back("p1", [](const FieldSample& f) { return f.p1; });
  cols.emplace_back("p2", [](const FieldSample& f) { return f.p2; });
  if (two_d) {
    cols.emplace_back("u1x", [](const FieldSample& f) { return f.u1.x(); });
    cols.emplace_back("u1y", [](const FieldSample& f) { return f.u1.y(); });
    cols.emplace_back("u2x", [](const FieldSample& f) { return f.u2.x(); });
    cols.emplace_back("u2y", [](const FieldSample& f) { return f.u2.y(); });
  } else {
    cols.emplace_back("u1", [](const FieldSample& f) { return f.u1.x(); });
    cols.emplace_back("u2", [](const FieldSample& f) { return f.u2.x(); });
  }
  cols.emplace_back("chi", [beta, mu](const FieldSample& f) {
    return transfer_rate(f.p1, f.p2, beta, mu);
  });

  std::string out = "x,y,field,value\n";
  for (const auto& [name, pick] : cols)
    for (std::size_t i = 0; i < pts.size(); ++i) {
      append(out, pts[i].x());
      out += ',';
      append(out, pts[i].y());
      out += ',';
      out += name;
      out += ',';
      append(out, pick(samples[i]));
      out += '\n';
    }
  return out;
}

std::string sweep_csv(const std::vector<std::pair<double, double>>& beta_q) {
  std::string out = "beta,q\n";
  for (const auto& [b, q] : beta_q) {
    append(out, b);
    out += ',';
    append(out, q);
    out += '\n';
  }
  return out;
}

}  // namespace dpp

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dpp/oracle.hpp"
#include "dpp/physics.hpp"
#include "dpp/train.hpp"

namespace dpp {

// Full-precision decimal rendering (17 significant digits), enough to
// round-trip any double exactly.
std::string format_full(double v);

// Write-then-rename so readers never observe partial files.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

std::string history_csv(const std::vector<EpochRecord>& history);

std::string grid1d_csv(const GridSolution& g);
std::string grid2d_csv(const GridSolution2D& g);

// Model fields on the standard evaluation lattice (1001 nodes in 1D,
// 201 x 201 in 2D restricted to the domain), plus the transfer rate.
std::string fields_csv(const FieldFn& fields, const Geometry& geom, double beta, double mu);

// Long-format variant of the same lattice: one (x, y, field, value) row per
// field per node, field blocks in a fixed order.
std::string fields_long_csv(const FieldFn& fields, const Geometry& geom, double beta, double mu);

std::string sweep_csv(const std::vector<std::pair<double, double>>& beta_q);

}  // namespace dpp

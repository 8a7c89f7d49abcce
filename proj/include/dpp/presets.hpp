#pragma once

#include <string>
#include <vector>

#include "dpp/invert.hpp"
#include "dpp/train.hpp"

namespace dpp {

// A fully specified run: problem, surrogate architecture, and training
// schedule. The inversion block only matters for presets with an
// observation segment.
struct Preset {
  ProblemSpec problem;
  ModelSpec model;
  TrainConfig train;
  InversionConfig inversion;
};

const std::vector<std::string>& preset_names();

// Throws ConfigError for unknown names.
Preset make_preset(const std::string& name);

}  // namespace dpp

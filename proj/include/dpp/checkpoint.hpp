#pragma once

#include <json.hpp>

#include "dpp/train.hpp"

namespace dpp {

// Complete trained state: feature map, architecture, flat parameter vector,
// and the raw transfer coefficient for inverse models. Serialization is
// canonical (sorted keys, shortest round-trip numbers), so saving a restored
// model reproduces the original bytes.
nlohmann::json checkpoint_to_json(const TrainedModel& model);
TrainedModel checkpoint_from_json(const nlohmann::json& j);

}  // namespace dpp

#pragma once

#include "regimevar/model.hpp"

#include <json.hpp>

#include <filesystem>

namespace regimevar {

// Model document:
//   {"states": M, "generator": [[...]...],
//    "regimes": [{"mu":, "sigma":, "lambda":, "jump": {"a":, "b":}}, ...],
//    "initial_state": i, "measure": "P" | {"Q": {"r": }}}
// initial_state is 1-based. Parse errors carry the JSON path, e.g.
// "$.regimes[1].sigma: expected a number".

RegimeModel model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const RegimeModel& model);
RegimeModel load_model(const std::filesystem::path& path);

}  // namespace regimevar

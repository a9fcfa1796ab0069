#pragma once

#include <json.hpp>

#include "mpk/store.hpp"

namespace mpk {

// Store snapshots. Builtins keep their reserved ids (1..32), so a reloaded
// snapshot resolves builtins positionally; round-trips are lossless.
nlohmann::ordered_json valueToJson(const Value& v);
Value valueFromJson(const nlohmann::json& j);
nlohmann::ordered_json storeToJson(const Store& s);
Store storeFromJson(const nlohmann::json& j);

}  // namespace mpk

#pragma once

#include <json.hpp>
#include <string>

#include "lodstory/evaluators.hpp"

namespace lodstory {

// Wire form of render payloads, shared by the preview route and the data
// blocks inlined into HTML exports.
nlohmann::ordered_json payload_to_json(const RenderPayload& payload);
nlohmann::ordered_json typed_cell_to_json(const TypedCell& cell);

inline std::string payload_json(const RenderPayload& payload) {
  return payload_to_json(payload).dump();
}

}  // namespace lodstory

#pragma once

#include <string>
#include <string_view>

#include "lodstory/exporter.hpp"

namespace lodstory::html {

std::string render_story(const Story& story, const PayloadMap& payloads,
                         SnapshotPolicy policy);

std::string render_component_page(const Story& story, const Component& component,
                                  const PayloadMap& payloads, SnapshotPolicy policy);

}  // namespace lodstory::html

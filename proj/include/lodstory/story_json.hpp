#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lodstory/story.hpp"

namespace lodstory {

inline constexpr int kStorySchemaVersion = 1;

// Compact JSON, keys in schema order, components in story order.
std::string serialize_story(const Story& story);

// Parses and fully validates a version-1 story document. Errors:
// SchemaVersionUnsupported, SchemaViolation (with the offending path).
Story deserialize_story(std::string_view bytes);

// A single component object as it appears in "components".
std::string serialize_component(const Component& component);
// Errors: SchemaViolation with paths rooted at "component".
Component deserialize_component(std::string_view bytes);

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity severity);

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string component_id;  // empty for story-level findings
  std::string message;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// Non-throwing lint pass over a structurally valid story.
std::vector<Diagnostic> validate_story(const Story& story);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace lodstory

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lodstory {

enum class ChartKind { Bar, Line, Scatter, Doughnut };

std::string_view to_string(ChartKind kind);
std::optional<ChartKind> parse_chart_kind(std::string_view text);

namespace block {
struct Text {
  std::string html;
  friend bool operator==(const Text&, const Text&) = default;
};
struct Counter {
  std::string label;
  std::string query;
  friend bool operator==(const Counter&, const Counter&) = default;
};
struct Chart {
  ChartKind kind = ChartKind::Bar;
  std::string title;
  std::string query;
  friend bool operator==(const Chart&, const Chart&) = default;
};
struct Table {
  std::string title;
  std::string query;
  friend bool operator==(const Table&, const Table&) = default;
};
struct Map {
  std::string query;
  std::vector<std::string> filter_vars;
  friend bool operator==(const Map&, const Map&) = default;
};
struct TextSearch {
  std::string query_template;
  friend bool operator==(const TextSearch&, const TextSearch&) = default;
};
// Runs `query_template` with the value of `column` from a row of `source`,
// which must be an earlier text search or action.
struct Action {
  std::string label;
  std::string query_template;
  std::string source;
  std::string column;
  friend bool operator==(const Action&, const Action&) = default;
};
}  // namespace block

using ComponentBody = std::variant<block::Text, block::Counter, block::Chart,
                                   block::Table, block::Map, block::TextSearch,
                                   block::Action>;

enum class ComponentType { Text, Counter, Chart, Table, Map, TextSearch, Action };

std::string_view to_string(ComponentType type);
std::optional<ComponentType> parse_component_type(std::string_view text);

struct Component {
  std::string id;
  ComponentBody body;

  ComponentType type() const { return static_cast<ComponentType>(body.index()); }
  // counter, chart, table, map: evaluated from a fixed query
  bool is_data() const;
  // text_search, action: driven by reader input
  bool is_interactive() const;
  // The query or template text, empty for text blocks.
  const std::string& query_text() const;

  friend bool operator==(const Component&, const Component&) = default;
};

inline constexpr std::string_view kStatisticsTemplate = "statistics";

const std::vector<std::string>& default_palette();

struct Story {
  std::string id;
  std::string title;
  std::optional<std::string> subtitle;
  std::optional<std::string> description;
  std::string endpoint;
  std::optional<std::string> section;
  std::vector<std::string> palette = default_palette();
  std::vector<Component> components;
  // Edit counter maintained by apply_edit and the store. Not part of the
  // serialized document and therefore not part of equality.
  std::uint64_t revision = 0;

  const Component* find(std::string_view component_id) const;

  friend bool operator==(const Story& a, const Story& b) {
    return a.id == b.id && a.title == b.title && a.subtitle == b.subtitle &&
           a.description == b.description && a.endpoint == b.endpoint &&
           a.section == b.section && a.palette == b.palette &&
           a.components == b.components;
  }
};

struct StorySetup {
  std::string template_name{kStatisticsTemplate};
  std::optional<std::string> section;
  std::string title;
  std::string endpoint;
};

// Lowercase ASCII letters and digits separated by single hyphens; "story"
// when nothing survives.
std::string slugify(std::string_view title);

// `base`, or `base-2`, `base-3`, ... whichever is first not in `taken`.
std::string unique_slug(std::string_view base,
                        const std::set<std::string, std::less<>>& taken);

// Errors: EmptyTitle, InvalidEndpointUrl, UnknownTemplate.
Story create_story(const StorySetup& setup,
                   const std::set<std::string, std::less<>>& taken_ids = {});

bool is_valid_story_id(std::string_view id);
bool is_valid_component_id(std::string_view id);
bool is_valid_palette_color(std::string_view color);

namespace edit {
struct Add {
  Component component;  // an empty id is replaced by the first free "cN"
  std::size_t position = 0;
};
struct Update {
  std::string id;
  ComponentBody body;
};
struct Remove {
  std::string id;
};
struct Move {
  std::string id;
  std::size_t position = 0;  // final index of the moved component
};
}  // namespace edit

using Edit = std::variant<edit::Add, edit::Update, edit::Remove, edit::Move>;

// Returns the edited story with revision + 1. Errors: UnknownComponent,
// DuplicateComponent, InvalidPosition, BrokenActionReference,
// SchemaViolation (malformed component id).
Story apply_edit(const Story& story, const Edit& change);

// Throws BrokenActionReference unless every action's source is an earlier
// text_search or action. The error path is "components[k].source".
void check_action_references(const std::vector<Component>& components);

}  // namespace lodstory

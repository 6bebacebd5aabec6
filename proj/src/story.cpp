#include "lodstory/story.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "lodstory/error.hpp"
#include "lodstory/url.hpp"

namespace lodstory {

namespace {

constexpr std::array<std::string_view, 4> kChartKinds = {"bar", "line", "scatter",
                                                         "doughnut"};
constexpr std::array<std::string_view, 7> kComponentTypes = {
    "text", "counter", "chart", "table", "map", "text_search", "action"};

const std::string kEmpty;

}  // namespace

std::string_view to_string(ChartKind kind) {
  return kChartKinds[static_cast<std::size_t>(kind)];
}

std::optional<ChartKind> parse_chart_kind(std::string_view text) {
  for (std::size_t i = 0; i < kChartKinds.size(); ++i) {
    if (kChartKinds[i] == text) return static_cast<ChartKind>(i);
  }
  return std::nullopt;
}

std::string_view to_string(ComponentType type) {
  return kComponentTypes[static_cast<std::size_t>(type)];
}

std::optional<ComponentType> parse_component_type(std::string_view text) {
  for (std::size_t i = 0; i < kComponentTypes.size(); ++i) {
    if (kComponentTypes[i] == text) return static_cast<ComponentType>(i);
  }
  return std::nullopt;
}

bool Component::is_data() const {
  auto t = type();
  return t == ComponentType::Counter || t == ComponentType::Chart ||
         t == ComponentType::Table || t == ComponentType::Map;
}

bool Component::is_interactive() const {
  return type() == ComponentType::TextSearch || type() == ComponentType::Action;
}

const std::string& Component::query_text() const {
  return std::visit(
      [](const auto& b) -> const std::string& {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, block::Text>) {
          return kEmpty;
        } else if constexpr (std::is_same_v<T, block::TextSearch> ||
                             std::is_same_v<T, block::Action>) {
          return b.query_template;
        } else {
          return b.query;
        }
      },
      body);
}

const std::vector<std::string>& default_palette() {
  static const std::vector<std::string> kPalette = {
      "#1F77B4", "#FF7F0E", "#2CA02C", "#D62728", "#9467BD", "#8C564B"};
  return kPalette;
}

const Component* Story::find(std::string_view component_id) const {
  auto it = std::find_if(components.begin(), components.end(),
                         [&](const Component& c) { return c.id == component_id; });
  return it == components.end() ? nullptr : &*it;
}

std::string slugify(std::string_view title) {
  std::string slug;
  bool pending_hyphen = false;
  for (unsigned char c : title) {
    if (std::isalnum(c) && c < 0x80) {
      if (pending_hyphen && !slug.empty()) slug.push_back('-');
      pending_hyphen = false;
      slug.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_hyphen = true;
    }
  }
  return slug.empty() ? "story" : slug;
}

std::string unique_slug(std::string_view base,
                        const std::set<std::string, std::less<>>& taken) {
  std::string candidate(base);
  for (int n = 2; taken.contains(candidate); ++n) {
    candidate = std::string(base) + "-" + std::to_string(n);
  }
  return candidate;
}

Story create_story(const StorySetup& setup,
                   const std::set<std::string, std::less<>>& taken_ids) {
  if (setup.template_name != kStatisticsTemplate) {
    throw Error(ErrorCode::UnknownTemplate,
                "unknown template '" + setup.template_name + "'");
  }
  if (setup.title.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::EmptyTitle, "story title must not be empty");
  }
  if (!parse_http_url(setup.endpoint)) {
    throw Error(ErrorCode::InvalidEndpointUrl,
                "endpoint must be an absolute http(s) URL: '" + setup.endpoint + "'");
  }
  Story story;
  story.id = unique_slug(slugify(setup.title), taken_ids);
  story.title = setup.title;
  story.endpoint = setup.endpoint;
  story.section = setup.section;
  return story;
}

bool is_valid_story_id(std::string_view id) {
  if (id.empty() || id.size() > 128 || id.front() == '-' || id.back() == '-')
    return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return (std::isdigit(c) || std::islower(c) || c == '-') && c < 0x80;
  });
}

bool is_valid_component_id(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return (std::isalnum(c) || c == '-' || c == '_') && c < 0x80;
  });
}

bool is_valid_palette_color(std::string_view color) {
  return color.size() == 7 && color[0] == '#' &&
         std::all_of(color.begin() + 1, color.end(),
                     [](unsigned char c) { return std::isxdigit(c); });
}

void check_action_references(const std::vector<Component>& components) {
  for (std::size_t k = 0; k < components.size(); ++k) {
    const auto* action = std::get_if<block::Action>(&components[k].body);
    if (!action) continue;
    auto path = "components[" + std::to_string(k) + "].source";
    auto source = std::find_if(components.begin(), components.begin() + k,
                               [&](const Component& c) { return c.id == action->source; });
    if (source == components.begin() + k) {
      bool later = std::any_of(components.begin() + k, components.end(),
                               [&](const Component& c) { return c.id == action->source; });
      throw Error(ErrorCode::BrokenActionReference,
                  "action '" + components[k].id + "' " +
                      (later ? "references source '" + action->source +
                                   "' which does not precede it"
                             : "references unknown source '" + action->source + "'"),
                  path);
    }
    if (!source->is_interactive()) {
      throw Error(ErrorCode::BrokenActionReference,
                  "action '" + components[k].id + "' source '" + action->source +
                      "' is a " + std::string(to_string(source->type())) +
                      ", expected text_search or action",
                  path);
    }
  }
}

namespace {

std::size_t index_of(const std::vector<Component>& components, const std::string& id) {
  auto it = std::find_if(components.begin(), components.end(),
                         [&](const Component& c) { return c.id == id; });
  if (it == components.end()) {
    throw Error(ErrorCode::UnknownComponent, "no component with id '" + id + "'");
  }
  return static_cast<std::size_t>(it - components.begin());
}

std::string first_free_id(const std::vector<Component>& components) {
  for (std::size_t n = 1;; ++n) {
    auto id = "c" + std::to_string(n);
    if (std::none_of(components.begin(), components.end(),
                     [&](const Component& c) { return c.id == id; }))
      return id;
  }
}

}  // namespace

Story apply_edit(const Story& story, const Edit& change) {
  Story next = story;
  auto& list = next.components;
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, edit::Add>) {
          if (e.position > list.size()) {
            throw Error(ErrorCode::InvalidPosition,
                        "add position " + std::to_string(e.position) +
                            " outside [0, " + std::to_string(list.size()) + "]");
          }
          Component c = e.component;
          if (c.id.empty()) c.id = first_free_id(list);
          if (!is_valid_component_id(c.id)) {
            throw Error(ErrorCode::SchemaViolation,
                        "component id '" + c.id + "' must match [A-Za-z0-9_-]+", "id");
          }
          if (story.find(c.id)) {
            throw Error(ErrorCode::DuplicateComponent,
                        "component id '" + c.id + "' already exists");
          }
          list.insert(list.begin() + static_cast<std::ptrdiff_t>(e.position),
                      std::move(c));
        } else if constexpr (std::is_same_v<T, edit::Update>) {
          list[index_of(list, e.id)].body = e.body;
        } else if constexpr (std::is_same_v<T, edit::Remove>) {
          list.erase(list.begin() + static_cast<std::ptrdiff_t>(index_of(list, e.id)));
        } else {
          auto from = index_of(list, e.id);
          if (e.position >= list.size()) {
            throw Error(ErrorCode::InvalidPosition,
                        "move position " + std::to_string(e.position) +
                            " outside [0, " + std::to_string(list.size() - 1) + "]");
          }
          Component moved = std::move(list[from]);
          list.erase(list.begin() + static_cast<std::ptrdiff_t>(from));
          list.insert(list.begin() + static_cast<std::ptrdiff_t>(e.position),
                      std::move(moved));
        }
      },
      change);
  check_action_references(list);
  next.revision = story.revision + 1;
  return next;
}

}  // namespace lodstory

#include <algorithm>
#include <cctype>

#include "lodstory/cell_typing.hpp"
#include "lodstory/error.hpp"
#include "lodstory/query_scan.hpp"
#include "lodstory/query_template.hpp"
#include "lodstory/story_json.hpp"

namespace lodstory {

namespace {

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

bool contains(const std::vector<std::string>& v, std::string_view x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// LIMIT n of the outermost query, used as a hint for doughnut slice counts.
std::optional<std::size_t> limit_hint(const std::string& query) {
  auto tokens = scan_query(query);
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    std::string upper = tokens[i].text;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (tokens[i].kind == TokenKind::Word && upper == "LIMIT" &&
        tokens[i + 1].kind == TokenKind::Number) {
      return std::stoul(tokens[i + 1].text);
    }
  }
  return std::nullopt;
}

class Linter {
 public:
  explicit Linter(const Story& story) : story_(story) {}

  std::vector<Diagnostic> run() {
    if (blank(story_.title)) story_level(Severity::Error, "story title is empty");
    if (story_.palette.empty())
      story_level(Severity::Warning, "palette is empty, charts fall back to grey");
    for (const auto& c : story_.components) lint(c);
    return std::move(out_);
  }

 private:
  void story_level(Severity s, std::string message) {
    out_.push_back({s, "", std::move(message)});
  }
  void add(const Component& c, Severity s, std::string message) {
    out_.push_back({s, c.id, std::move(message)});
  }

  // Projection of a data query, or nullopt after reporting why it has none.
  std::optional<std::vector<std::string>> projection(const Component& c,
                                                     const std::string& query) {
    if (blank(query)) {
      add(c, Severity::Error, std::string(to_string(c.type())) + " query is empty");
      return std::nullopt;
    }
    try {
      return extract_select_variables(query);
    } catch (const Error&) {
      add(c, Severity::Error, "query is not a SELECT query");
      return std::nullopt;
    }
  }

  void lint_template(const Component& c, const std::string& text, PlaceholderKind kind) {
    if (blank(text)) {
      add(c, Severity::Error, "query template is empty");
      return;
    }
    try {
      QueryTemplate tpl(text, kind);
    } catch (const Error& e) {
      add(c, Severity::Error, e.what());
      return;
    }
    try {
      extract_select_variables(text);
    } catch (const Error&) {
      add(c, Severity::Error, "query template is not a SELECT query");
    }
  }

  void lint(const Component& c) {
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, block::Text>) {
            if (blank(b.html)) add(c, Severity::Warning, "text block is empty");
          } else if constexpr (std::is_same_v<T, block::Counter>) {
            if (blank(b.label)) add(c, Severity::Warning, "counter label is empty");
            if (auto vars = projection(c, b.query); vars && vars->empty())
              add(c, Severity::Warning, "counter query projects no variable");
          } else if constexpr (std::is_same_v<T, block::Chart>) {
            if (auto vars = projection(c, b.query)) {
              if (!contains(*vars, conventions::kChartLabel) ||
                  !contains(*vars, conventions::kChartValue)) {
                add(c, Severity::Warning, "chart query missing ?label/?value projection");
              }
            }
            if (b.kind == ChartKind::Doughnut && !story_.palette.empty()) {
              if (auto limit = limit_hint(b.query);
                  limit && *limit > story_.palette.size()) {
                add(c, Severity::Info,
                    "doughnut may show up to " + std::to_string(*limit) +
                        " slices but the palette has " +
                        std::to_string(story_.palette.size()) + " colours; colours repeat");
              }
            }
          } else if constexpr (std::is_same_v<T, block::Table>) {
            projection(c, b.query);
          } else if constexpr (std::is_same_v<T, block::Map>) {
            if (auto vars = projection(c, b.query)) {
              bool pair = contains(*vars, conventions::kMapLat) &&
                          contains(*vars, conventions::kMapLong);
              if (!pair && !contains(*vars, conventions::kMapCoordinates)) {
                add(c, Severity::Warning,
                    "map query missing location variables (?lat and ?long, or ?coordinates)");
              }
              for (const auto& f : b.filter_vars) {
                if (!contains(*vars, f))
                  add(c, Severity::Warning, "filter variable ?" + f + " is not projected");
                if (conventions::is_location_var(f))
                  add(c, Severity::Warning, "filter variable ?" + f + " is a location variable");
              }
            }
          } else if constexpr (std::is_same_v<T, block::TextSearch>) {
            lint_template(c, b.query_template, PlaceholderKind::Search);
          } else {
            lint_template(c, b.query_template, PlaceholderKind::Value);
            if (blank(b.column)) {
              add(c, Severity::Error, "action column is empty");
            } else if (const Component* src = story_.find(b.source)) {
              try {
                auto vars = extract_select_variables(src->query_text());
                if (!vars.empty() && !contains(vars, b.column)) {
                  add(c, Severity::Warning, "source '" + b.source +
                                                "' does not project column ?" + b.column);
                }
              } catch (const Error&) {
              }
            }
            if (!story_.find(b.source))
              add(c, Severity::Error, "action source '" + b.source + "' does not exist");
          }
        },
        c.body);
  }

  const Story& story_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "error";
}

std::vector<Diagnostic> validate_story(const Story& story) {
  auto out = Linter(story).run();
  try {
    check_action_references(story.components);
  } catch (const Error& e) {
    std::string id;
    if (auto path = e.path(); path && path->starts_with("components[")) {
      auto k = std::stoul(path->substr(11));
      if (k < story.components.size()) id = story.components[k].id;
    }
    out.push_back({Severity::Error, id, e.what()});
  }
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace lodstory

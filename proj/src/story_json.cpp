#include "lodstory/story_json.hpp"

#include <algorithm>
#include <json.hpp>

#include "lodstory/error.hpp"
#include "lodstory/url.hpp"
#include "lodstory/utf8.hpp"

namespace lodstory {

namespace {

using ordered = nlohmann::ordered_json;
using nlohmann::json;

ordered nullable(const std::optional<std::string>& value) {
  return value ? ordered(*value) : ordered(nullptr);
}

ordered component_json(const Component& c) {
  ordered out;
  out["id"] = c.id;
  out["type"] = std::string(to_string(c.type()));
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, block::Text>) {
          out["html"] = b.html;
        } else if constexpr (std::is_same_v<T, block::Counter>) {
          out["label"] = b.label;
          out["query"] = b.query;
        } else if constexpr (std::is_same_v<T, block::Chart>) {
          out["chart_kind"] = std::string(to_string(b.kind));
          out["title"] = b.title;
          out["query"] = b.query;
        } else if constexpr (std::is_same_v<T, block::Table>) {
          out["title"] = b.title;
          out["query"] = b.query;
        } else if constexpr (std::is_same_v<T, block::Map>) {
          out["query"] = b.query;
          out["filter_vars"] = b.filter_vars;
        } else if constexpr (std::is_same_v<T, block::TextSearch>) {
          out["query_template"] = b.query_template;
        } else {
          out["label"] = b.label;
          out["query_template"] = b.query_template;
          out["source"] = b.source;
          out["column"] = b.column;
        }
      },
      c.body);
  return out;
}

[[noreturn]] void violation(const std::string& path, const std::string& reason) {
  throw Error(ErrorCode::SchemaViolation, path + ": " + reason, path);
}

class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) violation(path_.empty() ? "$" : path_, "expected an object");
  }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  std::string string(const std::string& key) {
    seen_.push_back(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) violation(at(key), "missing required key");
    if (!it->is_string()) violation(at(key), "expected a string");
    return it->get<std::string>();
  }

  std::optional<std::string> nullable_string(const std::string& key) {
    seen_.push_back(key);
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) violation(at(key), "expected a string or null");
    return it->get<std::string>();
  }

  std::vector<std::string> string_list(const std::string& key, bool required) {
    seen_.push_back(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) {
      if (required) violation(at(key), "missing required key");
      return {};
    }
    if (!it->is_array()) violation(at(key), "expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& v = (*it)[i];
      if (!v.is_string())
        violation(at(key) + "[" + std::to_string(i) + "]", "expected a string");
      out.push_back(v.get<std::string>());
    }
    return out;
  }

  const json* raw(const std::string& key) {
    seen_.push_back(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : obj_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        violation(at(key), "unknown key");
      }
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string> seen_;
};

Component read_component(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  Component c;
  c.id = r.string("id");
  if (!is_valid_component_id(c.id)) violation(r.at("id"), "must match [A-Za-z0-9_-]+");
  auto type_name = r.string("type");
  auto type = parse_component_type(type_name);
  if (!type) violation(r.at("type"), "unknown component type '" + type_name + "'");
  switch (*type) {
    case ComponentType::Text:
      c.body = block::Text{r.string("html")};
      break;
    case ComponentType::Counter: {
      block::Counter b;
      b.label = r.string("label");
      b.query = r.string("query");
      c.body = std::move(b);
      break;
    }
    case ComponentType::Chart: {
      block::Chart b;
      auto kind_name = r.string("chart_kind");
      auto kind = parse_chart_kind(kind_name);
      if (!kind)
        violation(r.at("chart_kind"),
                  "must be one of bar, line, scatter, doughnut (got '" + kind_name + "')");
      b.kind = *kind;
      b.title = r.string("title");
      b.query = r.string("query");
      c.body = std::move(b);
      break;
    }
    case ComponentType::Table: {
      block::Table b;
      b.title = r.string("title");
      b.query = r.string("query");
      c.body = std::move(b);
      break;
    }
    case ComponentType::Map: {
      block::Map b;
      b.query = r.string("query");
      b.filter_vars = r.string_list("filter_vars", false);
      c.body = std::move(b);
      break;
    }
    case ComponentType::TextSearch:
      c.body = block::TextSearch{r.string("query_template")};
      break;
    case ComponentType::Action: {
      block::Action b;
      b.label = r.string("label");
      b.query_template = r.string("query_template");
      b.source = r.string("source");
      b.column = r.string("column");
      c.body = std::move(b);
      break;
    }
  }
  r.reject_unknown();
  return c;
}

}  // namespace

std::string serialize_story(const Story& story) {
  ordered doc;
  doc["version"] = kStorySchemaVersion;
  doc["id"] = story.id;
  doc["title"] = story.title;
  doc["subtitle"] = nullable(story.subtitle);
  doc["description"] = nullable(story.description);
  doc["endpoint"] = story.endpoint;
  doc["section"] = nullable(story.section);
  doc["palette"] = story.palette;
  ordered components = ordered::array();
  for (const auto& c : story.components) components.push_back(component_json(c));
  doc["components"] = std::move(components);
  return doc.dump();
}

std::string serialize_component(const Component& component) {
  return component_json(component).dump();
}

Component deserialize_component(std::string_view bytes) {
  if (!is_valid_utf8(bytes)) violation("$", "document is not valid UTF-8");
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    violation("$", std::string("not JSON: ") + e.what());
  }
  return read_component(doc, "component");
}

Story deserialize_story(std::string_view bytes) {
  if (!is_valid_utf8(bytes)) violation("$", "document is not valid UTF-8");
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    violation("$", std::string("not JSON: ") + e.what());
  }
  if (!doc.is_object()) violation("$", "expected an object");

  auto version = doc.find("version");
  if (version == doc.end()) violation("version", "missing required key");
  if (!version->is_number_integer()) violation("version", "expected an integer");
  if (version->get<long long>() != kStorySchemaVersion) {
    throw Error(ErrorCode::SchemaVersionUnsupported,
                "unsupported story schema version " + version->dump() +
                    ", this build reads version " + std::to_string(kStorySchemaVersion),
                "version");
  }

  ObjectReader r(doc, "");
  r.raw("version");
  Story story;
  story.id = r.string("id");
  if (!is_valid_story_id(story.id))
    violation("id", "must be a slug of lowercase letters, digits and hyphens");
  story.title = r.string("title");
  if (story.title.find_first_not_of(" \t\r\n") == std::string::npos)
    violation("title", "must not be empty");
  story.subtitle = r.nullable_string("subtitle");
  story.description = r.nullable_string("description");
  story.endpoint = r.string("endpoint");
  if (!parse_http_url(story.endpoint))
    violation("endpoint", "must be an absolute http(s) URL");
  story.section = r.nullable_string("section");
  if (doc.contains("palette")) {
    story.palette = r.string_list("palette", true);
    for (std::size_t i = 0; i < story.palette.size(); ++i) {
      if (!is_valid_palette_color(story.palette[i]))
        violation("palette[" + std::to_string(i) + "]", "must match #RRGGBB");
    }
  }
  const json* components = r.raw("components");
  if (!components) violation("components", "missing required key");
  if (!components->is_array()) violation("components", "expected an array");
  for (std::size_t k = 0; k < components->size(); ++k) {
    auto path = "components[" + std::to_string(k) + "]";
    Component c = read_component((*components)[k], path);
    if (story.find(c.id)) violation(path + ".id", "duplicate component id '" + c.id + "'");
    story.components.push_back(std::move(c));
  }
  r.reject_unknown();
  try {
    check_action_references(story.components);
  } catch (const Error& e) {
    violation(e.path().value_or("components"), e.what());
  }
  return story;
}

}  // namespace lodstory

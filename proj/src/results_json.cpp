#include "lodstory/results_json.hpp"

#include <algorithm>
#include <json.hpp>

#include "lodstory/error.hpp"
#include "lodstory/utf8.hpp"

namespace lodstory {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& why) {
  throw Error(ErrorCode::MalformedResults, "malformed SPARQL results: " + why);
}

const json& member(const json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(std::string("missing ") + where + "." + key);
  return *it;
}

const std::string& string_member(const json& obj, const char* key,
                                 const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    malformed(where + "." + key + " must be a string");
  }
  return it->get_ref<const std::string&>();
}

Cell parse_term(const json& term, const std::string& where) {
  if (!term.is_object()) malformed(where + " must be an object");
  const auto& type = string_member(term, "type", where);
  Cell cell;
  cell.value = string_member(term, "value", where);
  auto lang = term.find("xml:lang");
  auto datatype = term.find("datatype");
  if (type == "uri") {
    cell.kind = CellKind::Uri;
    for (unsigned char c : cell.value) {
      if (c <= 0x20) malformed(where + " uri contains whitespace");
    }
  } else if (type == "bnode") {
    cell.kind = CellKind::Blank;
  } else if (type == "literal" || type == "typed-literal") {
    cell.kind = CellKind::Literal;
    if (lang != term.end()) {
      if (!lang->is_string()) malformed(where + ".xml:lang must be a string");
      cell.lang = lang->get<std::string>();
    }
    if (datatype != term.end()) {
      if (!datatype->is_string()) malformed(where + ".datatype must be a string");
      cell.datatype = datatype->get<std::string>();
    }
    if (cell.lang && cell.datatype) {
      // rdf:langString carries a tag, that is the one accepted combination
      if (*cell.datatype !=
          "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString") {
        malformed(where + " has both xml:lang and datatype");
      }
      cell.datatype.reset();
    }
  } else {
    malformed(where + " has unknown term type '" + type + "'");
  }
  if (cell.kind != CellKind::Literal &&
      (lang != term.end() || datatype != term.end())) {
    malformed(where + " non-literal term carries xml:lang or datatype");
  }
  return cell;
}

}  // namespace

ResultSet parse_results_json(std::string_view body) {
  if (!is_valid_utf8(body)) malformed("body is not valid UTF-8");
  json doc;
  try {
    doc = json::parse(body.begin(), body.end());
  } catch (const json::parse_error& e) {
    malformed(std::string("not JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) malformed("document is not an object");
  const auto& head = member(doc, "head", "document");
  if (!head.is_object()) malformed("head must be an object");
  if (doc.contains("boolean")) malformed("boolean (ASK) result, expected bindings");
  const auto& vars = member(head, "vars", "head");
  if (!vars.is_array()) malformed("head.vars must be an array");

  ResultSet rs;
  for (const auto& v : vars) {
    if (!v.is_string()) malformed("head.vars entries must be strings");
    auto name = v.get<std::string>();
    if (std::find(rs.vars.begin(), rs.vars.end(), name) != rs.vars.end()) {
      malformed("duplicate variable '" + name + "' in head.vars");
    }
    rs.vars.push_back(std::move(name));
  }

  const auto& results = member(doc, "results", "document");
  if (!results.is_object()) malformed("results must be an object");
  const auto& bindings = member(results, "bindings", "results");
  if (!bindings.is_array()) malformed("results.bindings must be an array");

  rs.rows.reserve(bindings.size());
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    const auto& binding = bindings[i];
    std::string where = "results.bindings[" + std::to_string(i) + "]";
    if (!binding.is_object()) malformed(where + " must be an object");
    Row row;
    for (const auto& [var, term] : binding.items()) {
      if (std::find(rs.vars.begin(), rs.vars.end(), var) == rs.vars.end()) {
        malformed(where + " binds '" + var + "' which is not in head.vars");
      }
      row.emplace(var, parse_term(term, where + "." + var));
    }
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

std::string write_results_json(const ResultSet& rs) {
  using ordered = nlohmann::ordered_json;
  ordered doc;
  doc["head"]["vars"] = rs.vars;
  ordered bindings = ordered::array();
  for (const auto& row : rs.rows) {
    ordered binding = ordered::object();
    for (const auto& var : rs.vars) {
      auto it = row.find(var);
      if (it == row.end()) continue;
      const Cell& cell = it->second;
      ordered term;
      switch (cell.kind) {
        case CellKind::Uri: term["type"] = "uri"; break;
        case CellKind::Blank: term["type"] = "bnode"; break;
        case CellKind::Literal: term["type"] = "literal"; break;
      }
      term["value"] = cell.value;
      if (cell.lang) term["xml:lang"] = *cell.lang;
      if (cell.datatype) term["datatype"] = *cell.datatype;
      binding[var] = std::move(term);
    }
    bindings.push_back(std::move(binding));
  }
  doc["results"]["bindings"] = std::move(bindings);
  return doc.dump();
}

}  // namespace lodstory

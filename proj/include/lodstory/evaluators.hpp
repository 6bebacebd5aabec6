#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lodstory/cell_typing.hpp"
#include "lodstory/query_template.hpp"
#include "lodstory/sparql.hpp"
#include "lodstory/story.hpp"

namespace lodstory {

struct Card {
  double value = 0;
  std::string label;
  std::vector<std::string> notes;
  friend bool operator==(const Card&, const Card&) = default;
};

struct Series {
  ChartKind kind = ChartKind::Bar;
  std::vector<std::string> labels;
  std::vector<double> values;
  std::size_t dropped = 0;
  std::vector<std::string> notes;
  friend bool operator==(const Series&, const Series&) = default;
};

struct TypedTable {
  std::vector<std::string> vars;
  // One entry per var, nullopt where the row leaves the var unbound.
  std::vector<std::vector<std::optional<TypedCell>>> rows;
  std::vector<std::string> notes;
  friend bool operator==(const TypedTable&, const TypedTable&) = default;
};

struct GeoFeature {
  GeoPoint point;
  // Non-location bindings in result-variable order, lexical values.
  std::vector<std::pair<std::string, std::string>> metadata;
  friend bool operator==(const GeoFeature&, const GeoFeature&) = default;
};

struct GeoSet {
  std::vector<GeoFeature> points;
  // filter var -> distinct values over retained points
  std::map<std::string, std::set<std::string>> facets;
  std::size_t dropped = 0;
  std::vector<std::string> notes;
  friend bool operator==(const GeoSet&, const GeoSet&) = default;
};

using RenderPayload = std::variant<Card, Series, TypedTable, GeoSet>;

std::string_view payload_type_name(const RenderPayload& payload);

// Errors: NoRows, NotNumeric.
Card eval_counter(const ResultSet& rs, std::string label);

// Rows missing ?label or ?value, or with a non-numeric value, are dropped
// and counted. Errors: MissingVariable; NonNumericX for scatter rows whose
// label is not a number.
Series eval_chart(const ResultSet& rs, ChartKind kind);

TypedTable eval_table(const ResultSet& rs);

// Never throws. Rows without a usable location, including out-of-range
// coordinates, are dropped and counted.
GeoSet eval_map(const ResultSet& rs, const std::vector<std::string>& filter_vars);

using QueryRunner = std::function<ResultSet(const SparqlQuery&)>;

// nullopt for text and interactive components.
std::optional<RenderPayload> evaluate_component(const Component& component,
                                                const QueryRunner& run);

using PayloadMap = std::map<std::string, RenderPayload, std::less<>>;

// Evaluates every data component, independent components in parallel.
// Failures are rethrown with the component id in the message and
// "components[k]" as the path.
PayloadMap evaluate_story(const Story& story, const QueryRunner& run);

TypedTable run_text_search(const block::TextSearch& search, std::string_view term,
                           const QueryRunner& run);

// `mode` follows the kind of the clicked cell: Iri for URIs, Literal
// otherwise.
TypedTable run_action(const block::Action& action, std::string_view value,
                      TermMode mode, const QueryRunner& run);

}  // namespace lodstory

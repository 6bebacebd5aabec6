#include "lodstory/evaluators.hpp"

#include <algorithm>
#include <future>

#include "lodstory/error.hpp"

namespace lodstory {

namespace {

bool has_var(const ResultSet& rs, std::string_view var) {
  return std::find(rs.vars.begin(), rs.vars.end(), var) != rs.vars.end();
}

}  // namespace

std::string_view payload_type_name(const RenderPayload& payload) {
  constexpr std::string_view kNames[] = {"card", "series", "typed_table", "geo_set"};
  return kNames[payload.index()];
}

Card eval_counter(const ResultSet& rs, std::string label) {
  if (rs.rows.empty()) throw Error(ErrorCode::NoRows, "counter query returned no rows");
  if (rs.vars.empty()) throw Error(ErrorCode::NotNumeric, "counter query projects no variable");
  const auto& first_var = rs.vars.front();
  auto it = rs.rows.front().find(first_var);
  if (it == rs.rows.front().end()) {
    throw Error(ErrorCode::NotNumeric, "?" + first_var + " is unbound in the first row");
  }
  auto number = cell_number(it->second);
  if (!number) {
    throw Error(ErrorCode::NotNumeric,
                "?" + first_var + " = '" + it->second.value + "' is not a number");
  }
  Card card{*number, std::move(label), {}};
  if (rs.rows.size() > 1) {
    card.notes.push_back("ignored " + std::to_string(rs.rows.size() - 1) + " extra row(s)");
  }
  if (rs.vars.size() > 1) {
    card.notes.push_back("ignored " + std::to_string(rs.vars.size() - 1) +
                         " extra variable(s)");
  }
  return card;
}

Series eval_chart(const ResultSet& rs, ChartKind kind) {
  for (auto var : {conventions::kChartLabel, conventions::kChartValue}) {
    if (!has_var(rs, var)) {
      throw Error(ErrorCode::MissingVariable,
                  "chart results lack ?" + std::string(var), std::string(var));
    }
  }
  Series series;
  series.kind = kind;
  for (const auto& row : rs.rows) {
    auto label = row.find(conventions::kChartLabel);
    auto value = row.find(conventions::kChartValue);
    std::optional<double> number;
    if (label != row.end() && value != row.end()) number = cell_number(value->second);
    if (!number) {
      ++series.dropped;
      continue;
    }
    if (kind == ChartKind::Scatter && !cell_number(label->second)) {
      throw Error(ErrorCode::NonNumericX,
                  "scatter x value '" + label->second.value + "' is not a number");
    }
    series.labels.push_back(label->second.value);
    series.values.push_back(*number);
  }
  if (series.dropped > 0) {
    series.notes.push_back("dropped " + std::to_string(series.dropped) +
                           " row(s) without a numeric ?value or a ?label");
  }
  return series;
}

TypedTable eval_table(const ResultSet& rs) {
  TypedTable table;
  table.vars = rs.vars;
  table.rows.reserve(rs.rows.size());
  for (const auto& row : rs.rows) {
    std::vector<std::optional<TypedCell>> cells;
    cells.reserve(rs.vars.size());
    for (const auto& var : rs.vars) {
      auto it = row.find(var);
      if (it == row.end()) {
        cells.emplace_back(std::nullopt);
      } else {
        cells.emplace_back(classify_cell(it->second));
      }
    }
    table.rows.push_back(std::move(cells));
  }
  if (rs.truncated) table.notes.push_back("results truncated at the row cap");
  return table;
}

GeoSet eval_map(const ResultSet& rs, const std::vector<std::string>& filter_vars) {
  GeoSet geo;
  for (const auto& f : filter_vars) {
    if (!conventions::is_location_var(f)) geo.facets[f];
  }
  std::size_t out_of_range = 0;
  for (const auto& row : rs.rows) {
    std::optional<GeoRecord> record;
    try {
      record = parse_geo(row);
    } catch (const Error&) {
      ++out_of_range;
    }
    if (!record) {
      ++geo.dropped;
      continue;
    }
    GeoFeature feature{record->point, {}};
    for (const auto& var : rs.vars) {
      auto it = record->metadata.find(var);
      if (it != record->metadata.end()) feature.metadata.emplace_back(var, it->second.value);
    }
    for (auto& [var, values] : geo.facets) {
      auto it = record->metadata.find(var);
      if (it != record->metadata.end()) values.insert(it->second.value);
    }
    geo.points.push_back(std::move(feature));
  }
  if (geo.dropped > 0) {
    geo.notes.push_back("dropped " + std::to_string(geo.dropped) +
                        " row(s) without a usable location");
  }
  if (out_of_range > 0) {
    geo.notes.push_back(std::to_string(out_of_range) +
                        " row(s) had coordinates outside valid degree ranges");
  }
  return geo;
}

std::optional<RenderPayload> evaluate_component(const Component& component,
                                                const QueryRunner& run) {
  return std::visit(
      [&](const auto& b) -> std::optional<RenderPayload> {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, block::Counter>) {
          return eval_counter(run(SparqlQuery(b.query)), b.label);
        } else if constexpr (std::is_same_v<T, block::Chart>) {
          return eval_chart(run(SparqlQuery(b.query)), b.kind);
        } else if constexpr (std::is_same_v<T, block::Table>) {
          return eval_table(run(SparqlQuery(b.query)));
        } else if constexpr (std::is_same_v<T, block::Map>) {
          return eval_map(run(SparqlQuery(b.query)), b.filter_vars);
        } else {
          return std::nullopt;
        }
      },
      component.body);
}

PayloadMap evaluate_story(const Story& story, const QueryRunner& run) {
  std::vector<std::pair<std::size_t, std::future<std::optional<RenderPayload>>>> pending;
  for (std::size_t k = 0; k < story.components.size(); ++k) {
    const auto& c = story.components[k];
    if (!c.is_data()) continue;
    pending.emplace_back(k, std::async(std::launch::async,
                                       [&c, &run] { return evaluate_component(c, run); }));
  }
  PayloadMap out;
  std::optional<Error> first_failure;
  for (auto& [k, future] : pending) {
    const auto& id = story.components[k].id;
    try {
      if (auto payload = future.get()) out.emplace(id, std::move(*payload));
    } catch (const Error& e) {
      if (!first_failure) {
        first_failure.emplace(e.code(), "component '" + id + "': " + e.what(),
                              "components[" + std::to_string(k) + "]", e.status());
      }
    }
  }
  if (first_failure) throw *first_failure;
  return out;
}

TypedTable run_text_search(const block::TextSearch& search, std::string_view term,
                           const QueryRunner& run) {
  QueryTemplate tpl(search.query_template, PlaceholderKind::Search);
  return eval_table(run(instantiate_template(tpl, term, TermMode::Auto)));
}

TypedTable run_action(const block::Action& action, std::string_view value, TermMode mode,
                      const QueryRunner& run) {
  QueryTemplate tpl(action.query_template, PlaceholderKind::Value);
  return eval_table(run(instantiate_template(tpl, value, mode)));
}

}  // namespace lodstory

#include "lodstory/payload_json.hpp"

namespace lodstory {

namespace {
using ordered = nlohmann::ordered_json;

std::string_view cell_kind_name(CellKind kind) {
  switch (kind) {
    case CellKind::Uri: return "uri";
    case CellKind::Blank: return "bnode";
    case CellKind::Literal: return "literal";
  }
  return "literal";
}

ordered render_json(const Render& r) {
  ordered out;
  out["type"] = std::string(render_kind_name(r));
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, render::Number>) {
          out["value"] = v.value;
        } else if constexpr (std::is_same_v<T, render::Link>) {
          out["url"] = v.url;
          if (v.label) out["label"] = *v.label;
        } else if constexpr (std::is_same_v<T, GeoPoint>) {
          out["lat"] = v.lat;
          out["lon"] = v.lon;
        } else if constexpr (std::is_same_v<T, render::Text>) {
          out["text"] = v.text;
        } else {
          out["url"] = v.url;
        }
      },
      r);
  return out;
}
}  // namespace

ordered typed_cell_to_json(const TypedCell& cell) {
  ordered out;
  out["kind"] = std::string(cell_kind_name(cell.raw.kind));
  out["value"] = cell.raw.value;
  if (cell.raw.lang) out["lang"] = *cell.raw.lang;
  if (cell.raw.datatype) out["datatype"] = *cell.raw.datatype;
  out["render"] = render_json(cell.render);
  return out;
}

ordered payload_to_json(const RenderPayload& payload) {
  ordered out;
  out["type"] = std::string(payload_type_name(payload));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Card>) {
          out["value"] = p.value;
          out["label"] = p.label;
        } else if constexpr (std::is_same_v<T, Series>) {
          out["kind"] = std::string(to_string(p.kind));
          out["labels"] = p.labels;
          out["values"] = p.values;
          out["dropped"] = p.dropped;
        } else if constexpr (std::is_same_v<T, TypedTable>) {
          out["vars"] = p.vars;
          ordered rows = ordered::array();
          for (const auto& row : p.rows) {
            ordered r = ordered::array();
            for (const auto& cell : row) {
              r.push_back(cell ? typed_cell_to_json(*cell) : ordered(nullptr));
            }
            rows.push_back(std::move(r));
          }
          out["rows"] = std::move(rows);
        } else {
          ordered points = ordered::array();
          for (const auto& f : p.points) {
            ordered point;
            point["lat"] = f.point.lat;
            point["lon"] = f.point.lon;
            ordered meta = ordered::object();
            for (const auto& [k, v] : f.metadata) meta[k] = v;
            point["metadata"] = std::move(meta);
            points.push_back(std::move(point));
          }
          out["points"] = std::move(points);
          ordered facets = ordered::object();
          for (const auto& [var, values] : p.facets) {
            facets[var] = std::vector<std::string>(values.begin(), values.end());
          }
          out["facets"] = std::move(facets);
          out["dropped"] = p.dropped;
        }
        out["notes"] = p.notes;
      },
      payload);
  return out;
}

}  // namespace lodstory

#include <algorithm>
#include <string>

#include "lodstory/detail/text.hpp"
#include "lodstory/error.hpp"
#include "lodstory/exporter.hpp"

namespace lodstory {

namespace {

class CsvWriter {
 public:
  void field(std::string_view value) {
    if (!first_) out_.push_back(',');
    first_ = false;
    bool quote = value.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!quote) {
      out_.append(value);
      return;
    }
    out_.push_back('"');
    for (char c : value) {
      if (c == '"') out_.push_back('"');
      out_.push_back(c);
    }
    out_.push_back('"');
  }

  void end_row() {
    out_ += "\r\n";
    first_ = true;
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
  bool first_ = true;
};

}  // namespace

std::string export_component_csv(const RenderPayload& payload) {
  CsvWriter csv;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Card>) {
          throw Error(ErrorCode::NotTabular, "a counter card has no tabular form");
        } else if constexpr (std::is_same_v<T, Series>) {
          csv.field("label");
          csv.field("value");
          csv.end_row();
          for (std::size_t i = 0; i < p.labels.size(); ++i) {
            csv.field(p.labels[i]);
            csv.field(detail::format_number(p.values[i]));
            csv.end_row();
          }
        } else if constexpr (std::is_same_v<T, TypedTable>) {
          for (const auto& v : p.vars) csv.field(v);
          csv.end_row();
          for (const auto& row : p.rows) {
            for (const auto& cell : row) csv.field(cell ? cell->raw.value : "");
            csv.end_row();
          }
        } else {
          std::vector<std::string> meta_vars;
          for (const auto& f : p.points) {
            for (const auto& [k, v] : f.metadata) {
              if (std::find(meta_vars.begin(), meta_vars.end(), k) == meta_vars.end())
                meta_vars.push_back(k);
            }
          }
          csv.field("lat");
          csv.field("long");
          for (const auto& k : meta_vars) csv.field(k);
          csv.end_row();
          for (const auto& f : p.points) {
            csv.field(detail::format_number(f.point.lat));
            csv.field(detail::format_number(f.point.lon));
            for (const auto& k : meta_vars) {
              std::string value;
              for (const auto& [mk, mv] : f.metadata) {
                if (mk == k) value = mv;
              }
              csv.field(value);
            }
            csv.end_row();
          }
        }
      },
      payload);
  return csv.take();
}

}  // namespace lodstory

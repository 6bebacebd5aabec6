#include "lodstory/cell_typing.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "lodstory/error.hpp"

namespace lodstory {

namespace conventions {
bool is_location_var(std::string_view var) {
  return var == kMapLat || var == kMapLong || var == kMapCoordinates;
}
}  // namespace conventions

namespace {

constexpr std::string_view kWktLiteral =
    "http://www.opengis.net/ont/geosparql#wktLiteral";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::string extension_of(std::string_view url) {
  auto cut = url.find_first_of("?#");
  url = url.substr(0, cut);
  auto slash = url.rfind('/');
  auto segment = slash == std::string_view::npos ? url : url.substr(slash + 1);
  auto dot = segment.rfind('.');
  if (dot == std::string_view::npos) return {};
  return lower(segment.substr(dot + 1));
}

bool is_video_host(std::string_view url) {
  std::string u = lower(url);
  for (std::string_view prefix : {"https://", "http://"}) {
    if (u.starts_with(prefix)) {
      u.erase(0, prefix.size());
      break;
    }
  }
  if (u.starts_with("www.")) u.erase(0, 4);
  if (u.starts_with("m.")) u.erase(0, 2);
  if (u.starts_with("youtube.com/watch?") || u.starts_with("youtube.com/embed/") ||
      u.starts_with("youtu.be/") || u.starts_with("player.vimeo.com/video/")) {
    return true;
  }
  if (u.starts_with("vimeo.com/")) {
    auto rest = std::string_view(u).substr(10);
    return !rest.empty() && std::isdigit(static_cast<unsigned char>(rest.front()));
  }
  return false;
}

Render classify_url(const std::string& url) {
  auto ext = extension_of(url);
  if (ext == "mp3" || ext == "wav" || ext == "ogg") return render::Audio{url};
  if (ext == "mp4" || ext == "webm" || is_video_host(url)) return render::Video{url};
  if (ext == "png" || ext == "jpg" || ext == "jpeg" || ext == "gif" || ext == "svg")
    return render::Image{url};
  return render::Link{url, std::nullopt};
}

bool is_plain(const Cell& cell) {
  return !cell.lang && (!cell.datatype || *cell.datatype == xsd::kString);
}

bool in_range(const GeoPoint& p) {
  return p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

std::optional<GeoPoint> parse_wkt_point(std::string_view text) {
  text = trim(text);
  // optional CRS IRI prefix, e.g. "<http://www.opengis.net/def/crs/OGC/1.3/CRS84> POINT(..)"
  if (!text.empty() && text.front() == '<') {
    auto close = text.find('>');
    if (close == std::string_view::npos) return std::nullopt;
    text = trim(text.substr(close + 1));
  }
  if (text.size() < 5 || lower(text.substr(0, 5)) != "point") return std::nullopt;
  text = trim(text.substr(5));
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') return std::nullopt;
  text = trim(text.substr(1, text.size() - 2));
  auto space = text.find_first_of(" \t");
  if (space == std::string_view::npos) return std::nullopt;
  auto lon = parse_numeral(text.substr(0, space));
  auto lat = parse_numeral(trim(text.substr(space)));
  if (!lon || !lat) return std::nullopt;
  return GeoPoint{*lat, *lon};
}

}  // namespace

std::string_view render_kind_name(const Render& r) {
  static constexpr std::array<std::string_view, 7> kNames = {
      "number", "link", "audio", "video", "image", "geo", "text"};
  return kNames[r.index()];
}

std::optional<double> parse_numeral(std::string_view text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
  std::size_t int_digits = 0;
  while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++int_digits;
  std::size_t frac_digits = 0;
  if (i < n && text[i] == '.') {
    ++i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++frac_digits;
  }
  if (int_digits + frac_digits == 0) return std::nullopt;
  if (i < n && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++exp_digits;
    if (exp_digits == 0) return std::nullopt;
  }
  if (i != n) return std::nullopt;

  std::string_view body = text;
  if (body.front() == '+') body.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc{} || ptr != body.data() + body.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

bool is_numeric_datatype(std::string_view iri) {
  if (!iri.starts_with(xsd::kNs)) return false;
  auto local = iri.substr(xsd::kNs.size());
  static constexpr std::string_view kNumeric[] = {
      "integer", "decimal", "float", "double", "int", "long", "short", "byte",
      "nonNegativeInteger", "positiveInteger", "negativeInteger",
      "nonPositiveInteger", "unsignedInt", "unsignedLong", "unsignedShort",
      "unsignedByte"};
  return std::find(std::begin(kNumeric), std::end(kNumeric), local) != std::end(kNumeric);
}

std::optional<double> cell_number(const Cell& cell) {
  if (cell.kind != CellKind::Literal) return std::nullopt;
  if ((cell.datatype && is_numeric_datatype(*cell.datatype)) || is_plain(cell)) {
    return parse_numeral(trim(cell.value));
  }
  return std::nullopt;
}

TypedCell classify_cell(const Cell& cell) {
  TypedCell typed{cell, render::Text{cell.value}};
  switch (cell.kind) {
    case CellKind::Uri:
      typed.render = classify_url(cell.value);
      break;
    case CellKind::Blank:
      break;
    case CellKind::Literal:
      if (auto number = cell_number(cell)) {
        typed.render = render::Number{*number};
      } else if (cell.datatype && *cell.datatype == kWktLiteral) {
        if (auto p = parse_wkt_point(cell.value); p && in_range(*p)) typed.render = *p;
      } else if (!cell.lang && parse_http_url(cell.value)) {
        typed.render = classify_url(cell.value);
      }
      break;
  }
  return typed;
}

std::optional<GeoPoint> parse_coordinates(std::string_view text) {
  if (auto p = parse_wkt_point(text)) return p;
  text = trim(text);
  auto comma = text.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  auto lat = parse_numeral(trim(text.substr(0, comma)));
  auto lon = parse_numeral(trim(text.substr(comma + 1)));
  if (!lat || !lon) return std::nullopt;
  return GeoPoint{*lat, *lon};
}

std::optional<GeoRecord> parse_geo(const Row& row) {
  std::optional<GeoPoint> point;
  auto lat = row.find(conventions::kMapLat);
  auto lon = row.find(conventions::kMapLong);
  if (lat != row.end() && lon != row.end()) {
    auto la = parse_numeral(trim(lat->second.value));
    auto lo = parse_numeral(trim(lon->second.value));
    if (la && lo) point = GeoPoint{*la, *lo};
  }
  if (!point) {
    if (auto coords = row.find(conventions::kMapCoordinates); coords != row.end()) {
      point = parse_coordinates(coords->second.value);
    }
  }
  if (!point) return std::nullopt;
  if (!in_range(*point)) {
    throw Error(ErrorCode::OutOfRange,
                "coordinates out of range: lat " + std::to_string(point->lat) +
                    ", lon " + std::to_string(point->lon));
  }
  GeoRecord record{*point, {}};
  for (const auto& [var, cell] : row) {
    if (!conventions::is_location_var(var)) record.metadata.emplace(var, cell);
  }
  return record;
}

}  // namespace lodstory

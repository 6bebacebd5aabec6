#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "lodstory/sparql.hpp"

namespace lodstory {

// Variable names that drive rendering. These are part of the documented
// authoring contract and are quoted verbatim in the format reference.
namespace conventions {
inline constexpr std::string_view kChartLabel = "label";
inline constexpr std::string_view kChartValue = "value";
inline constexpr std::string_view kMapLat = "lat";
inline constexpr std::string_view kMapLong = "long";
inline constexpr std::string_view kMapCoordinates = "coordinates";
inline constexpr std::string_view kMapName = "name";

// Location variables never show up as point metadata.
bool is_location_var(std::string_view var);
}  // namespace conventions

struct GeoPoint {
  double lat = 0;
  double lon = 0;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

namespace render {
struct Number {
  double value = 0;
  friend bool operator==(const Number&, const Number&) = default;
};
struct Link {
  std::string url;
  std::optional<std::string> label;
  friend bool operator==(const Link&, const Link&) = default;
};
struct Audio {
  std::string url;
  friend bool operator==(const Audio&, const Audio&) = default;
};
struct Video {
  std::string url;
  friend bool operator==(const Video&, const Video&) = default;
};
struct Image {
  std::string url;
  friend bool operator==(const Image&, const Image&) = default;
};
struct Text {
  std::string text;
  friend bool operator==(const Text&, const Text&) = default;
};
}  // namespace render

using Render = std::variant<render::Number, render::Link, render::Audio,
                            render::Video, render::Image, GeoPoint, render::Text>;

struct TypedCell {
  Cell raw;
  Render render;
  friend bool operator==(const TypedCell&, const TypedCell&) = default;
};

std::string_view render_kind_name(const Render& render);

// Decimal numerals only: optional sign, digits with an optional fraction,
// optional exponent. No thousands separators, no INF/NaN.
std::optional<double> parse_numeral(std::string_view text);

bool is_numeric_datatype(std::string_view datatype_iri);

// Total. Numbers first, then media by URL suffix or host shape, then links,
// then text.
TypedCell classify_cell(const Cell& cell);

// Numeric view of a cell when classify_cell would call it a number.
std::optional<double> cell_number(const Cell& cell);

struct GeoRecord {
  GeoPoint point;
  std::map<std::string, Cell, std::less<>> metadata;
};

// "lat"+"long" pair, else "coordinates" as "lat,lon" or WKT "POINT(lon lat)".
// Returns nullopt when no location is parseable. Throws OutOfRange when a
// parsed coordinate lies outside [-90,90] x [-180,180].
std::optional<GeoRecord> parse_geo(const Row& row);

// WKT POINT in lon-lat order, or "lat,lon". nullopt when unparseable.
std::optional<GeoPoint> parse_coordinates(std::string_view text);

}  // namespace lodstory

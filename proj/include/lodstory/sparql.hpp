#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lodstory/url.hpp"

namespace lodstory {

enum class Transport {
  Auto,  // GET up to kMaxGetQueryBytes of query text, form POST above
  Get,
  FormPost,
};

inline constexpr std::size_t kMaxGetQueryBytes = 2000;
inline constexpr std::size_t kDefaultMaxRows = 10000;
inline constexpr std::chrono::milliseconds kDefaultTimeout{30000};

class EndpointRef {
 public:
  // Throws InvalidEndpointUrl for relative or malformed URLs, and for a
  // non-positive timeout or row cap.
  explicit EndpointRef(std::string url,
                       std::chrono::milliseconds timeout = kDefaultTimeout,
                       std::size_t max_rows = kDefaultMaxRows,
                       Transport transport = Transport::Auto);

  const std::string& url() const noexcept { return url_; }
  const HttpUrl& parsed() const noexcept { return parsed_; }
  std::chrono::milliseconds timeout() const noexcept { return timeout_; }
  std::size_t max_rows() const noexcept { return max_rows_; }
  Transport transport() const noexcept { return transport_; }

 private:
  std::string url_;
  HttpUrl parsed_;
  std::chrono::milliseconds timeout_;
  std::size_t max_rows_;
  Transport transport_;
};

// A SELECT query together with its projection, which is always recomputed
// from the text. Throws NotSelectQuery.
class SparqlQuery {
 public:
  explicit SparqlQuery(std::string text);

  const std::string& text() const noexcept { return text_; }
  const std::vector<std::string>& projected_vars() const noexcept {
    return projected_vars_;
  }

 private:
  std::string text_;
  std::vector<std::string> projected_vars_;
};

enum class CellKind { Uri, Blank, Literal };

struct Cell {
  CellKind kind = CellKind::Literal;
  std::string value;
  std::optional<std::string> lang;
  std::optional<std::string> datatype;

  static Cell uri(std::string v) { return {CellKind::Uri, std::move(v), {}, {}}; }
  static Cell blank(std::string v) {
    return {CellKind::Blank, std::move(v), {}, {}};
  }
  static Cell literal(std::string v) {
    return {CellKind::Literal, std::move(v), {}, {}};
  }
  static Cell lang_literal(std::string v, std::string lang) {
    return {CellKind::Literal, std::move(v), std::move(lang), {}};
  }
  static Cell typed(std::string v, std::string datatype) {
    return {CellKind::Literal, std::move(v), {}, std::move(datatype)};
  }

  friend bool operator==(const Cell&, const Cell&) = default;
};

// One solution. Unbound variables are absent.
using Row = std::map<std::string, Cell, std::less<>>;

struct ResultSet {
  std::vector<std::string> vars;
  std::vector<Row> rows;
  bool truncated = false;

  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

namespace xsd {
inline constexpr std::string_view kNs = "http://www.w3.org/2001/XMLSchema#";
inline const std::string kInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline const std::string kDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline const std::string kDouble = "http://www.w3.org/2001/XMLSchema#double";
inline const std::string kString = "http://www.w3.org/2001/XMLSchema#string";
}  // namespace xsd

}  // namespace lodstory

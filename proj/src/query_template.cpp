#include "lodstory/query_template.hpp"

#include "lodstory/error.hpp"
#include "lodstory/query_scan.hpp"
#include "lodstory/url.hpp"
#include "lodstory/utf8.hpp"

namespace lodstory {

std::string_view placeholder_token(PlaceholderKind kind) {
  return kind == PlaceholderKind::Search ? kSearchPlaceholder : kValuePlaceholder;
}

std::size_t count_placeholders(std::string_view text, PlaceholderKind kind) {
  std::size_t n = 0;
  for (const auto& t : scan_query(text)) {
    if (t.kind == TokenKind::Placeholder && t.text == placeholder_token(kind)) ++n;
  }
  return n;
}

QueryTemplate::QueryTemplate(std::string text, PlaceholderKind kind)
    : text_(std::move(text)), kind_(kind) {
  auto own = placeholder_token(kind_);
  auto other_kind =
      kind_ == PlaceholderKind::Search ? PlaceholderKind::Value : PlaceholderKind::Search;
  if (count_placeholders(text_, kind_) == 0) {
    throw Error(ErrorCode::PlaceholderMissing,
                "query template does not contain " + std::string(own));
  }
  if (count_placeholders(text_, other_kind) != 0) {
    throw Error(ErrorCode::PlaceholderMissing,
                "query template must use only " + std::string(own) + ", found " +
                    std::string(placeholder_token(other_kind)));
  }
}

std::string sparql_string_literal(std::string_view value) {
  if (!is_valid_utf8(value)) {
    throw Error(ErrorCode::UnescapableValue, "value is not valid UTF-8");
  }
  std::string out;
  out.reserve(value.size() + 2);
  out.push_back('"');
  for (char c : value) {
    switch (c) {
      case '\0':
        throw Error(ErrorCode::UnescapableValue, "value contains a NUL character");
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string sparql_iri(std::string_view value) {
  if (value.find('\0') != std::string_view::npos) {
    throw Error(ErrorCode::UnescapableValue, "IRI contains a NUL character");
  }
  if (!is_valid_utf8(value) || !is_absolute_iri(value)) {
    throw Error(ErrorCode::UnescapableValue,
                "value is not an absolute IRI without forbidden characters");
  }
  return "<" + std::string(value) + ">";
}

SparqlQuery instantiate_template(const QueryTemplate& tpl, std::string_view user_value,
                                 TermMode mode) {
  if (mode == TermMode::Auto) {
    bool iri_shaped = (user_value.starts_with("http://") ||
                       user_value.starts_with("https://")) &&
                      is_absolute_iri(user_value) && is_valid_utf8(user_value);
    mode = iri_shaped ? TermMode::Iri : TermMode::Literal;
  }
  const std::string term =
      mode == TermMode::Iri ? sparql_iri(user_value) : sparql_string_literal(user_value);

  const std::string& text = tpl.text();
  const auto token = placeholder_token(tpl.kind());
  std::string out;
  std::size_t cursor = 0;
  for (const auto& t : scan_query(text)) {
    if (t.kind != TokenKind::Placeholder || t.text != token) continue;
    out.append(text, cursor, t.offset - cursor);
    out += term;
    cursor = t.offset + t.length;
  }
  out.append(text, cursor, std::string::npos);

  if (count_placeholders(out, tpl.kind()) != 0) {
    throw Error(ErrorCode::UnescapableValue,
                "placeholder survived instantiation; refusing to run the query");
  }
  return SparqlQuery(std::move(out));
}

}  // namespace lodstory

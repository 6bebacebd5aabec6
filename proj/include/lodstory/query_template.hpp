#pragma once

#include <string>
#include <string_view>

#include "lodstory/sparql.hpp"

namespace lodstory {

enum class PlaceholderKind { Search, Value };  // $SEARCH, $VALUE

std::string_view placeholder_token(PlaceholderKind kind);

// How a user value becomes a SPARQL term.
enum class TermMode {
  Auto,     // http(s) IRI shape -> <iri>, anything else -> "literal"
  Literal,  // always a quoted string literal
  Iri,      // always <iri>; rejects values that are not absolute IRIs
};

// Query text with one kind of placeholder, occurring at least once outside
// strings and comments. Throws PlaceholderMissing otherwise.
class QueryTemplate {
 public:
  QueryTemplate(std::string text, PlaceholderKind kind);

  const std::string& text() const noexcept { return text_; }
  PlaceholderKind kind() const noexcept { return kind_; }

 private:
  std::string text_;
  PlaceholderKind kind_;
};

// Number of placeholder tokens of `kind` outside strings and comments.
std::size_t count_placeholders(std::string_view text, PlaceholderKind kind);

// "..." with \" \\ \n \r \t \b \f escaped. Throws UnescapableValue on NUL or
// invalid UTF-8.
std::string sparql_string_literal(std::string_view value);

// <value>. Throws UnescapableValue unless `value` is an absolute IRI free of
// characters that IRIREF forbids.
std::string sparql_iri(std::string_view value);

// Replaces every placeholder with one escaped term. Errors:
// UnescapableValue, NotSelectQuery (from the resulting query).
SparqlQuery instantiate_template(const QueryTemplate& tpl, std::string_view user_value,
                                 TermMode mode = TermMode::Auto);

}  // namespace lodstory

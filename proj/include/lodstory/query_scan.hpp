#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lodstory {

// Tolerant lexical view of a SPARQL query. Comments are dropped, string
// literals and IRIs are opaque tokens, so `?fake` inside either never reads
// as a variable. This is not a grammar; the endpoint stays the authority on
// validity.
enum class TokenKind {
  Word,         // keywords, prefixed names, `a`, booleans
  Variable,     // ?name or $name, text holds the name without the sigil
  Placeholder,  // $SEARCH or $VALUE
  String,       // any quoted form, text holds the raw source slice
  Iri,          // <...>, text holds the raw source slice
  Number,
  LangTag,
  Punct,
};

struct QueryToken {
  TokenKind kind;
  std::string text;
  std::size_t offset = 0;  // byte offset into the scanned text
  std::size_t length = 0;  // byte length of the source slice
};

inline constexpr std::string_view kSearchPlaceholder = "$SEARCH";
inline constexpr std::string_view kValuePlaceholder = "$VALUE";

std::vector<QueryToken> scan_query(std::string_view text);

// Projection variables of the first SELECT: explicit `?v`, aliased
// `(expr AS ?v)`, or for `SELECT *` every variable after the star in
// first-appearance order. Placeholders are never variables. Throws
// NotSelectQuery when no SELECT keyword occurs outside strings/comments.
std::vector<std::string> extract_select_variables(std::string_view query_text);

}  // namespace lodstory

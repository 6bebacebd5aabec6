#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace lodstory {

struct HttpUrl {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string target;  // path plus optional query, always starts with '/'

  std::string origin() const;  // scheme://host:port
};

// Accepts absolute http(s) URLs only. No whitespace or control characters.
std::optional<HttpUrl> parse_http_url(std::string_view text);

// True for an absolute IRI: scheme ":" followed by at least one character,
// with no whitespace or characters forbidden inside a SPARQL IRIREF.
bool is_absolute_iri(std::string_view text);

std::string url_encode_component(std::string_view text);

}  // namespace lodstory

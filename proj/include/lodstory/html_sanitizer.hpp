#pragma once

#include <string>
#include <string_view>

namespace lodstory {

// Reduces author HTML to the curated-text allowlist: p, h1-h4, b, i, em,
// strong, a[href], ul, ol, li, br, blockquote, img[src,alt]. script, style
// and similar elements are removed with their content, other tags are
// unwrapped, comments dropped, every opened element closed. href/src keep
// only http(s), mailto and relative URLs. The output is a fixed point.
std::string sanitize_html(std::string_view html);

}  // namespace lodstory

#include "lodstory/html_sanitizer.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <span>
#include <vector>

#include "lodstory/detail/text.hpp"

namespace lodstory {

namespace {

constexpr std::string_view kAllowed[] = {"p",  "h1", "h2", "h3",     "h4", "b",
                                         "i",  "em", "strong", "a", "ul", "ol",
                                         "li", "br", "blockquote", "img"};
constexpr std::string_view kDropWithContent[] = {
    "script", "style", "iframe", "object", "embed", "template",
    "noscript", "textarea", "title", "svg", "math", "head"};

bool one_of(std::string_view name, std::span<const std::string_view> set) {
  return std::find(set.begin(), set.end(), name) != set.end();
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_void(std::string_view name) { return name == "br" || name == "img"; }

struct Tag {
  std::string name;
  bool closing = false;
  std::vector<std::pair<std::string, std::string>> attrs;
};

// Decodes the handful of entities that matter for URL scheme checks.
std::string decode_basic_entities(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '&') {
      auto semi = s.find(';', i);
      if (semi != std::string_view::npos && semi - i <= 10) {
        auto ent = s.substr(i + 1, semi - i - 1);
        std::optional<unsigned> cp;
        if (ent == "amp") cp = '&';
        else if (ent == "lt") cp = '<';
        else if (ent == "gt") cp = '>';
        else if (ent == "quot") cp = '"';
        else if (ent == "apos") cp = '\'';
        else if (ent == "colon") cp = ':';
        else if (ent == "Tab") cp = '\t';
        else if (ent == "NewLine") cp = '\n';
        else if (!ent.empty() && ent[0] == '#') {
          try {
            cp = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                     ? std::stoul(std::string(ent.substr(2)), nullptr, 16)
                     : std::stoul(std::string(ent.substr(1)));
          } catch (...) {
          }
        }
        if (cp && *cp < 0x80) {
          out.push_back(static_cast<char>(*cp));
          i = semi;
          continue;
        }
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

bool safe_url(std::string_view raw) {
  std::string url;
  for (char c : decode_basic_entities(raw)) {
    if (static_cast<unsigned char>(c) > 0x20) url.push_back(c);
  }
  url = lower(url);
  auto colon = url.find(':');
  auto delim = url.find_first_of("/?#");
  if (colon == std::string::npos || (delim != std::string::npos && delim < colon))
    return true;  // relative
  auto scheme = url.substr(0, colon);
  return scheme == "http" || scheme == "https" || scheme == "mailto";
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

void append_char(std::string& out, unsigned long cp) {
  switch (cp) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: append_utf8(out, cp);
  }
}

constexpr std::pair<std::string_view, unsigned long> kNamed[] = {
    {"amp", '&'},      {"lt", '<'},         {"gt", '>'},       {"quot", '"'},
    {"apos", '\''},    {"nbsp", 0xA0},      {"copy", 0xA9},    {"reg", 0xAE},
    {"deg", 0xB0},     {"middot", 0xB7},    {"laquo", 0xAB},   {"raquo", 0xBB},
    {"agrave", 0xE0},  {"aacute", 0xE1},    {"egrave", 0xE8},  {"eacute", 0xE9},
    {"igrave", 0xEC},  {"iacute", 0xED},    {"ograve", 0xF2},  {"oacute", 0xF3},
    {"ugrave", 0xF9},  {"uacute", 0xFA},    {"Agrave", 0xC0},  {"Egrave", 0xC8},
    {"Eacute", 0xC9},  {"ccedil", 0xE7},    {"ndash", 0x2013}, {"mdash", 0x2014},
    {"lsquo", 0x2018}, {"rsquo", 0x2019},   {"ldquo", 0x201C}, {"rdquo", 0x201D},
    {"hellip", 0x2026}, {"euro", 0x20AC}};

// Character data with references resolved to characters. Only & < > " come
// out escaped; unknown references are kept as literal text.
std::string escape_text(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    auto uc = static_cast<unsigned char>(c);
    if (c == '&') {
      std::size_t j = i + 1;
      bool numeric = j < text.size() && text[j] == '#';
      if (numeric) ++j;
      bool hex = numeric && j < text.size() && (text[j] == 'x' || text[j] == 'X');
      if (hex) ++j;
      std::size_t start = j;
      while (j < text.size() && j - start <= 32 &&
             (hex ? std::isxdigit(static_cast<unsigned char>(text[j]))
                  : numeric ? std::isdigit(static_cast<unsigned char>(text[j]))
                            : std::isalnum(static_cast<unsigned char>(text[j]))))
        ++j;
      bool terminated = j > start && j < text.size() && text[j] == ';';
      if (terminated && numeric) {
        unsigned long cp = 0;
        for (std::size_t k = start; k < j && cp <= 0x10FFFF; ++k) {
          int d = std::isdigit(static_cast<unsigned char>(text[k]))
                      ? text[k] - '0'
                      : std::tolower(static_cast<unsigned char>(text[k])) - 'a' + 10;
          cp = cp * (hex ? 16 : 10) + static_cast<unsigned long>(d);
        }
        bool bad = cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF) ||
                   (cp < 0x20 && cp != '\t' && cp != '\n' && cp != '\r') ||
                   (cp >= 0x7F && cp <= 0x9F);
        append_char(out, bad ? 0xFFFD : cp);
        i = j;
        continue;
      }
      if (terminated) {
        auto name = text.substr(start, j - start);
        auto hit = std::find_if(std::begin(kNamed), std::end(kNamed),
                                [&](const auto& e) { return e.first == name; });
        if (hit != std::end(kNamed)) {
          append_char(out, hit->second);
          i = j;
          continue;
        }
      }
      out += "&amp;";
    } else if (c == '<') {
      out += "&lt;";
    } else if (c == '>') {
      out += "&gt;";
    } else if (c == '"') {
      out += "&quot;";
    } else if ((uc < 0x20 && c != '\t' && c != '\n' && c != '\r') || uc == 0x7F) {
      // control characters are not allowed in HTML text
    } else {
      out.push_back(c);
    }
  }
  return out;
}

class Sanitizer {
 public:
  explicit Sanitizer(std::string_view in) : in_(in) {}

  std::string run() {
    while (pos_ < in_.size()) {
      auto lt = in_.find('<', pos_);
      if (lt == std::string_view::npos) {
        out_ += escape_text(in_.substr(pos_));
        break;
      }
      out_ += escape_text(in_.substr(pos_, lt - pos_));
      pos_ = lt;
      if (in_.substr(pos_, 4) == "<!--") {
        auto end = in_.find("-->", pos_ + 4);
        pos_ = end == std::string_view::npos ? in_.size() : end + 3;
        continue;
      }
      if (in_.substr(pos_, 2) == "<!" || in_.substr(pos_, 2) == "<?") {
        auto end = in_.find('>', pos_);
        pos_ = end == std::string_view::npos ? in_.size() : end + 1;
        continue;
      }
      auto tag = parse_tag();
      if (!tag) {
        out_ += "&lt;";
        ++pos_;
        continue;
      }
      handle(*tag);
    }
    while (!open_.empty()) {
      out_ += "</" + open_.back() + ">";
      open_.pop_back();
    }
    return std::move(out_);
  }

 private:
  std::optional<Tag> parse_tag() {
    std::size_t i = pos_ + 1;
    Tag tag;
    if (i < in_.size() && in_[i] == '/') {
      tag.closing = true;
      ++i;
    }
    std::size_t name_start = i;
    while (i < in_.size() && std::isalnum(static_cast<unsigned char>(in_[i]))) ++i;
    if (i == name_start || !std::isalpha(static_cast<unsigned char>(in_[name_start])))
      return std::nullopt;
    tag.name = lower(in_.substr(name_start, i - name_start));
    while (i < in_.size() && in_[i] != '>') {
      unsigned char c = static_cast<unsigned char>(in_[i]);
      if (std::isspace(c) || c == '/') {
        ++i;
        continue;
      }
      std::size_t a = i;
      while (i < in_.size() && !std::isspace(static_cast<unsigned char>(in_[i])) &&
             in_[i] != '=' && in_[i] != '>' && in_[i] != '/')
        ++i;
      std::string attr = lower(in_.substr(a, i - a));
      while (i < in_.size() && std::isspace(static_cast<unsigned char>(in_[i]))) ++i;
      std::string value;
      if (i < in_.size() && in_[i] == '=') {
        ++i;
        while (i < in_.size() && std::isspace(static_cast<unsigned char>(in_[i]))) ++i;
        if (i < in_.size() && (in_[i] == '"' || in_[i] == '\'')) {
          char q = in_[i++];
          auto end = in_.find(q, i);
          if (end == std::string_view::npos) end = in_.size();
          value = std::string(in_.substr(i, end - i));
          i = std::min(end + 1, in_.size());
        } else {
          std::size_t v = i;
          while (i < in_.size() && !std::isspace(static_cast<unsigned char>(in_[i])) &&
                 in_[i] != '>')
            ++i;
          value = std::string(in_.substr(v, i - v));
        }
      }
      if (!attr.empty()) tag.attrs.emplace_back(std::move(attr), std::move(value));
    }
    pos_ = std::min(i + 1, in_.size());
    return tag;
  }

  void skip_content_of(const std::string& name) {
    std::string needle = "</" + name;
    while (pos_ < in_.size()) {
      auto lt = in_.find('<', pos_);
      if (lt == std::string_view::npos) {
        pos_ = in_.size();
        return;
      }
      if (lower(in_.substr(lt, needle.size())) == needle) {
        auto gt = in_.find('>', lt);
        pos_ = gt == std::string_view::npos ? in_.size() : gt + 1;
        return;
      }
      pos_ = lt + 1;
    }
  }

  void handle(const Tag& tag) {
    if (!tag.closing && one_of(tag.name, kDropWithContent)) {
      skip_content_of(tag.name);
      return;
    }
    if (!one_of(tag.name, kAllowed)) return;
    if (tag.closing) {
      if (is_void(tag.name)) return;
      auto it = std::find(open_.rbegin(), open_.rend(), tag.name);
      if (it == open_.rend()) return;
      auto keep = static_cast<std::size_t>(open_.rend() - it) - 1;
      while (open_.size() > keep) {
        out_ += "</" + open_.back() + ">";
        open_.pop_back();
      }
      return;
    }
    out_ += "<" + tag.name;
    std::vector<std::string> emitted;
    for (const auto& [attr, value] : tag.attrs) {
      if (std::find(emitted.begin(), emitted.end(), attr) != emitted.end()) continue;
      emitted.push_back(attr);
      bool keep = (tag.name == "a" && attr == "href" && safe_url(value)) ||
                  (tag.name == "img" && attr == "src" && safe_url(value)) ||
                  (tag.name == "img" && attr == "alt");
      if (keep) out_ += " " + attr + "=\"" + escape_text(value) + "\"";
    }
    out_ += ">";
    if (!is_void(tag.name)) open_.push_back(tag.name);
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::string out_;
  std::vector<std::string> open_;
};

}  // namespace

std::string sanitize_html(std::string_view html) { return Sanitizer(html).run(); }

}  // namespace lodstory

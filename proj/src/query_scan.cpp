#include "lodstory/query_scan.hpp"

#include <algorithm>
#include <cctype>

#include "lodstory/error.hpp"

namespace lodstory {

namespace {

bool is_name_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool is_word_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == ':' || c >= 0x80;
}

bool is_word_char(unsigned char c) {
  return is_name_char(c) || c == '-' || c == ':' || c == '.' || c == '%';
}

bool iri_forbidden(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' ||
         c == '|' || c == '^' || c == '`' || c == '\\';
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::vector<QueryToken> run() {
    while (pos_ < text_.size()) {
      auto c = static_cast<unsigned char>(text_[pos_]);
      if (std::isspace(c)) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n' && text_[pos_] != '\r')
          ++pos_;
      } else if (c == '"' || c == '\'') {
        string_literal(static_cast<char>(c));
      } else if (c == '<') {
        iri_or_less();
      } else if (c == '?' || c == '$') {
        variable();
      } else if (c == '@' && pos_ + 1 < text_.size() &&
                 std::isalpha(static_cast<unsigned char>(text_[pos_ + 1]))) {
        std::size_t start = pos_++;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '-'))
          ++pos_;
        emit(TokenKind::LangTag, start);
      } else if (std::isdigit(c) ||
                 ((c == '.' || c == '+' || c == '-') && pos_ + 1 < text_.size() &&
                  std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) &&
                  (c == '.' || previous_allows_sign()))) {
        number();
      } else if (is_word_start(c)) {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               is_word_char(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
        while (pos_ > start + 1 && text_[pos_ - 1] == '.') --pos_;
        emit(TokenKind::Word, start);
      } else {
        punct();
      }
    }
    return std::move(tokens_);
  }

 private:
  void emit(TokenKind kind, std::size_t start) {
    tokens_.push_back({kind, std::string(text_.substr(start, pos_ - start)),
                       start, pos_ - start});
  }

  bool previous_allows_sign() const {
    if (tokens_.empty()) return true;
    const auto& t = tokens_.back();
    return t.kind == TokenKind::Punct && t.text != ")";
  }

  void string_literal(char quote) {
    std::size_t start = pos_;
    bool is_long = text_.substr(pos_, 3) == std::string(3, quote);
    pos_ += is_long ? 3 : 1;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (is_long) {
        if (text_.substr(pos_, 3) == std::string(3, quote)) {
          pos_ += 3;
          break;
        }
      } else {
        if (c == quote) {
          ++pos_;
          break;
        }
        if (c == '\n' || c == '\r') break;
      }
      ++pos_;
    }
    pos_ = std::min(pos_, text_.size());
    emit(TokenKind::String, start);
  }

  void iri_or_less() {
    std::size_t end = pos_ + 1;
    while (end < text_.size() && text_[end] != '>' &&
           !iri_forbidden(static_cast<unsigned char>(text_[end])))
      ++end;
    if (end < text_.size() && text_[end] == '>') {
      std::size_t start = pos_;
      pos_ = end + 1;
      emit(TokenKind::Iri, start);
      return;
    }
    punct();
  }

  void variable() {
    std::size_t start = pos_;
    std::size_t end = pos_ + 1;
    while (end < text_.size() && is_name_char(static_cast<unsigned char>(text_[end])))
      ++end;
    if (end == pos_ + 1) {
      punct();
      return;
    }
    std::string_view whole = text_.substr(start, end - start);
    pos_ = end;
    if (whole == kSearchPlaceholder || whole == kValuePlaceholder) {
      emit(TokenKind::Placeholder, start);
      return;
    }
    tokens_.push_back({TokenKind::Variable, std::string(whole.substr(1)), start,
                       end - start});
  }

  void number() {
    std::size_t start = pos_;
    if (text_[pos_] == '+' || text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.')) {
      if (text_[pos_] == '.' &&
          (pos_ + 1 >= text_.size() ||
           !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))))
        break;
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      } else {
        pos_ = save;
      }
    }
    emit(TokenKind::Number, start);
  }

  void punct() {
    std::size_t start = pos_;
    static constexpr std::string_view kPairs[] = {"&&", "||", "!=", "<=", ">=", "^^"};
    for (auto pair : kPairs) {
      if (text_.substr(pos_, 2) == pair) {
        pos_ += 2;
        emit(TokenKind::Punct, start);
        return;
      }
    }
    ++pos_;
    emit(TokenKind::Punct, start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<QueryToken> tokens_;
};

void push_unique(std::vector<std::string>& out, const std::string& name) {
  if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
}

}  // namespace

std::vector<QueryToken> scan_query(std::string_view text) {
  return Scanner(text).run();
}

std::vector<std::string> extract_select_variables(std::string_view query_text) {
  auto tokens = scan_query(query_text);
  auto select = std::find_if(tokens.begin(), tokens.end(), [](const QueryToken& t) {
    return t.kind == TokenKind::Word && iequals(t.text, "SELECT");
  });
  if (select == tokens.end()) {
    throw Error(ErrorCode::NotSelectQuery, "query has no SELECT clause");
  }
  auto it = std::next(select);
  if (it != tokens.end() && it->kind == TokenKind::Word &&
      (iequals(it->text, "DISTINCT") || iequals(it->text, "REDUCED"))) {
    ++it;
  }

  std::vector<std::string> vars;
  if (it != tokens.end() && it->kind == TokenKind::Punct && it->text == "*") {
    for (++it; it != tokens.end(); ++it) {
      if (it->kind == TokenKind::Variable) push_unique(vars, it->text);
    }
    return vars;
  }

  int depth = 0;
  bool saw_as = false;
  std::string alias;
  for (; it != tokens.end(); ++it) {
    const auto& t = *it;
    if (depth == 0) {
      if ((t.kind == TokenKind::Word &&
           (iequals(t.text, "WHERE") || iequals(t.text, "FROM"))) ||
          (t.kind == TokenKind::Punct && t.text == "{")) {
        break;
      }
      if (t.kind == TokenKind::Variable) {
        push_unique(vars, t.text);
      } else if (t.kind == TokenKind::Punct && t.text == "(") {
        depth = 1;
        saw_as = false;
        alias.clear();
      }
      continue;
    }
    if (t.kind == TokenKind::Punct && t.text == "(") {
      ++depth;
    } else if (t.kind == TokenKind::Punct && t.text == ")") {
      if (--depth == 0 && !alias.empty()) push_unique(vars, alias);
    } else if (depth == 1 && t.kind == TokenKind::Word && iequals(t.text, "AS")) {
      saw_as = true;
    } else if (depth == 1 && saw_as && t.kind == TokenKind::Variable) {
      alias = t.text;
    }
  }
  return vars;
}

}  // namespace lodstory

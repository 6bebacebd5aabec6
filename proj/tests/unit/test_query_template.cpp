#include <gtest/gtest.h>

#include "lodstory/error.hpp"
#include "lodstory/query_scan.hpp"
#include "lodstory/query_template.hpp"
#include "lodstory/utf8.hpp"
#include "support/generators.hpp"
#include "support/sparql_terms.hpp"

using namespace lodstory;

namespace {

const std::string kSearch = "SELECT ?s WHERE { ?s ?p ?o FILTER(CONTAINS(LCASE(STR(?o)), LCASE($SEARCH))) }";
const std::string kValue = "SELECT ?property ?value WHERE { $VALUE ?property ?value }";

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::IoError;
}

// Tokens of the instantiated query that differ from the template tokens.
std::vector<QueryToken> inserted(const std::string& tpl, const std::string& out) {
  auto a = scan_query(tpl);
  auto b = scan_query(out);
  std::vector<QueryToken> diff;
  if (b.size() != a.size()) return b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].kind == TokenKind::Placeholder) {
      diff.push_back(b[i]);
    } else if (a[i].kind != b[i].kind || a[i].text != b[i].text) {
      return b;
    }
  }
  return diff;
}

}  // namespace

TEST(QueryTemplate, RequiresOwnPlaceholder) {
  EXPECT_NO_THROW(QueryTemplate(kSearch, PlaceholderKind::Search));
  EXPECT_NO_THROW(QueryTemplate(kValue, PlaceholderKind::Value));
  EXPECT_EQ(code_of([] { QueryTemplate("SELECT ?s { ?s ?p \"$SEARCH\" }", PlaceholderKind::Search); }),
            ErrorCode::PlaceholderMissing);
  EXPECT_EQ(code_of([] { QueryTemplate("SELECT ?s { ?s ?p ?o } # $SEARCH", PlaceholderKind::Search); }),
            ErrorCode::PlaceholderMissing);
  EXPECT_EQ(code_of([] { QueryTemplate(kValue, PlaceholderKind::Search); }), ErrorCode::PlaceholderMissing);
  EXPECT_EQ(code_of([] { QueryTemplate("SELECT ?s { $VALUE ?p $SEARCH }", PlaceholderKind::Search); }),
            ErrorCode::PlaceholderMissing);
  EXPECT_EQ(count_placeholders("SELECT ?s { $SEARCH ?p $SEARCH . ?x ?y '$SEARCH' }", PlaceholderKind::Search), 2u);
}

TEST(QueryTemplate, ReplacesEveryOccurrence) {
  QueryTemplate tpl("SELECT ?s { ?s ?p $SEARCH . ?t ?q $SEARCH }", PlaceholderKind::Search);
  auto q = instantiate_template(tpl, "bell");
  EXPECT_EQ(q.text(), "SELECT ?s { ?s ?p \"bell\" . ?t ?q \"bell\" }");
  EXPECT_EQ(q.projected_vars(), std::vector<std::string>{"s"});
}

TEST(QueryTemplate, TermModes) {
  QueryTemplate tpl(kValue, PlaceholderKind::Value);
  EXPECT_EQ(instantiate_template(tpl, "http://example.org/bells/bell1").text(),
            "SELECT ?property ?value WHERE { <http://example.org/bells/bell1> ?property ?value }");
  EXPECT_EQ(instantiate_template(tpl, "http://example.org/bells/bell1", TermMode::Literal).text(),
            "SELECT ?property ?value WHERE { \"http://example.org/bells/bell1\" ?property ?value }");
  EXPECT_EQ(instantiate_template(tpl, "urn:x:1").text(),
            "SELECT ?property ?value WHERE { \"urn:x:1\" ?property ?value }");
  EXPECT_EQ(instantiate_template(tpl, "urn:x:1", TermMode::Iri).text(),
            "SELECT ?property ?value WHERE { <urn:x:1> ?property ?value }");
  EXPECT_EQ(instantiate_template(tpl, "http://ex.org/a> ?p ?o } #").text(),
            "SELECT ?property ?value WHERE { \"http://ex.org/a> ?p ?o } #\" ?property ?value }");
  EXPECT_EQ(code_of([&] { instantiate_template(tpl, "http://ex.org/a b", TermMode::Iri); }),
            ErrorCode::UnescapableValue);
  EXPECT_EQ(code_of([&] { instantiate_template(tpl, "plain", TermMode::Iri); }), ErrorCode::UnescapableValue);
}

TEST(QueryTemplate, Escaping) {
  EXPECT_EQ(sparql_string_literal("a\"b\\c\nd\re\tf\bg\fh'"), "\"a\\\"b\\\\c\\nd\\re\\tf\\bg\\fh'\"");
  EXPECT_EQ(sparql_string_literal("Prè 🔔"), "\"Prè 🔔\"");
  EXPECT_EQ(code_of([] { sparql_string_literal(std::string("a\0b", 3)); }), ErrorCode::UnescapableValue);
  EXPECT_EQ(code_of([] { sparql_string_literal("\xC3"); }), ErrorCode::UnescapableValue);
  EXPECT_EQ(sparql_iri("http://ex.org/x"), "<http://ex.org/x>");
  EXPECT_EQ(code_of([] { sparql_iri("http://ex.org/<x>"); }), ErrorCode::UnescapableValue);
}

TEST(QueryTemplate, ClassicInjectionStaysInsideLiteral) {
  QueryTemplate tpl(kSearch, PlaceholderKind::Search);
  const std::string attack = "x\"))) } UNION { ?s ?p ?o } #";
  auto q = instantiate_template(tpl, attack);
  auto diff = inserted(kSearch, q.text());
  ASSERT_EQ(diff.size(), 1u);
  EXPECT_EQ(diff[0].kind, TokenKind::String);
  EXPECT_EQ(testkit::decode_string_literal(diff[0].text), attack);
  EXPECT_EQ(scan_query(q.text()).size(), scan_query(kSearch).size());
}

TEST(QueryTemplateProperty, FuzzedValuesStayInOneToken) {
  testkit::Rng rng(1234);
  QueryTemplate search(kSearch, PlaceholderKind::Search);
  QueryTemplate value(kValue, PlaceholderKind::Value);
  int literals = 0, iris = 0, refused = 0;
  for (int i = 0; i < 5000; ++i) {
    std::string v = testkit::random_text(rng, 40);
    if (i % 7 == 0) v = "http://example.org/" + v;
    const auto& tpl = i % 2 ? value : search;
    std::string out;
    try {
      out = instantiate_template(tpl, v).text();
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::UnescapableValue);
      ASSERT_NE(v.find('\0'), std::string::npos) << "refused " << v;
      ++refused;
      continue;
    }
    ASSERT_EQ(v.find('\0'), std::string::npos);
    auto diff = inserted(tpl.text(), out);
    ASSERT_EQ(diff.size(), 1u) << out;
    if (diff[0].kind == TokenKind::String) {
      ++literals;
      ASSERT_EQ(testkit::decode_string_literal(diff[0].text), v) << out;
    } else {
      ++iris;
      ASSERT_EQ(diff[0].kind, TokenKind::Iri);
      ASSERT_EQ(diff[0].text, "<" + v + ">");
    }
  }
  EXPECT_GT(literals, 0);
  EXPECT_GT(iris, 0);
  EXPECT_GT(refused, 0);
}

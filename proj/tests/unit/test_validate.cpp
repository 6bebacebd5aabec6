#include <gtest/gtest.h>

#include "lodstory/story_json.hpp"
#include "support/generators.hpp"

using namespace lodstory;

namespace {

Story base() {
  Story s;
  s.id = "s";
  s.title = "T";
  s.endpoint = "http://localhost:3030/ds/sparql";
  return s;
}

bool has(const std::vector<Diagnostic>& d, Severity sev, const std::string& id, const std::string& needle) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) {
    return x.severity == sev && x.component_id == id && x.message.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST(Validate, FixtureIsClean) {
  auto d = validate_story(deserialize_story(testkit::read_fixture("bells.json")));
  for (const auto& x : d) ADD_FAILURE() << x.component_id << ": " << x.message;
  EXPECT_FALSE(has_errors(d));
}

TEST(Validate, DataQueries) {
  auto s = base();
  s.components = {{"empty", block::Counter{"n", "  "}},
                  {"ask", block::Table{"t", "ASK { ?s ?p ?o }"}},
                  {"chart", block::Chart{ChartKind::Bar, "c", "SELECT ?x ?y WHERE { ?x ?p ?y }"}},
                  {"map", block::Map{"SELECT ?name WHERE { ?x ?p ?name }", {"kind", "lat"}}},
                  {"ok", block::Map{"SELECT ?coordinates ?kind WHERE { ?x ?p ?coordinates ; ?q ?kind }", {"kind"}}}};
  auto d = validate_story(s);
  EXPECT_TRUE(has_errors(d));
  EXPECT_TRUE(has(d, Severity::Error, "empty", "query is empty"));
  EXPECT_TRUE(has(d, Severity::Error, "ask", "not a SELECT"));
  EXPECT_TRUE(has(d, Severity::Warning, "chart", "?label/?value"));
  EXPECT_TRUE(has(d, Severity::Warning, "map", "location variables"));
  EXPECT_TRUE(has(d, Severity::Warning, "map", "?kind is not projected"));
  EXPECT_TRUE(has(d, Severity::Warning, "map", "?lat is a location variable"));
  EXPECT_FALSE(std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return x.component_id == "ok"; }));
}

TEST(Validate, Templates) {
  auto s = base();
  s.components = {{"search", block::TextSearch{"SELECT ?bell WHERE { ?bell ?p ?o }"}},
                  {"search2", block::TextSearch{"SELECT ?bell WHERE { ?bell ?p $SEARCH }"}},
                  {"act", block::Action{"go", "SELECT ?p WHERE { $VALUE ?p ?o }", "search2", "nope"}},
                  {"act2", block::Action{"go", "SELECT ?p WHERE { $VALUE ?p ?o }", "search2", ""}}};
  auto d = validate_story(s);
  EXPECT_TRUE(has(d, Severity::Error, "search", "$SEARCH"));
  EXPECT_TRUE(has(d, Severity::Warning, "act", "column ?nope"));
  EXPECT_TRUE(has(d, Severity::Error, "act2", "column is empty"));
  EXPECT_FALSE(std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return x.component_id == "search2"; }));
}

TEST(Validate, BrokenReferenceNamesAction) {
  auto s = base();
  s.components = {{"act", block::Action{"go", "SELECT ?p WHERE { $VALUE ?p ?o }", "finder", "x"}}};
  auto d = validate_story(s);
  EXPECT_TRUE(has(d, Severity::Error, "act", "finder"));
}

TEST(Validate, StoryLevel) {
  auto s = base();
  s.palette.clear();
  s.components = {{"t", block::Text{""}}};
  auto d = validate_story(s);
  EXPECT_TRUE(has(d, Severity::Warning, "", "palette is empty"));
  EXPECT_TRUE(has(d, Severity::Warning, "t", "text block is empty"));
  EXPECT_FALSE(has_errors(d));
  EXPECT_EQ(to_string(Severity::Info), "info");
}

TEST(Validate, DoughnutPaletteHint) {
  auto s = base();
  s.components = {{"d", block::Chart{ChartKind::Doughnut, "d", "SELECT ?label ?value WHERE { ?a ?label ?value } LIMIT 20"}}};
  EXPECT_TRUE(has(validate_story(s), Severity::Info, "d", "colours repeat"));
}

#include <gtest/gtest.h>

#include <json.hpp>

#include "lodstory/error.hpp"
#include "lodstory/story_json.hpp"
#include "support/generators.hpp"

using namespace lodstory;
using nlohmann::json;

namespace {

std::pair<ErrorCode, std::string> failure(const std::string& doc) {
  try {
    deserialize_story(doc);
  } catch (const Error& e) {
    return {e.code(), e.path().value_or("")};
  }
  ADD_FAILURE() << "accepted " << doc;
  return {ErrorCode::IoError, ""};
}

json bells() { return json::parse(testkit::read_fixture("bells.json")); }

}  // namespace

TEST(StoryJson, FixtureLoads) {
  auto s = deserialize_story(testkit::read_fixture("bells.json"));
  EXPECT_EQ(s.id, "bells-of-liguria");
  EXPECT_EQ(s.section, "Bells");
  ASSERT_EQ(s.components.size(), 12u);
  EXPECT_EQ(s.components.front().id, "intro");
  EXPECT_EQ(s.components.back().id, "outro");
  EXPECT_EQ(std::get<block::Chart>(s.components[3].body).kind, ChartKind::Doughnut);
}

TEST(StoryJson, SerializeIsCompactAndOrdered) {
  Story s;
  s.id = "x";
  s.title = "T";
  s.endpoint = "http://e/";
  s.palette = {"#000000"};
  s.components = {{"m", block::Map{"SELECT ?lat ?long {}", {"kind"}}}};
  EXPECT_EQ(serialize_story(s),
            "{\"version\":1,\"id\":\"x\",\"title\":\"T\",\"subtitle\":null,\"description\":null,"
            "\"endpoint\":\"http://e/\",\"section\":null,\"palette\":[\"#000000\"],\"components\":"
            "[{\"id\":\"m\",\"type\":\"map\",\"query\":\"SELECT ?lat ?long {}\",\"filter_vars\":[\"kind\"]}]}");
}

TEST(StoryJsonProperty, RoundTrip) {
  testkit::Rng rng(1);
  for (int i = 0; i < 1500; ++i) {
    Story s = testkit::random_story(rng);
    auto bytes = serialize_story(s);
    Story back = deserialize_story(bytes);
    ASSERT_EQ(back, s) << bytes;
    ASSERT_EQ(serialize_story(back), bytes);
  }
}

TEST(StoryJsonProperty, ComponentRoundTrip) {
  testkit::Rng rng(2);
  std::vector<Component> earlier;
  for (int i = 0; i < 500; ++i) {
    auto c = testkit::random_component(rng, "k" + std::to_string(i), earlier);
    ASSERT_EQ(deserialize_component(serialize_component(c)), c);
    earlier.push_back(c);
  }
}

TEST(StoryJson, VersionChecks) {
  auto doc = bells();
  doc["version"] = 2;
  EXPECT_EQ(failure(doc.dump()).first, ErrorCode::SchemaVersionUnsupported);
  doc.erase("version");
  EXPECT_EQ(failure(doc.dump()), std::make_pair(ErrorCode::SchemaViolation, std::string("version")));
  doc["version"] = "1";
  EXPECT_EQ(failure(doc.dump()).first, ErrorCode::SchemaViolation);
}

TEST(StoryJson, ViolationsCarryPaths) {
  struct Case {
    std::function<void(json&)> mutate;
    std::string path;
  };
  std::vector<Case> cases = {
      {[](json& d) { d["id"] = "Not A Slug"; }, "id"},
      {[](json& d) { d["title"] = "   "; }, "title"},
      {[](json& d) { d.erase("title"); }, "title"},
      {[](json& d) { d["endpoint"] = "/relative"; }, "endpoint"},
      {[](json& d) { d["palette"][2] = "red"; }, "palette[2]"},
      {[](json& d) { d["subtitle"] = 5; }, "subtitle"},
      {[](json& d) { d["extra"] = true; }, "extra"},
      {[](json& d) { d.erase("components"); }, "components"},
      {[](json& d) { d["components"][1]["type"] = "gauge"; }, "components[1].type"},
      {[](json& d) { d["components"][2]["chart_kind"] = "pie"; }, "components[2].chart_kind"},
      {[](json& d) { d["components"][2]["colour"] = "x"; }, "components[2].colour"},
      {[](json& d) { d["components"][3].erase("query"); }, "components[3].query"},
      {[](json& d) { d["components"][4]["id"] = "intro"; }, "components[4].id"},
      {[](json& d) { d["components"][5]["id"] = "has space"; }, "components[5].id"},
      {[](json& d) { d["components"][7]["filter_vars"] = "province"; }, "components[7].filter_vars"},
      {[](json& d) { d["components"][10]["source"] = "finder"; }, "components[10].source"},
      {[](json& d) { d["components"][10]["source"] = "total"; }, "components[10].source"},
  };
  for (const auto& c : cases) {
    auto doc = bells();
    c.mutate(doc);
    EXPECT_EQ(failure(doc.dump()), std::make_pair(ErrorCode::SchemaViolation, c.path)) << c.path;
  }
  EXPECT_EQ(failure("not json").first, ErrorCode::SchemaViolation);
  EXPECT_EQ(failure("[]").first, ErrorCode::SchemaViolation);
  EXPECT_EQ(failure("{\"version\":1,\"id\":\"a\",\"title\":\"\xC3\x28\"}").first, ErrorCode::SchemaViolation);
}

TEST(StoryJson, OptionalMembers) {
  auto doc = bells();
  doc.erase("palette");
  doc.erase("subtitle");
  doc["section"] = nullptr;
  auto s = deserialize_story(doc.dump());
  EXPECT_EQ(s.palette, default_palette());
  EXPECT_FALSE(s.subtitle);
  EXPECT_FALSE(s.section);
}

TEST(StoryJson, ComponentDocument) {
  auto c = deserialize_component("{\"id\":\"t\",\"type\":\"table\",\"title\":\"T\",\"query\":\"SELECT * {}\"}");
  EXPECT_EQ(c, (Component{"t", block::Table{"T", "SELECT * {}"}}));
  try {
    deserialize_component("{\"id\":\"t\",\"type\":\"table\",\"title\":\"T\"}");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.path(), "component.query");
  }
}

#include <gtest/gtest.h>

#include <future>

#include "lodstory/detail/files.hpp"
#include "lodstory/error.hpp"
#include "lodstory/exporter.hpp"
#include "lodstory/results_json.hpp"
#include "lodstory/sparql_gateway.hpp"
#include "support/markup.hpp"
#include "support/mini_sparql.hpp"
#include "support/oracles.hpp"
#include "support/service_fixture.hpp"

using namespace lodstory;
using namespace lodstory::service;
using nlohmann::json;
using testkit::anon;
using testkit::external;
using testkit::member;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;  // sentinel, never expected below
}

bool ok(const std::function<void()>& fn) {
  try {
    fn();
    return true;
  } catch (const Error&) {
    return false;
  }
}

json text_story(const std::string& id, const std::string& endpoint) {
  return {{"version", 1},
          {"id", id},
          {"title", "Story " + id},
          {"endpoint", endpoint},
          {"components", json::array({{{"id", "t"}, {"type", "text"}, {"html", "<p>hello</p>"}}})}};
}

struct FakeSteady {
  std::shared_ptr<std::chrono::steady_clock::time_point> now =
      std::make_shared<std::chrono::steady_clock::time_point>();
  SteadyClock clock() const {
    auto p = now;
    return [p] { return *p; };
  }
};

}  // namespace

TEST(Authorization, MatrixOverTiersAndVerbs) {
  testkit::ServiceRig rig;
  auto& svc = *rig.service;
  struct Caller {
    std::string name;
    RequestContext ctx;
  };
  const std::vector<Caller> callers = {
      {"anon-s1", anon("s1")}, {"anon-s2", anon("s2")}, {"bob", external("bob")},
      {"carol", external("carol")}, {"alice", member("alice")}, {"dave", member("dave")}};
  // owner -> (who may view, who may mutate)
  const std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>> expected = {
      {"anon-s1", {{"anon-s1"}, {"anon-s1"}}},
      {"bob", {{"bob", "carol", "alice", "dave"}, {"bob", "alice", "dave"}}},
      {"alice", {{"bob", "carol", "alice", "dave"}, {"alice", "dave"}}},
  };
  for (const auto& [owner, rights] : expected) {
    const auto& owner_ctx =
        std::find_if(callers.begin(), callers.end(), [&](const Caller& c) { return c.name == owner; })->ctx;
    for (const auto& caller : callers) {
      const std::string id = "of-" + owner + "-by-" + caller.name;
      svc.create_story(owner_ctx, text_story(id, rig.endpoint.url()));
      bool view = rights.first.count(caller.name) > 0;
      bool mutate = rights.second.count(caller.name) > 0;
      SCOPED_TRACE(id);

      EXPECT_EQ(ok([&] { svc.get_story(caller.ctx, id); }), view);
      auto listed = svc.list_stories(caller.ctx);
      EXPECT_EQ(std::any_of(listed.begin(), listed.end(), [&](const StoredStory& s) { return s.story.id == id; }),
                view);
      EXPECT_EQ(ok([&] { svc.export_story(caller.ctx, id, ExportFormat::Json); }), view);

      auto rev = svc.store().find(id)->meta.revision;
      json update = {{"revision", rev}, {"edits", json::array({{{"op", "remove"}, {"id", "t"}}})}};
      ErrorCode update_code{};
      bool updated = true;
      try {
        svc.update_story(caller.ctx, id, update);
      } catch (const Error& e) {
        updated = false;
        update_code = e.code();
      }
      EXPECT_EQ(updated, mutate);
      if (!mutate) EXPECT_EQ(update_code, view ? ErrorCode::Forbidden : ErrorCode::NotFound);

      // put the text back so the story validates for publishing
      if (updated) {
        auto r = svc.store().find(id)->meta.revision;
        svc.update_story(owner_ctx, id,
                         {{"revision", r},
                          {"edits", json::array({{{"op", "add"},
                                                  {"position", 0},
                                                  {"component", {{"type", "text"}, {"html", "<p>x</p>"}}}}})}});
      }

      bool published = false;
      ErrorCode publish_code{};
      try {
        auto p = svc.publish_story(caller.ctx, id);
        published = true;
        bool to_main = caller.ctx.principal.tier == Tier::Member;
        EXPECT_EQ(p.url.rfind(to_main ? "https://site.example.org/stories/" : "https://catalogue.example.org/", 0), 0u)
            << p.url;
      } catch (const Error& e) {
        publish_code = e.code();
      }
      bool may_publish = mutate && caller.ctx.principal.authenticated();
      EXPECT_EQ(published, may_publish);
      if (!caller.ctx.principal.authenticated()) EXPECT_EQ(publish_code, ErrorCode::AuthRequired);
      else if (!view) EXPECT_EQ(publish_code, ErrorCode::NotFound);
      else if (!mutate) EXPECT_EQ(publish_code, ErrorCode::Forbidden);

      EXPECT_EQ(ok([&] { svc.delete_story(caller.ctx, id); }), mutate);
      EXPECT_EQ(svc.store().find(id).has_value(), !mutate);
    }
  }
}

TEST(Authorization, AnonymousNeedsSession) {
  testkit::ServiceRig rig;
  RequestContext nobody{Principal::anonymous(), std::nullopt, "ip:1"};
  EXPECT_EQ(code_of([&] { rig.service->create_story(nobody, text_story("x", rig.endpoint.url())); }),
            ErrorCode::BadRequest);
  auto s = rig.service->create_story(anon("s1"), text_story("x", rig.endpoint.url()));
  EXPECT_EQ(s.meta.session, "s1");
  EXPECT_FALSE(s.meta.owner);
  EXPECT_EQ(code_of([&] { rig.service->get_story(nobody, "x"); }), ErrorCode::NotFound);
}

TEST(Create, SetupFormUsesTemplate) {
  testkit::ServiceRig rig;
  auto s = rig.service->create_story(member("alice"),
                                     {{"title", "Bells of Liguria"}, {"endpoint", rig.endpoint.url()}, {"section", "Bells"}});
  EXPECT_EQ(s.story.id, "bells-of-liguria");
  EXPECT_EQ(s.story.section, "Bells");
  EXPECT_EQ(s.meta.owner, "alice");
  EXPECT_EQ(s.meta.owner_tier, Tier::Member);
  auto again = rig.service->create_story(member("alice"), {{"title", "Bells of Liguria"}, {"endpoint", rig.endpoint.url()}});
  EXPECT_EQ(again.story.id, "bells-of-liguria-2");
  EXPECT_EQ(code_of([&] { rig.service->create_story(member("alice"), {{"title", " "}, {"endpoint", rig.endpoint.url()}}); }),
            ErrorCode::EmptyTitle);
  EXPECT_EQ(code_of([&] { rig.service->create_story(member("alice"), {{"title", "x"}, {"endpoint", "ftp://x"}}); }),
            ErrorCode::InvalidEndpointUrl);
  EXPECT_EQ(code_of([&] {
              rig.service->create_story(member("alice"),
                                        {{"title", "x"}, {"endpoint", rig.endpoint.url()}, {"template", "nope"}});
            }),
            ErrorCode::UnknownTemplate);
  EXPECT_EQ(code_of([&] { rig.service->create_story(member("alice"), {{"version", 1}, {"id", 3}}); }),
            ErrorCode::SchemaViolation);
}

TEST(Update, EditsAndReplacement) {
  testkit::ServiceRig rig;
  auto& svc = *rig.service;
  auto s = svc.create_story(member("alice"), rig.bells_document());
  auto n = s.story.components.size();
  auto next = svc.update_story(member("alice"), s.story.id,
                               {{"revision", 1},
                                {"edits", json::array({{{"op", "move"}, {"id", "outro"}, {"position", 0}},
                                                       {{"op", "remove"}, {"id", "mid"}}})}});
  EXPECT_EQ(next.meta.revision, 2u);
  EXPECT_EQ(next.story.revision, 2u);
  ASSERT_EQ(next.story.components.size(), n - 1);
  EXPECT_EQ(next.story.components.front().id, "outro");
  EXPECT_EQ(svc.get_story(member("dave"), s.story.id).story, next.story);

  EXPECT_EQ(code_of([&] {
              svc.update_story(member("alice"), s.story.id,
                               {{"revision", 2}, {"edits", json::array({{{"op", "remove"}, {"id", "search"}}})}});
            }),
            ErrorCode::BrokenActionReference);
  EXPECT_EQ(svc.store().find(s.story.id)->meta.revision, 2u);
  EXPECT_EQ(code_of([&] { svc.update_story(member("alice"), s.story.id, {{"revision", 2}}); }), ErrorCode::BadRequest);
  EXPECT_EQ(code_of([&] { svc.update_story(member("alice"), s.story.id, {{"edits", json::array()}}); }),
            ErrorCode::BadRequest);
  EXPECT_EQ(code_of([&] {
              svc.update_story(member("alice"), s.story.id,
                               {{"revision", 2}, {"edits", json::array({{{"op", "frobnicate"}}})}});
            }),
            ErrorCode::BadRequest);

  auto doc = rig.bells_document();
  doc["title"] = "Renamed";
  auto replaced = svc.update_story(member("alice"), s.story.id, {{"revision", 2}, {"story", doc}});
  EXPECT_EQ(replaced.story.title, "Renamed");
  EXPECT_EQ(replaced.meta.revision, 3u);
  doc["id"] = "other";
  EXPECT_EQ(code_of([&] { svc.update_story(member("alice"), s.story.id, {{"revision", 3}, {"story", doc}}); }),
            ErrorCode::BadRequest);
}

TEST(Update, ConcurrentEditsOneWins) {
  testkit::ServiceRig rig;
  auto& svc = *rig.service;
  svc.create_story(member("alice"), text_story("race", rig.endpoint.url()));
  std::vector<std::future<bool>> writers;
  for (int w = 0; w < 10; ++w) {
    writers.push_back(std::async(std::launch::async, [&svc, w] {
      try {
        svc.update_story(member(w % 2 ? "alice" : "dave"), "race",
                         {{"revision", 1},
                          {"edits", json::array({{{"op", "add"},
                                                  {"position", 1},
                                                  {"component", {{"id", "w" + std::to_string(w)},
                                                                 {"type", "text"},
                                                                 {"html", "<p>w</p>"}}}}})}});
        return true;
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RevisionConflict);
        return false;
      }
    }));
  }
  int wins = 0;
  for (auto& f : writers) wins += f.get();
  EXPECT_EQ(wins, 1);
  auto s = svc.store().find("race");
  EXPECT_EQ(s->meta.revision, 2u);
  EXPECT_EQ(s->story.components.size(), 2u);
}

TEST(Publish, ExternalGoesToCatalogueOnly) {
  testkit::ServiceRig rig;
  auto& svc = *rig.service;
  auto s = svc.create_story(external("bob"), rig.bells_document());
  auto p = svc.publish_story(external("bob"), s.story.id);
  EXPECT_EQ(p.url, "https://catalogue.example.org/bells-of-liguria/");
  EXPECT_TRUE(fs::exists(rig.config.external_root / "bells-of-liguria/index.html"));
  EXPECT_EQ(svc.sections(), SiteIndex{});
  EXPECT_FALSE(fs::exists(rig.config.main_site_root / "stories"));
  auto cat = svc.publisher().scan(TargetKind::ExternalCatalogue);
  ASSERT_EQ(cat.sections.size(), 1u);
  EXPECT_EQ(cat.sections[0].stories.at(0).id, s.story.id);
  EXPECT_TRUE(svc.unpublish_story(external("bob"), s.story.id));
  EXPECT_FALSE(fs::exists(rig.config.external_root / "bells-of-liguria"));
  EXPECT_FALSE(svc.unpublish_story(external("bob"), s.story.id));
}

TEST(Publish, MemberGoesToMainSiteUnderSection) {
  testkit::ServiceRig rig;
  auto& svc = *rig.service;
  auto s = svc.create_story(member("alice"), rig.bells_document());
  auto p = svc.publish_story(member("alice"), s.story.id);
  EXPECT_EQ(p.url, "https://site.example.org/stories/bells/bells-of-liguria/");
  auto html = detail::read_file(p.file);
  auto doc = testkit::parse_html(html);
  ASSERT_TRUE(doc.ok()) << *doc.error;
  EXPECT_NE(html.find("Bells per province"), std::string::npos);
  // the published page is a snapshot
  EXPECT_EQ(html.find("data-live=\"true\""), std::string::npos);
  auto index = svc.sections();
  ASSERT_EQ(index.sections.size(), 1u);
  EXPECT_EQ(index.sections[0].title, "Bells");
  EXPECT_EQ(index.sections[0].stories.at(0).url, p.url);

  auto index_bytes = detail::read_file(rig.config.main_site_root / "index.json");
  auto again = svc.publish_story(member("dave"), s.story.id);
  EXPECT_EQ(again.url, p.url);
  EXPECT_EQ(detail::read_file(again.file), html);
  EXPECT_EQ(detail::read_file(rig.config.main_site_root / "index.json"), index_bytes);
  EXPECT_EQ(svc.publisher().scan(TargetKind::ExternalCatalogue), SiteIndex{});

  EXPECT_EQ(code_of([&] { svc.unpublish_story(anon("s1"), s.story.id); }), ErrorCode::AuthRequired);
  EXPECT_EQ(code_of([&] { svc.unpublish_story(external("bob"), s.story.id); }), ErrorCode::Forbidden);
  EXPECT_TRUE(svc.unpublish_story(member("alice"), s.story.id));
  EXPECT_EQ(svc.sections(), SiteIndex{});
}

TEST(Publish, PublishedSnapshotMatchesLocalExport) {
  testkit::ServiceRig rig;
  auto& svc = *rig.service;
  auto s = svc.create_story(member("alice"), rig.bells_document());
  auto p = svc.publish_story(member("alice"), s.story.id);
  auto local = evaluate_story(s.story, [](const SparqlQuery& q) {
    return parse_results_json(testkit::run_sparql(testkit::bells_graph(), q.text()));
  });
  EXPECT_EQ(detail::read_file(p.file), lodstory::export_story(s.story, local, ExportFormat::Html, {}).bytes);
  EXPECT_EQ(svc.export_story(member("alice"), s.story.id, ExportFormat::Html).bytes, detail::read_file(p.file));
}

TEST(Publish, ValidationErrorsBlock) {
  testkit::ServiceRig rig;
  auto doc = text_story("bad", rig.endpoint.url());
  doc["components"].push_back({{"id", "c"}, {"type", "chart"}, {"chart_kind", "bar"}, {"title", "t"},
                               {"query", "ASK { ?x ?p ?o }"}});
  rig.service->create_story(member("alice"), doc);
  try {
    rig.service->publish_story(member("alice"), "bad");
    FAIL() << "published a story with errors";
  } catch (const ValidationFailure& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationFailed);
    ASSERT_FALSE(e.diagnostics().empty());
    EXPECT_EQ(e.diagnostics()[0].component_id, "c");
  }
  EXPECT_EQ(rig.service->sections(), SiteIndex{});
}

TEST(Publish, EndpointFailureLeavesNothingBehind) {
  testkit::ServiceRig rig;
  auto s = rig.service->create_story(member("alice"), rig.bells_document());
  rig.endpoint.set_mode(testkit::MockEndpoint::Mode::ServerError);
  try {
    rig.service->publish_story(member("alice"), s.story.id);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EndpointRejected);
    EXPECT_EQ(e.status(), 500);
  }
  EXPECT_FALSE(fs::exists(rig.config.main_site_root / "stories"));
}

TEST(Proxy, RateLimitPerPrincipal) {
  FakeSteady t;
  testkit::ServiceRig rig({std::chrono::system_clock::now, t.clock()});
  auto& svc = *rig.service;
  const std::string q = "SELECT ?b WHERE { ?b a <http://example.org/bells/Bell> }";
  for (int i = 0; i < 10; ++i) EXPECT_TRUE(ok([&] { svc.proxy_query(member("alice"), rig.endpoint.url(), q); }));
  EXPECT_EQ(code_of([&] { svc.proxy_query(member("alice"), rig.endpoint.url(), q); }), ErrorCode::RateLimited);
  // preview shares the budget
  json preview = {{"endpoint", rig.endpoint.url()},
                  {"component", {{"type", "table"}, {"title", "t"}, {"query", q}}}};
  EXPECT_EQ(code_of([&] { svc.preview(member("alice"), preview); }), ErrorCode::RateLimited);
  EXPECT_TRUE(ok([&] { svc.proxy_query(member("dave"), rig.endpoint.url(), q); }));
  // story reads are not limited
  svc.create_story(member("alice"), text_story("free", rig.endpoint.url()));
  for (int i = 0; i < 20; ++i) svc.get_story(member("alice"), "free");
  *t.now += std::chrono::milliseconds(1001);
  EXPECT_TRUE(ok([&] { svc.proxy_query(member("alice"), rig.endpoint.url(), q); }));
}

TEST(Proxy, CacheAndByteIdentity) {
  testkit::ServiceRig rig;
  auto& svc = *rig.service;
  const std::string q =
      "PREFIX ex: <http://example.org/bells/>\nSELECT ?b ?w WHERE { ?b a ex:Bell ; ex:weight ?w } ORDER BY ?b";
  auto first = svc.proxy_query(anon("s"), rig.endpoint.url(), q);
  EXPECT_FALSE(first.cache_hit);
  auto requests = rig.endpoint.request_count();
  auto second = svc.proxy_query(anon("s"), rig.endpoint.url(), q);
  EXPECT_TRUE(second.cache_hit);
  EXPECT_EQ(second.body, first.body);
  EXPECT_EQ(rig.endpoint.request_count(), requests);

  SparqlGateway direct;
  auto rs = direct.execute_select(EndpointRef(rig.endpoint.url()), SparqlQuery(q));
  EXPECT_EQ(first.body, write_results_json(rs));
  EXPECT_EQ(parse_results_json(first.body), parse_results_json(testkit::run_sparql(testkit::bells_graph(), q)));

  EXPECT_EQ(code_of([&] { svc.proxy_query(anon("s"), rig.endpoint.url(), "ASK { ?s ?p ?o }"); }),
            ErrorCode::NotSelectQuery);
  EXPECT_EQ(code_of([&] { svc.proxy_query(anon("s"), "not a url", q); }), ErrorCode::InvalidEndpointUrl);
}

TEST(Proxy, TruncationSurvivesTheCache) {
  testkit::ServiceRig rig({}, [](ServiceConfig& c) { c.max_rows = 3; });
  const std::string q = "SELECT ?b WHERE { ?b a <http://example.org/bells/Bell> }";
  auto a = rig.service->proxy_query(anon("s"), rig.endpoint.url(), q);
  auto b = rig.service->proxy_query(anon("s"), rig.endpoint.url(), q);
  EXPECT_TRUE(a.truncated);
  EXPECT_TRUE(b.truncated);
  EXPECT_TRUE(b.cache_hit);
  EXPECT_EQ(parse_results_json(a.body).rows.size(), 3u);
}

TEST(Preview, ComponentsAgainstOracles) {
  testkit::ServiceRig rig;
  auto& svc = *rig.service;
  auto story = rig.bells_story();
  auto chart = json::parse(serialize_component(*story.find("per-province")));
  auto out = svc.preview(anon("s"), {{"endpoint", rig.endpoint.url()}, {"component", chart}});
  EXPECT_EQ(out["type"], "series");
  auto oracle = testkit::bells_per_province(testkit::bells_graph());
  ASSERT_EQ(out["labels"].size(), oracle.size());
  for (std::size_t i = 0; i < out["labels"].size(); ++i)
    EXPECT_EQ(out["values"][i].get<double>(), oracle.at(out["labels"][i].get<std::string>()));

  auto text = svc.preview(anon("s"), {{"endpoint", "irrelevant"},
                                      {"component", {{"type", "text"}, {"html", "<p onclick=\"x()\">hi<script>1</script></p>"}}}});
  EXPECT_EQ(text["type"], "html");
  EXPECT_EQ(text["html"], "<p>hi</p>");

  auto search = json::parse(serialize_component(*story.find("search")));
  auto hits = svc.preview(anon("s"), {{"endpoint", rig.endpoint.url()}, {"component", search}, {"input", "\") } UNION { ?bell ?p ?name } #"}});
  EXPECT_EQ(hits["type"], "typed_table");
  EXPECT_TRUE(hits["rows"].empty());
  auto action = json::parse(serialize_component(*story.find("details")));
  auto detail = svc.preview(anon("s"), {{"endpoint", rig.endpoint.url()},
                                        {"component", action},
                                        {"input", {{"value", testkit::bell_iri(10)}, {"term", "iri"}}}});
  EXPECT_FALSE(detail["rows"].empty());

  EXPECT_EQ(code_of([&] { svc.preview(anon("s"), {{"endpoint", rig.endpoint.url()}, {"component", search}}); }),
            ErrorCode::BadRequest);
  EXPECT_EQ(code_of([&] {
              svc.preview(anon("s"), {{"endpoint", rig.endpoint.url()},
                                      {"component", action},
                                      {"input", {{"value", "x"}, {"term", "blank"}}}});
            }),
            ErrorCode::BadRequest);
  EXPECT_EQ(code_of([&] { svc.preview(anon("s"), {{"endpoint", "ftp://x"}, {"component", chart}}); }),
            ErrorCode::InvalidEndpointUrl);
  EXPECT_EQ(code_of([&] { svc.preview(anon("s"), {{"endpoint", rig.endpoint.url()}, {"component", {{"type", "gauge"}}}}); }),
            ErrorCode::SchemaViolation);
}

TEST(ComponentExport, CsvSvgEmbed) {
  testkit::ServiceRig rig;
  auto& svc = *rig.service;
  auto s = svc.create_story(member("alice"), rig.bells_document());
  auto csv = svc.export_component(member("alice"), s.story.id, "recordings", "csv");
  EXPECT_EQ(csv.media_type, "text/csv; charset=utf-8");
  EXPECT_EQ(csv.filename, component_filename(s.story, "recordings", "csv"));
  EXPECT_EQ(csv.bytes, export_component_csv(rig.service->evaluate(s.story).at("recordings")));

  auto svg = svc.export_component(member("alice"), s.story.id, "weight-share", "svg");
  EXPECT_EQ(svg.media_type, "image/svg+xml");
  EXPECT_TRUE(testkit::parse_xml(svg.bytes).ok());

  auto embed = svc.export_component(member("alice"), s.story.id, "where", "embed");
  EXPECT_NE(embed.bytes.find("https://stories.example.org/embed/bells-of-liguria/where"), std::string::npos);

  EXPECT_EQ(code_of([&] { svc.export_component(member("alice"), s.story.id, "recordings", "svg"); }),
            ErrorCode::UnsupportedFormat);
  EXPECT_EQ(code_of([&] { svc.export_component(member("alice"), s.story.id, "recordings", "xlsx"); }),
            ErrorCode::UnsupportedFormat);
  EXPECT_EQ(code_of([&] { svc.export_component(member("alice"), s.story.id, "total", "csv"); }), ErrorCode::NotTabular);
  EXPECT_EQ(code_of([&] { svc.export_component(member("alice"), s.story.id, "intro", "csv"); }), ErrorCode::NotTabular);
  EXPECT_EQ(code_of([&] { svc.export_component(member("alice"), s.story.id, "nope", "csv"); }), ErrorCode::NotFound);
  EXPECT_EQ(code_of([&] { svc.export_component(anon("s"), s.story.id, "recordings", "csv"); }), ErrorCode::NotFound);
}

TEST(Embed, PublishedStoriesAreOpen) {
  testkit::ServiceRig rig;
  auto& svc = *rig.service;
  auto s = svc.create_story(member("alice"), rig.bells_document());
  EXPECT_EQ(code_of([&] { svc.embed(anon("s"), s.story.id, "per-province"); }), ErrorCode::NotFound);
  auto draft = svc.embed(member("dave"), s.story.id, "per-province");
  EXPECT_TRUE(testkit::parse_html(draft).ok());
  svc.publish_story(member("alice"), s.story.id);
  auto page = svc.embed(anon("s"), s.story.id, "per-province");
  EXPECT_EQ(page, draft);
  auto doc = testkit::parse_html(page);
  ASSERT_TRUE(doc.ok()) << *doc.error;
  EXPECT_EQ(doc.find_all("svg").size(), 1u);
  auto live = svc.embed(anon("s"), s.story.id, "per-province", {SnapshotMode::Live});
  EXPECT_NE(live.find("data-live=\"true\""), std::string::npos);
  EXPECT_EQ(code_of([&] { svc.embed(anon("s"), s.story.id, "nope"); }), ErrorCode::NotFound);
  EXPECT_EQ(code_of([&] { svc.embed(anon("s"), "missing", "x"); }), ErrorCode::NotFound);
}

TEST(ParseEdit, Shapes) {
  auto add = parse_edit({{"op", "add"}, {"position", 2}, {"component", {{"type", "text"}, {"html", "x"}}}});
  ASSERT_TRUE(std::holds_alternative<edit::Add>(add));
  EXPECT_TRUE(std::get<edit::Add>(add).component.id.empty());
  EXPECT_EQ(std::get<edit::Add>(add).position, 2u);
  auto up = parse_edit({{"op", "update"}, {"id", "a"}, {"component", {{"type", "text"}, {"html", "y"}}}});
  EXPECT_EQ(std::get<edit::Update>(up).id, "a");
  EXPECT_EQ(code_of([] { parse_edit({{"op", "update"}, {"id", "a"}, {"component", {{"id", "b"}, {"type", "text"}, {"html", "y"}}}}); }),
            ErrorCode::BadRequest);
  EXPECT_EQ(code_of([] { parse_edit({{"op", "move"}, {"id", "a"}, {"position", -1}}); }), ErrorCode::BadRequest);
  EXPECT_EQ(code_of([] { parse_edit(json::array()); }), ErrorCode::BadRequest);
  EXPECT_EQ(code_of([] { parse_edit({{"op", "add"}, {"position", 0}, {"component", {{"type", "chart"}}}}); }),
            ErrorCode::SchemaViolation);
}

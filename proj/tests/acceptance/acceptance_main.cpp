// One PASS/FAIL line per primary acceptance criterion. Exit status is the
// number of failed criteria.

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "lodstory/detail/files.hpp"
#include "lodstory/evaluators.hpp"
#include "lodstory/exporter.hpp"
#include "lodstory/html_sanitizer.hpp"
#include "lodstory/query_scan.hpp"
#include "lodstory/query_template.hpp"
#include "lodstory/results_json.hpp"
#include "lodstory/service/http_frontend.hpp"
#include "lodstory/sparql_gateway.hpp"
#include "lodstory/story_json.hpp"
#include "support/csv.hpp"
#include "support/generators.hpp"
#include "support/list_model.hpp"
#include "support/markup.hpp"
#include "support/mini_sparql.hpp"
#include "support/oracles.hpp"
#include "support/pdf_text.hpp"
#include "support/service_fixture.hpp"
#include "support/sparql_terms.hpp"
#include "support/svg_geometry.hpp"

using namespace lodstory;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and sizes.
constexpr double kDoughnutFractionTolerance = 1e-9;
constexpr double kDoughnutStartToleranceDeg = 1e-7;
constexpr auto kRuntimeBudget = std::chrono::seconds(120);
constexpr int kRoundTripCases = 1000;
constexpr int kEditSequences = 500;
constexpr int kEditsPerSequence = 25;
constexpr int kInjectionCases = 1000;
constexpr std::size_t kMinMalformed = 5;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome attempt(const std::function<std::string()>& body) {
  try {
    return {true, body()};
  } catch (const Failure& f) {
    return {false, f.what()};
  } catch (const Error& e) {
    return {false, std::string(to_string(e.code())) + ": " + e.what()};
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
}

QueryRunner via_gateway(const SparqlGateway& gw, const std::string& url) {
  return [&gw, url](const SparqlQuery& q) { return gw.execute_select(EndpointRef(url), q); };
}

Story bells_at(const std::string& url) {
  auto s = deserialize_story(testkit::read_fixture("bells.json"));
  s.endpoint = url;
  return s;
}

std::vector<std::string> section_ids(const testkit::Document& doc) {
  std::vector<std::string> ids;
  for (auto i : doc.find_by_class("component"))
    if (doc.nodes[i].name == "section") ids.push_back(*doc.nodes[i].attr("id"));
  return ids;
}

std::string ascii_lower(std::string s) {
  for (auto& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

// ---------------------------------------------------------------------------

std::string feature_matrix(const testkit::MockEndpoint& bells, const testkit::MockEndpoint& towns) {
  std::vector<std::string> seen;
  SparqlGateway gw;

  // SPARQL access
  const std::string q = "SELECT ?b WHERE { ?b a <http://example.org/bells/Bell> } ORDER BY ?b";
  auto rs = gw.execute_select(EndpointRef(bells.url()), SparqlQuery(q));
  require(rs == parse_results_json(testkit::run_sparql(testkit::bells_graph(), q)), "select differs from local run");
  seen.push_back("sparql");

  // multi-dataset: two endpoints, two stories, one run
  Story town_story;
  town_story.id = "towns";
  town_story.title = "Towns";
  town_story.endpoint = towns.url();
  town_story.components = {{"pop", block::Chart{ChartKind::Bar, "Population",
                                                "SELECT ?label ?value WHERE { ?t a <http://example.org/towns/Town> ; "
                                                "<http://www.w3.org/2000/01/rdf-schema#label> ?label ; "
                                                "<http://example.org/towns/population> ?value } ORDER BY ?label"}}};
  auto story = bells_at(bells.url());
  auto bell_payloads = evaluate_story(story, via_gateway(gw, bells.url()));
  auto town_payloads = evaluate_story(town_story, via_gateway(gw, towns.url()));
  require(std::get<Card>(bell_payloads.at("total")).value == 26, "bell count");
  require(std::get<Series>(town_payloads.at("pop")).values.size() == 5, "town count");
  seen.push_back("multi-dataset");

  // multiple charts: four kinds
  std::set<ChartKind> kinds;
  for (const auto& c : story.components)
    if (auto* ch = std::get_if<block::Chart>(&c.body)) {
      kinds.insert(ch->kind);
      auto svg = export_component_svg(std::get<Series>(bell_payloads.at(c.id)), ch->kind, story.palette, ch->title);
      require(testkit::parse_xml(svg).ok(), "svg for " + c.id);
    }
  require(kinds.size() == 4, "expected bar, line, scatter and doughnut");
  seen.push_back("charts");

  // interactivity: search then act on a hit
  const auto& search = std::get<block::TextSearch>(story.find("search")->body);
  const auto& action = std::get<block::Action>(story.find("details")->body);
  auto hits = run_text_search(search, "campana", via_gateway(gw, bells.url()));
  require(!hits.rows.empty(), "search found nothing");
  auto col = std::find(hits.vars.begin(), hits.vars.end(), action.column) - hits.vars.begin();
  auto details = run_action(action, hits.rows[0][col]->raw.value, TermMode::Auto, via_gateway(gw, bells.url()));
  require(!details.rows.empty(), "action found nothing");
  seen.push_back("interactivity");

  // layout and curated text
  auto html = export_story(story, bell_payloads, ExportFormat::Html).bytes;
  auto doc = testkit::parse_html(html);
  require(doc.ok(), "html: " + doc.error.value_or(""));
  std::vector<std::string> order;
  for (const auto& c : story.components) order.push_back(c.id);
  require(section_ids(doc) == order, "section order");
  seen.push_back("layout");
  for (const auto& c : story.components)
    if (auto* t = std::get_if<block::Text>(&c.body))
      require(html.find(sanitize_html(t->html)) != std::string::npos, "curated text " + c.id);
  seen.push_back("curated-text");

  // exports
  require(export_story(story, bell_payloads, ExportFormat::Pdf).bytes.rfind("%PDF-", 0) == 0, "pdf");
  require(testkit::parse_csv(export_component_csv(bell_payloads.at("recordings"))).has_value(), "csv");
  auto embed = export_component_embed(story, "where", "https://stories.example.org");
  require(embed.rfind("<iframe", 0) == 0, "embed snippet");
  require(testkit::parse_html(export_component_page(story, "where", bell_payloads)).ok(), "embed page");
  seen.push_back("exports");

  // web + publication through the HTTP frontend
  testkit::ServiceRig rig;
  service::HttpFrontend frontend(*rig.service);
  frontend.bind("127.0.0.1", 0);
  frontend.start();
  httplib::Client client("127.0.0.1", frontend.port());
  client.set_read_timeout(20, 0);
  httplib::Headers auth{{"Authorization", "Bearer t-alice"}};
  auto doc_json = json::parse(serialize_story(bells_at(rig.endpoint.url())));
  auto created = client.Post("/api/stories", auth, doc_json.dump(), "application/json");
  require(created && created->status == 201, "create route");
  require(client.Get("/api/conventions")->status == 200, "conventions route");
  auto pub = client.Post("/api/stories/bells-of-liguria/publish", auth, "", "application/json");
  require(pub && pub->status == 200, "publish route");
  seen.push_back("web");
  require(fs::exists(rig.config.main_site_root / "stories/bells/bells-of-liguria/index.html"), "published html");
  auto index = json::parse(detail::read_file(rig.config.main_site_root / "index.json"));
  require(index["sections"][0]["stories"][0]["id"] == "bells-of-liguria", "index entry");
  require(client.Get("/site/stories/bells/bells-of-liguria/index.html")->status == 200, "static serving");
  frontend.stop();
  seen.push_back("publication");

  std::string out;
  for (const auto& s : seen) out += (out.empty() ? "" : " ") + s;
  return out;
}

std::string round_trip() {
  testkit::Rng rng(20240601);
  for (int i = 0; i < kRoundTripCases; ++i) {
    auto s = testkit::random_story(rng);
    auto text = serialize_story(s);
    auto back = deserialize_story(text);
    require(back == s, "case " + std::to_string(i) + " differs: " + text);
    require(serialize_story(back) == text, "case " + std::to_string(i) + " reserializes differently");
  }
  return std::to_string(kRoundTripCases) + " stories, 0 failures";
}

std::string order_preservation() {
  testkit::Rng rng(777);
  std::size_t applied = 0, rejected = 0;
  for (int seq = 0; seq < kEditSequences; ++seq) {
    auto s = testkit::random_story(rng);
    testkit::ListModel model(s);
    int serial = 0;
    for (int step = 0; step < kEditsPerSequence; ++step) {
      auto e = testkit::random_edit(rng, s, serial);
      bool expected = model.apply(e);
      try {
        s = apply_edit(s, e);
        require(expected, "sequence " + std::to_string(seq) + ": accepted an edit the model rejects");
        ++applied;
      } catch (const Error&) {
        require(!expected, "sequence " + std::to_string(seq) + ": rejected an edit the model accepts");
        ++rejected;
      }
    }
    auto html = export_story(s, {}, ExportFormat::Html, {SnapshotMode::Live}).bytes;
    auto doc = testkit::parse_html(html);
    require(doc.ok(), "sequence " + std::to_string(seq) + ": " + doc.error.value_or(""));
    require(section_ids(doc) == model.ids(), "sequence " + std::to_string(seq) + ": component order differs");
  }
  return std::to_string(kEditSequences) + " sequences, " + std::to_string(applied) + " edits applied, " +
         std::to_string(rejected) + " rejected as the model predicts";
}

// Tokens inserted into `tpl` by instantiation, or nothing when the token
// structure outside the placeholder changed.
std::optional<QueryToken> inserted_token(const std::string& tpl, const std::string& out) {
  auto a = scan_query(tpl);
  auto b = scan_query(out);
  if (a.size() != b.size()) return std::nullopt;
  std::optional<QueryToken> found;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].kind == TokenKind::Placeholder) {
      if (found) return std::nullopt;
      found = b[i];
    } else if (a[i].kind != b[i].kind || a[i].text != b[i].text) {
      return std::nullopt;
    }
  }
  return found;
}

std::string injection_safety(const testkit::MockEndpoint& bells) {
  const auto& g = testkit::bells_graph();
  auto story = bells_at(bells.url());
  const auto& search = std::get<block::TextSearch>(story.find("search")->body);
  const auto& action = std::get<block::Action>(story.find("details")->body);
  QueryTemplate search_tpl(search.query_template, PlaceholderKind::Search);
  QueryTemplate value_tpl(action.query_template, PlaceholderKind::Value);

  // benign oracles: labels of bells, triples per subject
  std::vector<std::string> labels;
  auto bell_set = testkit::subjects_of_type(g, std::string(testkit::kEx) + "Bell");
  for (const auto& t : g)
    if (t.p.value == testkit::kRdfsLabel && bell_set.count(t.s.value)) labels.push_back(t.o.value);
  auto expected_search = [&](const std::string& v) {
    std::size_t n = 0;
    for (const auto& l : labels) n += ascii_lower(l).find(ascii_lower(v)) != std::string::npos;
    return n;
  };
  auto expected_value = [&](const std::string& v, bool as_iri) {
    if (!as_iri) return std::size_t{0};
    std::size_t n = 0;
    for (const auto& t : g) n += t.s.kind == testkit::Term::Iri && t.s.value == v;
    return n;
  };

  const std::vector<std::string> attacks = {
      "\") } UNION { ?bell ?p ?name } #",
      "x\")) } UNION { ?bell ?p ?name . FILTER(true",
      "\\\") } UNION { ?bell ?p ?name } #",
      "'} UNION {?bell ?p ?name}",
      "> ?p ?o } UNION { ?s ?p ?o } #",
      "http://example.org/bells/bell/1> ?p ?o } UNION { ?s ?p ?o",
      "\"\"\" } UNION { ?s ?p ?o } #",
      "\n} UNION { ?bell ?p ?name }\n#",
  };
  SparqlGateway gw;
  EndpointRef endpoint(bells.url());
  testkit::Rng rng(4242);
  std::size_t nonzero = 0, refused = 0, iris = 0;
  for (int i = 0; i < kInjectionCases; ++i) {
    std::string v;
    switch (i % 4) {
      case 0: v = attacks[rng() % attacks.size()] + testkit::random_text(rng, 8); break;
      case 1: v = testkit::random_text(rng, 30); break;
      case 2: {
        const auto& l = labels[rng() % labels.size()];
        // cut on character boundaries
        auto boundary = [&](std::size_t k) {
          while (k < l.size() && (static_cast<unsigned char>(l[k]) & 0xC0) == 0x80) ++k;
          return k;
        };
        auto from = boundary(rng() % l.size());
        auto to = boundary(from + rng() % (l.size() - from + 1));
        v = l.substr(from, to - from);
        break;
      }
      default: v = i % 8 == 3 ? testkit::bell_iri(1 + static_cast<int>(rng() % 30)) : attacks[rng() % attacks.size()];
    }
    bool value_side = i % 2 == 1;
    const auto& tpl = value_side ? value_tpl : search_tpl;
    SparqlQuery q("SELECT * {}");
    try {
      q = instantiate_template(tpl, v);
    } catch (const Error& e) {
      require(e.code() == ErrorCode::UnescapableValue && v.find('\0') != std::string::npos,
              "case " + std::to_string(i) + " refused a value without NUL");
      ++refused;
      continue;
    }
    auto tok = inserted_token(tpl.text(), q.text());
    require(tok.has_value(), "case " + std::to_string(i) + " changed the query structure: " + q.text());
    bool as_iri = tok->kind == TokenKind::Iri;
    if (as_iri) {
      require(tok->text == "<" + v + ">", "case " + std::to_string(i) + " iri not recovered");
      ++iris;
    } else {
      require(tok->kind == TokenKind::String, "case " + std::to_string(i) + " value is not one token");
      require(testkit::decode_string_literal(tok->text) == v, "case " + std::to_string(i) + " literal not recovered");
    }
    auto rows = gw.execute_select(endpoint, q).rows.size();
    auto expected = value_side ? expected_value(v, as_iri) : expected_search(v);
    require(rows == expected, "case " + std::to_string(i) + ": " + std::to_string(rows) + " rows, baseline " +
                                  std::to_string(expected) + " for value " + json(v).dump());
    nonzero += rows > 0;
  }
  require(nonzero > 0 && iris > 0, "fuzz corpus never exercised a matching value");
  return std::to_string(kInjectionCases) + " values, " + std::to_string(nonzero) + " with baseline hits, " +
         std::to_string(iris) + " as IRIs, " + std::to_string(refused) + " refused (NUL)";
}

std::string evaluator_correctness(const testkit::MockEndpoint& bells) {
  const auto& g = testkit::bells_graph();
  SparqlGateway gw;
  auto story = bells_at(bells.url());
  auto run = via_gateway(gw, bells.url());
  auto chart = std::get<Series>(*evaluate_component(*story.find("per-province"), run));
  auto expected = testkit::bells_per_province(g);
  require(chart.labels.size() == expected.size(), "province count " + std::to_string(chart.labels.size()));
  std::size_t i = 0;
  for (const auto& [label, count] : expected) {
    require(chart.labels[i] == label, "label " + label + " vs " + chart.labels[i]);
    require(chart.values[i] == static_cast<double>(count), "count for " + label);
    ++i;
  }
  auto geo = std::get<GeoSet>(*evaluate_component(*story.find("where"), run));
  auto provinces = testkit::located_province_labels(g);
  require(geo.points.size() == testkit::count_located_bells(g), "located bell count");
  require(geo.facets.size() == 1, "facet variables");
  require(geo.facets.at("province") == std::set<std::string>(provinces.begin(), provinces.end()), "province facet");
  return std::to_string(expected.size()) + " provinces exact, " + std::to_string(geo.points.size()) +
         " points, facet of " + std::to_string(provinces.size()) + " values exact";
}

std::string parser_conformance() {
  std::size_t valid = 0, malformed = 0;
  for (const auto& e : fs::directory_iterator(testkit::fixture_path("results"))) {
    auto name = e.path().filename().string();
    auto text = detail::read_file(e.path());
    if (name.rfind("valid-", 0) == 0) {
      auto rs = parse_results_json(text);
      require(parse_results_json(write_results_json(rs)) == rs, name + " does not round-trip");
      ++valid;
    } else if (name.rfind("malformed-", 0) == 0) {
      try {
        parse_results_json(text);
        throw Failure(name + " parsed");
      } catch (const Error& err) {
        require(err.code() == ErrorCode::MalformedResults, name + " gave " + std::string(to_string(err.code())));
      }
      ++malformed;
    }
  }
  // term coverage of the valid corpus
  auto terms = parse_results_json(testkit::read_fixture("results/valid-terms.json"));
  std::set<std::string> kinds;
  for (const auto& row : terms.rows)
    for (const auto& [_, c] : row) {
      if (c.kind == CellKind::Uri) kinds.insert("uri");
      else if (c.kind == CellKind::Blank) kinds.insert("bnode");
      else if (c.lang) kinds.insert("lang");
      else if (c.datatype) kinds.insert("typed");
      else kinds.insert("plain");
    }
  require(kinds.size() == 5, "valid-terms lacks a term kind");
  auto optional = parse_results_json(testkit::read_fixture("results/valid-optional.json"));
  bool absent = std::any_of(optional.rows.begin(), optional.rows.end(),
                            [&](const Row& r) { return r.size() < optional.vars.size(); });
  require(absent, "no absent binding in valid-optional");
  require(malformed >= kMinMalformed, "too few malformed documents");
  return std::to_string(valid) + " valid parsed, " + std::to_string(malformed) + " malformed rejected";
}

std::string auth_publication() {
  using namespace lodstory::service;
  testkit::ServiceRig rig;
  auto& svc = *rig.service;
  auto doc = json::parse(serialize_story(bells_at(rig.endpoint.url())));

  auto anon = svc.create_story(testkit::anon("session-1"), doc);
  try {
    svc.publish_story(testkit::anon("session-1"), anon.story.id);
    throw Failure("anonymous publish succeeded");
  } catch (const Error& e) {
    require(e.code() == ErrorCode::AuthRequired, "anonymous publish gave " + std::string(to_string(e.code())));
  }

  auto main_before = svc.sections();
  doc["id"] = "external-bells";
  svc.create_story(testkit::external("bob"), doc);
  auto ext = svc.publish_story(testkit::external("bob"), "external-bells");
  require(ext.file == rig.config.external_root / "external-bells/index.html" && fs::exists(ext.file),
          "external file placement");
  require(svc.sections() == main_before, "main index changed by external publish");
  require(!fs::exists(rig.config.main_site_root / "index.json") ||
              detail::read_file(rig.config.main_site_root / "index.json") == site_index_json(main_before),
          "main index.json changed");

  doc["id"] = "member-bells";
  doc["section"] = "Bronze Work";
  svc.create_story(testkit::member("alice"), doc);
  auto mem = svc.publish_story(testkit::member("alice"), "member-bells");
  require(mem.file == rig.config.main_site_root / "stories/bronze-work/member-bells/index.html" && fs::exists(mem.file),
          "member file placement");
  auto idx = svc.sections();
  require(idx.sections.size() == 1 && idx.sections[0].title == "Bronze Work" &&
              idx.sections[0].stories.size() == 1 && idx.sections[0].stories[0].id == "member-bells",
          "member index entry");

  auto snapshot = [&] {
    std::map<std::string, std::string> files;
    for (const auto& root : {rig.config.main_site_root, rig.config.external_root})
      for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) files[e.path().string()] = detail::read_file(e.path());
    return files;
  };
  auto before = snapshot();
  svc.publish_story(testkit::member("alice"), "member-bells");
  svc.publish_story(testkit::external("bob"), "external-bells");
  require(snapshot() == before, "republishing changed bytes");
  return "anonymous AuthRequired, external to catalogue, member under section, republish byte-identical (" +
         std::to_string(before.size()) + " files)";
}

std::string export_validity(const testkit::MockEndpoint& bells) {
  SparqlGateway gw;
  auto story = bells_at(bells.url());
  auto payloads = evaluate_story(story, via_gateway(gw, bells.url()));

  auto pdf = export_story(story, payloads, ExportFormat::Pdf).bytes;
  require(pdf.rfind("%PDF-", 0) == 0, "pdf header");
  auto info = testkit::read_pdf(pdf);
  require(info.ok(), "pdf structure: " + info.error.value_or(""));
  require(info.contains(story.title), "pdf text lacks the title");

  auto html = export_story(story, payloads, ExportFormat::Html).bytes;
  auto doc = testkit::parse_html(html);
  require(doc.ok(), "html: " + doc.error.value_or(""));
  std::size_t fragments = 0;
  for (const auto& c : story.components)
    if (auto* t = std::get_if<block::Text>(&c.body)) {
      require(html.find(sanitize_html(t->html)) != std::string::npos, "curated fragment " + c.id);
      ++fragments;
    }

  std::size_t csvs = 0, svgs = 0;
  for (const auto& c : story.components) {
    if (!payloads.count(c.id)) continue;
    const auto& p = payloads.at(c.id);
    if (!std::holds_alternative<Card>(p)) {
      auto rows = testkit::parse_csv(export_component_csv(p));
      require(rows.has_value(), "csv for " + c.id);
      std::size_t n = std::visit(
          [](const auto& x) -> std::size_t {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Series>) return x.values.size();
            else if constexpr (std::is_same_v<T, TypedTable>) return x.rows.size();
            else if constexpr (std::is_same_v<T, GeoSet>) return x.points.size();
            else return 0;
          },
          p);
      require(rows->size() == n + 1, "csv rows for " + c.id);
      ++csvs;
    }
    auto* chart = std::get_if<block::Chart>(&c.body);
    if (!chart) continue;
    const auto& series = std::get<Series>(p);
    auto svg = testkit::parse_xml(export_component_svg(series, chart->kind, story.palette, chart->title));
    require(svg.ok(), "svg for " + c.id);
    const char* element = chart->kind == ChartKind::Bar ? "rect" : chart->kind == ChartKind::Doughnut ? "path" : "circle";
    std::vector<std::size_t> datum;
    for (auto idx : svg.find_by_class("datum"))
      if (svg.nodes[idx].name == element) datum.push_back(idx);
    require(datum.size() == series.values.size(), "svg datum count for " + c.id);
    if (chart->kind == ChartKind::Doughnut) {
      double total = std::accumulate(series.values.begin(), series.values.end(), 0.0);
      double cursor = 0;
      for (std::size_t k = 0; k < datum.size(); ++k) {
        auto sweep = testkit::ring_sweep(*svg.nodes[datum[k]].attr("d"));
        require(sweep.has_value(), "unreadable doughnut path");
        require(std::abs(sweep->sweep_deg / 360.0 - series.values[k] / total) <= kDoughnutFractionTolerance,
                "doughnut fraction " + std::to_string(k));
        double diff = std::abs(sweep->start_deg - std::fmod(cursor, 360.0));
        require(std::min(diff, 360 - diff) <= kDoughnutStartToleranceDeg, "doughnut start " + std::to_string(k));
        cursor += sweep->sweep_deg;
      }
    }
    ++svgs;
  }
  return "pdf title found, html well-formed with " + std::to_string(fragments) + " curated fragments, " +
         std::to_string(csvs) + " csv and " + std::to_string(svgs) + " svg exports match their payloads";
}

}  // namespace

int main() {
  auto started = std::chrono::steady_clock::now();
  testkit::MockEndpoint bells(testkit::bells_graph());
  testkit::MockEndpoint towns(testkit::towns_graph());

  std::vector<std::pair<std::string, Outcome>> results;
  results.emplace_back("round-trip", attempt(round_trip));
  results.emplace_back("order-preservation", attempt(order_preservation));
  results.emplace_back("injection-safety", attempt([&] { return injection_safety(bells); }));
  results.emplace_back("evaluator-correctness", attempt([&] { return evaluator_correctness(bells); }));
  results.emplace_back("results-parser-conformance", attempt(parser_conformance));
  results.emplace_back("auth-publication-matrix", attempt(auth_publication));
  results.emplace_back("export-validity", attempt([&] { return export_validity(bells); }));
  auto features = attempt([&] { return feature_matrix(bells, towns); });
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  if (elapsed > kRuntimeBudget) features = {false, "suite took " + std::to_string(elapsed.count()) + " ms"};
  else features.detail += " (suite " + std::to_string(elapsed.count()) + " ms)";
  results.insert(results.begin(), {"feature-matrix", features});

  int failed = 0;
  for (const auto& [name, o] : results) {
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << "\n";
    failed += !o.pass;
  }
  return failed;
}

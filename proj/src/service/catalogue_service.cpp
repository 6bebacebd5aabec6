#include "lodstory/service/catalogue_service.hpp"

#include "lodstory/html_sanitizer.hpp"
#include "lodstory/payload_json.hpp"
#include "lodstory/query_template.hpp"
#include "lodstory/results_json.hpp"
#include "lodstory/url.hpp"

namespace lodstory::service {

namespace {

using nlohmann::json;

[[noreturn]] void bad_request(const std::string& message) {
  throw Error(ErrorCode::BadRequest, message);
}

const json& member(const json& obj, std::string_view key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) bad_request(std::string(where) + " needs \"" + std::string(key) + "\"");
  return *it;
}

std::string string_member(const json& obj, std::string_view key, std::string_view where) {
  const json& v = member(obj, key, where);
  if (!v.is_string()) bad_request(std::string(where) + ": \"" + std::string(key) + "\" must be a string");
  return v.get<std::string>();
}

std::size_t index_member(const json& obj, std::string_view key, std::string_view where) {
  const json& v = member(obj, key, where);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    bad_request(std::string(where) + ": \"" + std::string(key) + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

std::uint64_t revision_of(const json& body) {
  auto it = body.find("revision");
  if (it == body.end() || !it->is_number_integer() || it->get<std::int64_t>() < 0)
    bad_request("update needs the \"revision\" it is based on");
  return it->get<std::uint64_t>();
}

Component component_from(const json& node) {
  if (!node.is_object()) bad_request("component must be an object");
  return deserialize_component(node.dump());
}

}  // namespace

bool can_view(const RequestContext& ctx, const StoryMeta& meta) {
  if (meta.session) {
    return !ctx.principal.authenticated() && ctx.session && *ctx.session == *meta.session;
  }
  return ctx.principal.authenticated();
}

bool can_mutate(const RequestContext& ctx, const StoryMeta& meta) {
  if (!can_view(ctx, meta)) return false;
  if (meta.session) return true;
  return ctx.principal.tier == Tier::Member ||
         (ctx.principal.subject && meta.owner && *ctx.principal.subject == *meta.owner);
}

Edit parse_edit(const json& node) {
  if (!node.is_object()) bad_request("edit must be an object");
  auto op = string_member(node, "op", "edit");
  if (op == "add") {
    edit::Add add;
    json component = member(node, "component", "add");
    if (component.is_object() && !component.contains("id")) component["id"] = "";
    if (component.is_object() && component["id"] == "") {
      // the store assigns a free id, the schema check needs a valid one
      component["id"] = "pending";
      add.component = component_from(component);
      add.component.id.clear();
    } else {
      add.component = component_from(component);
    }
    add.position = index_member(node, "position", "add");
    return add;
  }
  if (op == "update") {
    edit::Update update;
    update.id = string_member(node, "id", "update");
    json component = member(node, "component", "update");
    if (component.is_object() && !component.contains("id")) component["id"] = update.id;
    Component c = component_from(component);
    if (c.id != update.id) bad_request("update: component id does not match \"id\"");
    update.body = std::move(c.body);
    return update;
  }
  if (op == "remove") return edit::Remove{string_member(node, "id", "remove")};
  if (op == "move") {
    return edit::Move{string_member(node, "id", "move"), index_member(node, "position", "move")};
  }
  bad_request("unknown edit op \"" + op + "\"");
}

CatalogueService::CatalogueService(ServiceConfig config, std::shared_ptr<AuthProvider> auth,
                                   Clocks clocks)
    : config_(std::move(config)),
      auth_(auth ? std::move(auth) : make_auth_provider(config_)),
      gateway_(config_.max_in_flight),
      store_(config_.content_dir / "stories"),
      publisher_(PublishTarget{TargetKind::MainSite, config_.main_site_root, config_.main_site_base_url},
                 PublishTarget{TargetKind::ExternalCatalogue, config_.external_root,
                               config_.external_base_url},
                 clocks.wall),
      cache_(config_.cache_ttl, config_.cache_capacity, clocks.steady),
      limiter_(config_.rate_limit, config_.rate_window, clocks.steady) {}

std::shared_ptr<AuthProvider> CatalogueService::make_auth_provider(const ServiceConfig& config) {
  if (config.auth_provider == "none") return std::make_shared<NoAuthProvider>();
  return std::make_shared<DevTokenProvider>(DevTokenProvider::from_file(config.token_file));
}

AuthOutcome CatalogueService::authenticate(std::optional<std::string_view> authorization) const {
  return service::authenticate(*auth_, authorization);
}

StoredStory CatalogueService::visible_or_throw(const RequestContext& ctx, std::string_view id) const {
  auto stored = store_.find(id);
  if (!stored || !can_view(ctx, stored->meta))
    throw Error(ErrorCode::NotFound, "no story '" + std::string(id) + "'");
  return std::move(*stored);
}

void CatalogueService::require_mutable(const RequestContext& ctx, const StoredStory& stored) const {
  if (!can_mutate(ctx, stored.meta))
    throw Error(ErrorCode::Forbidden,
                "only the owner or a member may change story '" + stored.story.id + "'");
}

void CatalogueService::rate_limit(const RequestContext& ctx) {
  if (!limiter_.try_acquire(ctx.client_key))
    throw Error(ErrorCode::RateLimited, "too many queries, retry shortly");
}

std::vector<StoredStory> CatalogueService::list_stories(const RequestContext& ctx) const {
  std::vector<StoredStory> out;
  for (auto& s : store_.list()) {
    if (can_view(ctx, s.meta)) out.push_back(std::move(s));
  }
  return out;
}

StoredStory CatalogueService::create_story(const RequestContext& ctx, const json& body) {
  if (!body.is_object()) bad_request("story body must be an object");
  StoryMeta meta;
  meta.owner_tier = ctx.principal.tier;
  if (ctx.principal.authenticated()) {
    meta.owner = ctx.principal.subject;
  } else {
    if (!ctx.session) bad_request("anonymous stories need a session");
    meta.session = ctx.session;
  }
  Story story;
  if (body.contains("version")) {
    story = deserialize_story(body.dump());
  } else {
    StorySetup setup;
    setup.title = string_member(body, "title", "setup");
    setup.endpoint = string_member(body, "endpoint", "setup");
    if (body.contains("template")) setup.template_name = string_member(body, "template", "setup");
    if (body.contains("section") && !body["section"].is_null())
      setup.section = string_member(body, "section", "setup");
    story = lodstory::create_story(setup);
  }
  return store_.create(std::move(story), std::move(meta));
}

StoredStory CatalogueService::get_story(const RequestContext& ctx, std::string_view id) const {
  return visible_or_throw(ctx, id);
}

StoredStory CatalogueService::update_story(const RequestContext& ctx, std::string_view id,
                                           const json& body) {
  if (!body.is_object()) bad_request("update body must be an object");
  auto revision = revision_of(body);
  require_mutable(ctx, visible_or_throw(ctx, id));
  if (body.contains("story") == body.contains("edits"))
    bad_request("update needs exactly one of \"story\" or \"edits\"");
  if (body.contains("story")) {
    if (!body["story"].is_object()) bad_request("\"story\" must be an object");
    Story replacement = deserialize_story(body["story"].dump());
    if (replacement.id != id) bad_request("story id does not match the URL");
    return store_.modify(id, revision, [&](const StoredStory&) { return replacement; });
  }
  const json& edits = body["edits"];
  if (!edits.is_array()) bad_request("\"edits\" must be an array");
  std::vector<Edit> changes;
  for (const auto& e : edits) changes.push_back(parse_edit(e));
  return store_.modify(id, revision, [&](const StoredStory& current) {
    Story s = current.story;
    for (const auto& change : changes) s = apply_edit(s, change);
    return s;
  });
}

void CatalogueService::delete_story(const RequestContext& ctx, std::string_view id) {
  require_mutable(ctx, visible_or_throw(ctx, id));
  store_.remove(id);
}

Publication CatalogueService::publish_story(const RequestContext& ctx, std::string_view id) {
  if (!ctx.principal.authenticated())
    throw Error(ErrorCode::AuthRequired, "sign in to publish stories");
  auto stored = visible_or_throw(ctx, id);
  require_mutable(ctx, stored);
  auto diagnostics = validate_story(stored.story);
  if (has_errors(diagnostics)) {
    throw ValidationFailure("story '" + stored.story.id + "' has validation errors",
                            std::move(diagnostics));
  }
  auto payloads = evaluate(stored.story);
  auto html = lodstory::export_story(stored.story, payloads, ExportFormat::Html,
                                     {SnapshotMode::Snapshot});
  auto kind = ctx.principal.tier == Tier::Member ? TargetKind::MainSite
                                                 : TargetKind::ExternalCatalogue;
  return publisher_.publish(kind, stored.story, html.bytes);
}

bool CatalogueService::unpublish_story(const RequestContext& ctx, std::string_view id) {
  if (!ctx.principal.authenticated())
    throw Error(ErrorCode::AuthRequired, "sign in to unpublish stories");
  auto stored = store_.find(id);
  if (stored) {
    if (!can_view(ctx, stored->meta))
      throw Error(ErrorCode::NotFound, "no story '" + std::string(id) + "'");
    require_mutable(ctx, *stored);
  } else if (ctx.principal.tier != Tier::Member) {
    // orphaned publications are cleaned up by members only
    throw Error(ErrorCode::NotFound, "no story '" + std::string(id) + "'");
  }
  bool removed = false;
  if (ctx.principal.tier == Tier::Member) removed |= publisher_.unpublish(TargetKind::MainSite, id);
  removed |= publisher_.unpublish(TargetKind::ExternalCatalogue, id);
  return removed;
}

SiteIndex CatalogueService::sections() const {
  return publisher_.scan(TargetKind::MainSite);
}

ExportBundle CatalogueService::export_story(const RequestContext& ctx, std::string_view id,
                                            ExportFormat format, SnapshotPolicy policy) {
  auto stored = visible_or_throw(ctx, id);
  PayloadMap payloads;
  if (format != ExportFormat::Json && policy.mode == SnapshotMode::Snapshot)
    payloads = evaluate(stored.story);
  return lodstory::export_story(stored.story, payloads, format, policy);
}

ComponentExport CatalogueService::export_component(const RequestContext& ctx, std::string_view id,
                                                   std::string_view component_id,
                                                   std::string_view format) {
  auto stored = visible_or_throw(ctx, id);
  const Component* c = stored.story.find(component_id);
  if (!c) {
    throw Error(ErrorCode::NotFound,
                "story '" + stored.story.id + "' has no component '" + std::string(component_id) + "'");
  }
  if (format == "embed") {
    return {export_component_embed(stored.story, c->id, config_.public_base_url),
            "text/html; charset=utf-8", component_filename(stored.story, c->id, "html")};
  }
  if (format != "csv" && format != "svg") {
    throw Error(ErrorCode::UnsupportedFormat,
                "unsupported component format '" + std::string(format) + "' (csv, svg or embed)");
  }
  const auto* chart = std::get_if<block::Chart>(&c->body);
  if (format == "svg" && !chart) {
    throw Error(ErrorCode::UnsupportedFormat, "svg export needs a chart component");
  }
  auto payload = evaluate_component(*c, runner_for(stored.story.endpoint));
  if (!payload) {
    throw Error(ErrorCode::NotTabular, "component '" + c->id + "' has no results to export");
  }
  if (format == "csv") {
    return {export_component_csv(*payload), "text/csv; charset=utf-8",
            component_filename(stored.story, c->id, "csv")};
  }
  return {export_component_svg(std::get<Series>(*payload), chart->kind, stored.story.palette,
                               chart->title),
          "image/svg+xml", component_filename(stored.story, c->id, "svg")};
}

std::string CatalogueService::embed(const RequestContext& ctx, std::string_view story_id,
                                    std::string_view component_id, SnapshotPolicy policy) {
  auto stored = store_.find(story_id);
  bool published = false;
  if (stored && !can_view(ctx, stored->meta)) {
    for (auto kind : {TargetKind::MainSite, TargetKind::ExternalCatalogue}) {
      for (const auto& section : publisher_.scan(kind).sections) {
        for (const auto& e : section.stories) published |= e.id == story_id;
      }
    }
  }
  if (!stored || (!can_view(ctx, stored->meta) && !published))
    throw Error(ErrorCode::NotFound, "no story '" + std::string(story_id) + "'");
  const Component* c = stored->story.find(component_id);
  if (!c) {
    throw Error(ErrorCode::NotFound, "story '" + stored->story.id + "' has no component '" +
                                         std::string(component_id) + "'");
  }
  PayloadMap payloads;
  if (policy.mode == SnapshotMode::Snapshot) {
    // an action page also shows its chain of sources, none of them data
    if (auto p = evaluate_component(*c, runner_for(stored->story.endpoint)))
      payloads.emplace(c->id, std::move(*p));
  }
  return export_component_page(stored->story, c->id, payloads, policy);
}

nlohmann::ordered_json CatalogueService::preview(const RequestContext& ctx, const json& body) {
  if (!body.is_object()) bad_request("preview body must be an object");
  auto endpoint = string_member(body, "endpoint", "preview");
  json node = member(body, "component", "preview");
  if (node.is_object() && !node.contains("id")) node["id"] = "preview";
  Component c = component_from(node);
  if (const auto* text = std::get_if<block::Text>(&c.body)) {
    nlohmann::ordered_json out;
    out["type"] = "html";
    out["html"] = sanitize_html(text->html);
    return out;
  }
  if (!parse_http_url(endpoint))
    throw Error(ErrorCode::InvalidEndpointUrl, "endpoint must be an absolute http(s) URL");
  rate_limit(ctx);
  auto run = runner_for(endpoint);
  if (const auto* search = std::get_if<block::TextSearch>(&c.body)) {
    auto input = body.find("input");
    if (input == body.end() || !input->is_string()) bad_request("text_search preview needs a string \"input\"");
    return payload_to_json(run_text_search(*search, input->get<std::string>(), run));
  }
  if (const auto* action = std::get_if<block::Action>(&c.body)) {
    auto input = body.find("input");
    if (input == body.end() || !input->is_object()) bad_request("action preview needs an \"input\" object");
    auto value = string_member(*input, "value", "action input");
    TermMode mode = TermMode::Auto;
    if (input->contains("term")) {
      auto term = string_member(*input, "term", "action input");
      if (term == "iri") mode = TermMode::Iri;
      else if (term == "literal") mode = TermMode::Literal;
      else if (term != "auto") bad_request("term must be iri, literal or auto");
    }
    return payload_to_json(run_action(*action, value, mode, run));
  }
  auto payload = evaluate_component(c, run);
  return payload_to_json(*payload);
}

ProxyResult CatalogueService::proxy_query(const RequestContext& ctx, std::string_view endpoint,
                                          std::string_view query) {
  rate_limit(ctx);
  return cached_select(endpoint, query);
}

ProxyResult CatalogueService::cached_select(std::string_view endpoint, std::string_view query) {
  EndpointRef ref(std::string(endpoint), config_.endpoint_timeout, config_.max_rows);
  SparqlQuery q{std::string(query)};
  // cached value: truncation flag byte followed by the body
  if (auto hit = cache_.get(ref.url(), q.text())) return {hit->substr(1), true, hit->front() == '1'};
  auto rs = gateway_.execute_select(ref, q);
  ProxyResult out{write_results_json(rs), false, rs.truncated};
  cache_.put(ref.url(), q.text(), (rs.truncated ? "1" : "0") + out.body);
  return out;
}

QueryRunner CatalogueService::runner_for(std::string endpoint) {
  return [this, endpoint = std::move(endpoint)](const SparqlQuery& q) {
    return parse_results_json(cached_select(endpoint, q.text()).body);
  };
}

PayloadMap CatalogueService::evaluate(const Story& story) {
  return evaluate_story(story, runner_for(story.endpoint));
}

}  // namespace lodstory::service

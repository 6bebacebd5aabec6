#pragma once

#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lodstory/error.hpp"
#include "lodstory/evaluators.hpp"
#include "lodstory/exporter.hpp"
#include "lodstory/service/auth.hpp"
#include "lodstory/service/config.hpp"
#include "lodstory/service/publisher.hpp"
#include "lodstory/service/query_cache.hpp"
#include "lodstory/service/rate_limiter.hpp"
#include "lodstory/service/story_store.hpp"
#include "lodstory/sparql_gateway.hpp"
#include "lodstory/story_json.hpp"

namespace lodstory::service {

// Who is asking. Anonymous callers are scoped to `session`; `client_key`
// identifies the caller for rate limiting.
struct RequestContext {
  Principal principal;
  std::optional<std::string> session;
  std::string client_key;
};

// ValidationFailed carrying the lint findings that blocked the operation.
class ValidationFailure : public Error {
 public:
  ValidationFailure(const std::string& message, std::vector<Diagnostic> diagnostics)
      : Error(ErrorCode::ValidationFailed, message), diagnostics_(std::move(diagnostics)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct ProxyResult {
  std::string body;  // SPARQL JSON results
  bool cache_hit = false;
  bool truncated = false;
};

struct ComponentExport {
  std::string bytes;
  std::string media_type;
  std::string filename;
};

struct Clocks {
  WallClock wall = std::chrono::system_clock::now;
  SteadyClock steady = std::chrono::steady_clock::now;
};

// Transport-independent core of the HTTP service. Every method applies the
// authorization rules:
//   - anonymous stories are visible to and mutable by their session only;
//   - other stories are visible to any authenticated caller and mutable by
//     their owner or a member;
//   - publishing needs an authenticated caller who may mutate the story.
class CatalogueService {
 public:
  explicit CatalogueService(ServiceConfig config, std::shared_ptr<AuthProvider> auth = nullptr,
                            Clocks clocks = {});

  // Builds the provider named in the config. Errors: IoError, BadRequest.
  static std::shared_ptr<AuthProvider> make_auth_provider(const ServiceConfig& config);

  AuthOutcome authenticate(std::optional<std::string_view> authorization) const;

  std::vector<StoredStory> list_stories(const RequestContext& ctx) const;
  // Body is a full story document (has "version") or a setup form
  // {title, endpoint, section?, template?}.
  StoredStory create_story(const RequestContext& ctx, const nlohmann::json& body);
  StoredStory get_story(const RequestContext& ctx, std::string_view id) const;
  // Body: {"revision": n, "story": {...}} or {"revision": n, "edits": [...]}.
  StoredStory update_story(const RequestContext& ctx, std::string_view id,
                           const nlohmann::json& body);
  void delete_story(const RequestContext& ctx, std::string_view id);

  Publication publish_story(const RequestContext& ctx, std::string_view id);
  bool unpublish_story(const RequestContext& ctx, std::string_view id);
  SiteIndex sections() const;

  ExportBundle export_story(const RequestContext& ctx, std::string_view id, ExportFormat format,
                            SnapshotPolicy policy = {});
  // format: csv, svg or embed.
  ComponentExport export_component(const RequestContext& ctx, std::string_view id,
                                   std::string_view component_id, std::string_view format);
  // Published stories are embeddable by anyone, drafts only by callers
  // who can see them.
  std::string embed(const RequestContext& ctx, std::string_view story_id,
                    std::string_view component_id, SnapshotPolicy policy = {});

  // Body: {endpoint, component, input?} where input is the search term for
  // text_search and {value, term?} for action. Rate limited.
  nlohmann::ordered_json preview(const RequestContext& ctx, const nlohmann::json& body);
  // Rate limited. Errors: RateLimited plus gateway errors.
  ProxyResult proxy_query(const RequestContext& ctx, std::string_view endpoint,
                          std::string_view query);

  // Evaluates all data components through the cache.
  PayloadMap evaluate(const Story& story);

  const ServiceConfig& config() const { return config_; }
  StoryStore& store() { return store_; }
  Publisher& publisher() { return publisher_; }
  QueryCache& cache() { return cache_; }

 private:
  ProxyResult cached_select(std::string_view endpoint, std::string_view query);
  QueryRunner runner_for(std::string endpoint);
  StoredStory visible_or_throw(const RequestContext& ctx, std::string_view id) const;
  void require_mutable(const RequestContext& ctx, const StoredStory& stored) const;
  void rate_limit(const RequestContext& ctx);

  ServiceConfig config_;
  std::shared_ptr<AuthProvider> auth_;
  SparqlGateway gateway_;
  StoryStore store_;
  Publisher publisher_;
  QueryCache cache_;
  RateLimiter limiter_;
};

bool can_view(const RequestContext& ctx, const StoryMeta& meta);
bool can_mutate(const RequestContext& ctx, const StoryMeta& meta);

// Parses one edit object, {"op": "add"|"update"|"remove"|"move", ...}.
// Errors: BadRequest, SchemaViolation.
Edit parse_edit(const nlohmann::json& node);

}  // namespace lodstory::service

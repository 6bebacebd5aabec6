#include "lodstory/service/http_frontend.hpp"

#include <httplib.h>

#include <random>

#include "lodstory/cell_typing.hpp"
#include "lodstory/results_json.hpp"

namespace lodstory::service {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kJson = "application/json";

bool valid_session(std::string_view s) {
  if (s.size() < 8 || s.size() > 128) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

std::string new_session_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (int i = 0; i < 2; ++i) {
    auto v = rng();
    for (int k = 0; k < 16; ++k) out.push_back(kHex[(v >> (4 * k)) & 0xF]);
  }
  return out;
}

ordered_json story_response(const StoredStory& s) {
  ordered_json out;
  out["story"] = ordered_json::parse(serialize_story(s.story));
  out["revision"] = s.meta.revision;
  out["owner"] = s.meta.owner ? ordered_json(*s.meta.owner) : ordered_json(nullptr);
  out["owner_tier"] = std::string(to_string(s.meta.owner_tier));
  return out;
}

void send_json(httplib::Response& res, const ordered_json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::BadRequest, std::string("request body is not JSON: ") + e.what());
  }
}

SnapshotPolicy policy_of(const httplib::Request& req) {
  auto mode = req.get_param_value("mode");
  if (mode.empty() || mode == "snapshot") return {SnapshotMode::Snapshot};
  if (mode == "live") return {SnapshotMode::Live};
  throw Error(ErrorCode::BadRequest, "mode must be snapshot or live");
}

std::string attachment(const std::string& filename) {
  return "attachment; filename=\"" + filename + "\"";
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadRequest:
    case ErrorCode::UnsupportedFormat:
      return 400;
    case ErrorCode::Unauthorized:
    case ErrorCode::AuthRequired:
      return 401;
    case ErrorCode::Forbidden:
      return 403;
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::RevisionConflict:
      return 409;
    case ErrorCode::RateLimited:
      return 429;
    case ErrorCode::EndpointUnreachable:
    case ErrorCode::EndpointRejected:
    case ErrorCode::MalformedResults:
      return 502;
    case ErrorCode::PublishTargetUnavailable:
      return 503;
    case ErrorCode::IoError:
    case ErrorCode::MissingPayload:
      return 500;
    default:
      return 422;
  }
}

std::string error_body(const Error& error) {
  ordered_json e;
  e["code"] = std::string(to_string(error.code()));
  e["message"] = error.what();
  if (error.path()) e["path"] = *error.path();
  if (error.status()) e["upstream_status"] = *error.status();
  if (const auto* v = dynamic_cast<const ValidationFailure*>(&error)) {
    e["diagnostics"] = ordered_json::array();
    for (const auto& d : v->diagnostics()) {
      e["diagnostics"].push_back({{"severity", std::string(to_string(d.severity))},
                                  {"component", d.component_id},
                                  {"message", d.message}});
    }
  }
  return ordered_json{{"error", e}}.dump();
}

struct HttpFrontend::Impl {
  CatalogueService& service;
  httplib::Server server;

  explicit Impl(CatalogueService& s) : service(s) { routes(); }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&, RequestContext&)>;

  // Builds the request context, runs `h` and maps errors. Protected routes
  // answer 401 to a token that does not verify.
  httplib::Server::Handler wrap(Handler h, bool protect = true) {
    return [this, h = std::move(h), protect](const httplib::Request& req, httplib::Response& res) {
      RequestContext ctx;
      try {
        std::optional<std::string_view> authz;
        if (req.has_header("Authorization")) authz = req.get_header_value("Authorization");
        auto outcome = service.authenticate(authz);
        if (outcome.token_rejected && protect)
          throw Error(ErrorCode::Unauthorized, "bearer token was not accepted");
        ctx.principal = outcome.principal;
        if (!ctx.principal.authenticated()) {
          std::string key(kSessionHeader);
          if (req.has_header(key.c_str())) {
            auto s = req.get_header_value(key.c_str());
            if (!valid_session(s))
              throw Error(ErrorCode::BadRequest, "session id must be 8-128 characters of [A-Za-z0-9_-]");
            ctx.session = s;
          }
        }
        ctx.client_key = ctx.principal.subject ? "subject:" + *ctx.principal.subject
                         : ctx.session        ? "session:" + *ctx.session
                                              : "addr:" + req.remote_addr;
        h(req, res, ctx);
        if (ctx.session) res.set_header(std::string(kSessionHeader), *ctx.session);
      } catch (const Error& e) {
        res.status = http_status(e.code());
        if (e.code() == ErrorCode::RateLimited) res.set_header("Retry-After", "1");
        if (e.code() == ErrorCode::Unauthorized || e.code() == ErrorCode::AuthRequired)
          res.set_header("WWW-Authenticate", "Bearer");
        res.set_content(error_body(e), kJson);
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(error_body(Error(ErrorCode::IoError, e.what())), kJson);
      }
    };
  }

  void routes() {
    server.Get("/api/stories", wrap([this](const auto&, auto& res, auto& ctx) {
      ordered_json list = ordered_json::array();
      for (const auto& s : service.list_stories(ctx)) {
        list.push_back({{"id", s.story.id},
                        {"title", s.story.title},
                        {"section", s.story.section ? ordered_json(*s.story.section) : ordered_json(nullptr)},
                        {"revision", s.meta.revision},
                        {"owner", s.meta.owner ? ordered_json(*s.meta.owner) : ordered_json(nullptr)},
                        {"owner_tier", std::string(to_string(s.meta.owner_tier))}});
      }
      send_json(res, {{"stories", list}});
    }));

    server.Post("/api/stories", wrap([this](const auto& req, auto& res, auto& ctx) {
      auto body = parse_body(req);
      if (!ctx.principal.authenticated() && !ctx.session) ctx.session = new_session_id();
      auto stored = service.create_story(ctx, body);
      res.set_header("Location", "/api/stories/" + stored.story.id);
      send_json(res, story_response(stored), 201);
    }));

    server.Get(R"(/api/stories/([^/]+))", wrap([this](const auto& req, auto& res, auto& ctx) {
      send_json(res, story_response(service.get_story(ctx, req.matches[1].str())));
    }));

    server.Put(R"(/api/stories/([^/]+))", wrap([this](const auto& req, auto& res, auto& ctx) {
      auto stored = service.update_story(ctx, req.matches[1].str(), parse_body(req));
      send_json(res, story_response(stored));
    }));

    server.Delete(R"(/api/stories/([^/]+))", wrap([this](const auto& req, auto& res, auto& ctx) {
      service.delete_story(ctx, req.matches[1].str());
      res.status = 204;
    }));

    server.Post(R"(/api/stories/([^/]+)/publish)", wrap([this](const auto& req, auto& res, auto& ctx) {
      auto pub = service.publish_story(ctx, req.matches[1].str());
      auto target = ctx.principal.tier == Tier::Member ? TargetKind::MainSite
                                                       : TargetKind::ExternalCatalogue;
      send_json(res, {{"url", pub.url}, {"target", std::string(to_string(target))}});
    }));

    server.Delete(R"(/api/stories/([^/]+)/publish)", wrap([this](const auto& req, auto& res, auto& ctx) {
      bool removed = service.unpublish_story(ctx, req.matches[1].str());
      send_json(res, {{"removed", removed}});
    }));

    server.Get(R"(/api/stories/([^/]+)/export)", wrap([this](const auto& req, auto& res, auto& ctx) {
      auto format = req.has_param("format") ? req.get_param_value("format") : std::string("html");
      auto bundle = service.export_story(ctx, req.matches[1].str(), parse_export_format(format),
                                         policy_of(req));
      res.set_header("Content-Disposition", attachment(bundle.suggested_filename));
      res.set_content(bundle.bytes, bundle.media_type);
    }));

    server.Get(R"(/api/stories/([^/]+)/components/([^/]+)/export)",
               wrap([this](const auto& req, auto& res, auto& ctx) {
      if (!req.has_param("format"))
        throw Error(ErrorCode::BadRequest, "format is required (csv, svg or embed)");
      auto out = service.export_component(ctx, req.matches[1].str(), req.matches[2].str(),
                                          req.get_param_value("format"));
      if (req.get_param_value("format") != "embed")
        res.set_header("Content-Disposition", attachment(out.filename));
      res.set_content(out.bytes, out.media_type);
    }));

    server.Post("/api/preview", wrap([this](const auto& req, auto& res, auto& ctx) {
      send_json(res, service.preview(ctx, parse_body(req)));
    }));

    server.Post("/api/sparql", wrap([this](const auto& req, auto& res, auto& ctx) {
      json body = parse_body(req);
      if (!body.is_object() || !body.contains("endpoint") || !body["endpoint"].is_string() ||
          !body.contains("query") || !body["query"].is_string())
        throw Error(ErrorCode::BadRequest, "body needs string \"endpoint\" and \"query\"");
      auto out = service.proxy_query(ctx, body["endpoint"].get<std::string>(),
                                     body["query"].get<std::string>());
      res.set_header(std::string(kCacheHeader), out.cache_hit ? "hit" : "miss");
      if (out.truncated) res.set_header(std::string(kTruncatedHeader), "true");
      res.set_content(out.body, std::string(kResultsJsonMediaType));
    }));

    server.Get("/api/sections", wrap([this](const auto&, auto& res, auto&) {
      res.set_content(site_index_json(service.sections()), kJson);
    }, false));

    server.Get("/api/conventions", wrap([](const auto&, auto& res, auto&) {
      ordered_json out;
      out["chart"] = {{"label", "?" + std::string(conventions::kChartLabel)},
                      {"value", "?" + std::string(conventions::kChartValue)}};
      out["map"] = {{"lat", "?" + std::string(conventions::kMapLat)},
                    {"long", "?" + std::string(conventions::kMapLong)},
                    {"coordinates", "?" + std::string(conventions::kMapCoordinates)},
                    {"name", "?" + std::string(conventions::kMapName)}};
      out["text_search"] = {{"placeholder", "$SEARCH"}};
      out["action"] = {{"placeholder", "$VALUE"}};
      send_json(res, out);
    }, false));

    server.Get(R"(/embed/([^/]+)/([^/]+))", wrap([this](const auto& req, auto& res, auto& ctx) {
      auto page = service.embed(ctx, req.matches[1].str(), req.matches[2].str(), policy_of(req));
      res.set_content(page, "text/html; charset=utf-8");
    }, false));
  }
};

HttpFrontend::HttpFrontend(CatalogueService& service) : impl_(std::make_unique<Impl>(service)) {
  const auto& cfg = service.config();
  auto workers = cfg.worker_threads;
  impl_->server.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  impl_->server.set_payload_max_length(cfg.max_body_bytes);
  std::error_code ec;
  std::filesystem::create_directories(cfg.main_site_root, ec);
  std::filesystem::create_directories(cfg.external_root, ec);
  impl_->server.set_mount_point("/site", cfg.main_site_root.string());
  impl_->server.set_mount_point("/catalogue", cfg.external_root.string());
}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                        : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0)
    throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port));
  port_ = bound;
  return bound;
}

void HttpFrontend::run() { impl_->server.listen_after_bind(); }

void HttpFrontend::start() {
  thread_ = std::thread([this] { run(); });
  impl_->server.wait_until_ready();
}

void HttpFrontend::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace lodstory::service

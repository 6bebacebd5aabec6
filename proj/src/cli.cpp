#include "lodstory/cli.hpp"

#include <CLI11.hpp>
#include <csignal>
#include <filesystem>
#include <future>
#include <iostream>
#include <json.hpp>
#include <pthread.h>

#include "lodstory/detail/files.hpp"
#include "lodstory/error.hpp"
#include "lodstory/evaluators.hpp"
#include "lodstory/exporter.hpp"
#include "lodstory/results_json.hpp"
#include "lodstory/service/http_frontend.hpp"
#include "lodstory/sparql_gateway.hpp"
#include "lodstory/story_json.hpp"
#include "lodstory/url.hpp"
#include "lodstory/version.hpp"

namespace lodstory::cli {

namespace {

bool is_endpoint_failure(ErrorCode c) {
  return c == ErrorCode::EndpointUnreachable || c == ErrorCode::EndpointRejected ||
         c == ErrorCode::MalformedResults;
}

// Id of the component a "components[k]..." path points into, read from the
// raw document because it did not deserialize.
std::string component_at(const std::string& raw, const std::optional<std::string>& path) {
  if (!path || path->rfind("components[", 0) != 0) return "";
  auto close = path->find(']');
  if (close == std::string::npos) return "";
  try {
    auto k = std::stoul(path->substr(11, close - 11));
    auto doc = nlohmann::json::parse(raw);
    const auto& c = doc.at("components").at(k);
    if (c.contains("id") && c["id"].is_string()) return c["id"].get<std::string>();
  } catch (...) {
  }
  return "";
}

struct Loaded {
  std::string raw;
  Story story;
};

std::string read_story_bytes(const std::string& path) {
  return path == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                     : detail::read_file(path);
}

// Throws Error(IoError) or a schema error.
Loaded load_story_file(const std::string& path) {
  Loaded l;
  l.raw = read_story_bytes(path);
  l.story = deserialize_story(l.raw);
  return l;
}

void write_output(const std::string& path, std::string_view bytes, std::ostream& out) {
  if (path == "-") {
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
  } else {
    detail::write_file_atomic(path, bytes);
  }
}

void print_diagnostics(const std::vector<Diagnostic>& diags, bool as_json, std::ostream& out) {
  if (as_json) {
    nlohmann::ordered_json doc;
    doc["valid"] = !has_errors(diags);
    doc["diagnostics"] = nlohmann::ordered_json::array();
    for (const auto& d : diags) {
      doc["diagnostics"].push_back({{"severity", std::string(to_string(d.severity))},
                                    {"component", d.component_id},
                                    {"message", d.message}});
    }
    out << doc.dump() << "\n";
    return;
  }
  std::size_t errors = 0, warnings = 0;
  for (const auto& d : diags) {
    errors += d.severity == Severity::Error;
    warnings += d.severity == Severity::Warning;
    out << to_string(d.severity);
    if (!d.component_id.empty()) out << " [" << d.component_id << "]";
    out << ": " << d.message << "\n";
  }
  out << errors << " error(s), " << warnings << " warning(s)\n";
}

int report(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  if (e.code() == ErrorCode::IoError) return kIoFailure;
  return kValidationFailed;
}

QueryRunner gateway_runner(const SparqlGateway& gateway, const EndpointRef& endpoint) {
  return [&gateway, &endpoint](const SparqlQuery& q) { return gateway.execute_select(endpoint, q); };
}

// Serves saved results: {dir}/{component-id}.json for each data component.
QueryRunner directory_runner(const Story& story, const std::string& dir) {
  auto by_query = std::make_shared<std::map<std::string, std::string>>();
  for (const auto& c : story.components) {
    if (c.is_data()) by_query->emplace(c.query_text(), (std::filesystem::path(dir) / (c.id + ".json")).string());
  }
  return [by_query](const SparqlQuery& q) {
    auto it = by_query->find(q.text());
    if (it == by_query->end())
      throw Error(ErrorCode::IoError, "no saved results for query");
    return parse_results_json(detail::read_file(it->second));
  };
}

struct EvalOptions {
  std::string endpoint_override;
  std::string results_dir;
  std::size_t max_rows = kDefaultMaxRows;
  long timeout_ms = 30000;
};

void apply_override(Story& story, const EvalOptions& opts) {
  if (!opts.endpoint_override.empty()) {
    if (!parse_http_url(opts.endpoint_override))
      throw Error(ErrorCode::InvalidEndpointUrl, "--endpoint must be an absolute http(s) URL");
    story.endpoint = opts.endpoint_override;
  }
}

int cmd_validate(const std::string& file, bool as_json, std::ostream& out, std::ostream& err) {
  Loaded l;
  try {
    l.raw = read_story_bytes(file);
  } catch (const Error& e) {
    return report(e, err);
  }
  try {
    l.story = deserialize_story(l.raw);
  } catch (const Error& e) {
    Diagnostic d{Severity::Error, component_at(l.raw, e.path()),
                 e.path() ? *e.path() + ": " + std::string(e.what()) : std::string(e.what())};
    // the message already starts with the path for schema violations
    if (e.code() == ErrorCode::SchemaViolation) d.message = e.what();
    print_diagnostics({d}, as_json, out);
    return kValidationFailed;
  }
  auto diags = validate_story(l.story);
  print_diagnostics(diags, as_json, out);
  return has_errors(diags) ? kValidationFailed : kOk;
}

PayloadMap evaluate_for_cli(const Story& story, const EvalOptions& opts) {
  if (!opts.results_dir.empty()) return evaluate_story(story, directory_runner(story, opts.results_dir));
  SparqlGateway gateway;
  EndpointRef endpoint(story.endpoint, std::chrono::milliseconds(opts.timeout_ms), opts.max_rows);
  return evaluate_story(story, gateway_runner(gateway, endpoint));
}

int lint_gate(const Story& story, std::ostream& err) {
  auto diags = validate_story(story);
  if (!has_errors(diags)) return kOk;
  print_diagnostics(diags, false, err);
  return kValidationFailed;
}

int cmd_export(const std::string& file, const std::string& format_name, const std::string& out_path,
               bool live, const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  Loaded l = load_story_file(file);
  apply_override(l.story, opts);
  auto format = parse_export_format(format_name);
  SnapshotPolicy policy{live ? SnapshotMode::Live : SnapshotMode::Snapshot};
  PayloadMap payloads;
  if (format != ExportFormat::Json && !live) {
    if (int rc = lint_gate(l.story, err)) return rc;
    payloads = evaluate_for_cli(l.story, opts);
  }
  auto bundle = export_story(l.story, payloads, format, policy);
  write_output(out_path, bundle.bytes, out);
  return kOk;
}

int cmd_snapshot(const std::string& file, const std::string& dir, const EvalOptions& opts,
                 std::ostream& out, std::ostream& err) {
  Loaded l = load_story_file(file);
  apply_override(l.story, opts);
  if (int rc = lint_gate(l.story, err)) return rc;
  SparqlGateway gateway;
  EndpointRef endpoint(l.story.endpoint, std::chrono::milliseconds(opts.timeout_ms), opts.max_rows);
  std::vector<std::pair<std::string, std::future<ResultSet>>> pending;
  for (const auto& c : l.story.components) {
    if (!c.is_data()) continue;
    pending.emplace_back(c.id, std::async(std::launch::async, [&gateway, &endpoint, q = c.query_text()] {
      return gateway.execute_select(endpoint, SparqlQuery(q));
    }));
  }
  std::optional<Error> failure;
  std::vector<std::pair<std::string, ResultSet>> done;
  for (auto& [id, fut] : pending) {
    try {
      done.emplace_back(id, fut.get());
    } catch (const Error& e) {
      if (!failure) failure.emplace(e.code(), "component '" + id + "': " + e.what(), e.path(), e.status());
    }
  }
  if (failure) throw *failure;
  for (const auto& [id, rs] : done) {
    detail::write_file_atomic(std::filesystem::path(dir) / (id + ".json"), write_results_json(rs));
    out << id << ".json: " << rs.rows.size() << " row(s)" << (rs.truncated ? " (truncated)" : "") << "\n";
  }
  return kOk;
}

int cmd_new(const std::string& title, const std::string& endpoint, const std::string& section,
            const std::string& out_path, std::ostream& out) {
  StorySetup setup;
  setup.title = title;
  setup.endpoint = endpoint;
  if (!section.empty()) setup.section = section;
  auto story = create_story(setup);
  auto bytes = serialize_story(story);
  if (out_path == "-") bytes += "\n";
  write_output(out_path, bytes, out);
  return kOk;
}

int cmd_serve(const std::string& config_path, std::ostream& out) {
  auto config = config_path.empty() ? service::ServiceConfig{} : service::load_config(config_path);
  service::apply_env_overrides(config);
  // block termination signals before any thread starts so sigwait sees them
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  service::CatalogueService svc(config);
  service::HttpFrontend frontend(svc);
  int port = frontend.bind(config.host, config.port);
  frontend.start();
  out << "lodstory " << kVersion << " listening on http://" << config.host << ":" << port << "\n";
  out.flush();
  int sig = 0;
  sigwait(&signals, &sig);
  frontend.stop();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build, export and serve SPARQL data stories", "lodstory"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string file, format = "html", out_path, dir, title, endpoint, section, config_path;
  bool json_diags = false, live = false;
  EvalOptions opts;

  auto* validate = app.add_subcommand("validate", "Check a story document");
  validate->add_option("story", file, "Story JSON file, - for stdin")->required();
  validate->add_flag("--json-diagnostics", json_diags, "Print diagnostics as JSON");

  auto* exp = app.add_subcommand("export", "Export a story as html, pdf or json");
  exp->add_option("story", file, "Story JSON file, - for stdin")->required();
  exp->add_option("--format", format, "html, pdf or json")->check(CLI::IsMember({"html", "pdf", "json"}));
  exp->add_option("--out", out_path, "Output path, - for stdout")->required();
  exp->add_flag("--live", live, "Query the endpoint when the page is viewed");
  exp->add_option("--endpoint", opts.endpoint_override, "Use this endpoint instead of the story's");
  exp->add_option("--results", opts.results_dir, "Read results saved by snapshot instead of querying");
  exp->add_option("--max-rows", opts.max_rows, "Row cap per query")->check(CLI::PositiveNumber);
  exp->add_option("--timeout-ms", opts.timeout_ms, "Per-query timeout")->check(CLI::PositiveNumber);

  auto* snap = app.add_subcommand("snapshot", "Save the results of every data component");
  snap->add_option("story", file, "Story JSON file, - for stdin")->required();
  snap->add_option("--out", dir, "Output directory")->required();
  snap->add_option("--endpoint", opts.endpoint_override, "Use this endpoint instead of the story's");
  snap->add_option("--max-rows", opts.max_rows, "Row cap per query")->check(CLI::PositiveNumber);
  snap->add_option("--timeout-ms", opts.timeout_ms, "Per-query timeout")->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "Run the catalogue service");
  serve->add_option("--config", config_path, "Service config JSON");

  auto* scaffold = app.add_subcommand("new", "Scaffold a story from the setup form fields");
  scaffold->add_option("--title", title, "Story title")->required();
  scaffold->add_option("--endpoint", endpoint, "SPARQL endpoint URL")->required();
  scaffold->add_option("--section", section, "Section for publication");
  scaffold->add_option("--out", out_path, "Output path, - for stdout")->default_val("-");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(file, json_diags, out, err);
    if (*exp) return cmd_export(file, format, out_path, live, opts, out, err);
    if (*snap) return cmd_snapshot(file, dir, opts, out, err);
    if (*scaffold) return cmd_new(title, endpoint, section, out_path, out);
    if (*serve) return cmd_serve(config_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::IoError) return kIoFailure;
    if (e.code() == ErrorCode::SchemaViolation || e.code() == ErrorCode::SchemaVersionUnsupported)
      return kValidationFailed;
    // evaluation failures carry "components[k]" and name the component
    if (is_endpoint_failure(e.code()) || e.path().value_or("").rfind("components[", 0) == 0)
      return kEndpointFailure;
    return kValidationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  }
  return kUsage;
}

}  // namespace lodstory::cli

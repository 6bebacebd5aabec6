#include "lodstory/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lodstory/error.hpp"

namespace lodstory::service {

namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

std::size_t positive(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() <= 0)
    throw Error(ErrorCode::BadRequest, "config key \"" + key + "\" must be a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw Error(ErrorCode::BadRequest, "config key \"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::size_t parse_positive(std::string_view name, const std::string& value) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || out == 0)
    throw Error(ErrorCode::BadRequest,
                std::string(name) + " must be a positive integer, got \"" + value + "\"");
  return out;
}

}  // namespace

std::optional<std::string> process_env(std::string_view name) {
  const char* v = std::getenv(std::string(name).c_str());
  if (!v) return std::nullopt;
  return std::string(v);
}

ServiceConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::BadRequest, std::string("config is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::BadRequest, "config must be a JSON object");
  ServiceConfig c;
  for (const auto& [key, v] : doc.items()) {
    if (key == "content_dir") c.content_dir = resolve(base_dir, text(v, key));
    else if (key == "main_site_root") c.main_site_root = resolve(base_dir, text(v, key));
    else if (key == "main_site_base_url") c.main_site_base_url = text(v, key);
    else if (key == "external_root") c.external_root = resolve(base_dir, text(v, key));
    else if (key == "external_base_url") c.external_base_url = text(v, key);
    else if (key == "public_base_url") c.public_base_url = text(v, key);
    else if (key == "auth_provider") c.auth_provider = text(v, key);
    else if (key == "token_file") c.token_file = resolve(base_dir, text(v, key));
    else if (key == "rate_limit") c.rate_limit = positive(v, key);
    else if (key == "rate_window_ms") c.rate_window = std::chrono::milliseconds(positive(v, key));
    else if (key == "cache_ttl_ms") c.cache_ttl = std::chrono::milliseconds(positive(v, key));
    else if (key == "cache_capacity") c.cache_capacity = positive(v, key);
    else if (key == "max_rows") c.max_rows = positive(v, key);
    else if (key == "endpoint_timeout_ms") c.endpoint_timeout = std::chrono::milliseconds(positive(v, key));
    else if (key == "max_in_flight") c.max_in_flight = positive(v, key);
    else if (key == "host") c.host = text(v, key);
    else if (key == "port") c.port = static_cast<int>(positive(v, key));
    else if (key == "worker_threads") c.worker_threads = positive(v, key);
    else if (key == "max_body_bytes") c.max_body_bytes = positive(v, key);
    else throw Error(ErrorCode::BadRequest, "unknown config key \"" + key + "\"");
  }
  if (c.auth_provider != "dev" && c.auth_provider != "none")
    throw Error(ErrorCode::BadRequest, "auth_provider must be \"dev\" or \"none\"");
  if (c.port > 65535) throw Error(ErrorCode::BadRequest, "port out of range");
  return c;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

void apply_env_overrides(ServiceConfig& c, const EnvLookup& env) {
  if (auto v = env("LODSTORY_CONTENT_DIR")) c.content_dir = *v;
  if (auto v = env("LODSTORY_MAIN_ROOT")) c.main_site_root = *v;
  if (auto v = env("LODSTORY_MAIN_BASE_URL")) c.main_site_base_url = *v;
  if (auto v = env("LODSTORY_EXTERNAL_ROOT")) c.external_root = *v;
  if (auto v = env("LODSTORY_EXTERNAL_BASE_URL")) c.external_base_url = *v;
  if (auto v = env("LODSTORY_PUBLIC_BASE_URL")) c.public_base_url = *v;
  if (auto v = env("LODSTORY_AUTH_PROVIDER")) {
    if (*v != "dev" && *v != "none")
      throw Error(ErrorCode::BadRequest, "LODSTORY_AUTH_PROVIDER must be dev or none");
    c.auth_provider = *v;
  }
  if (auto v = env("LODSTORY_TOKEN_FILE")) c.token_file = *v;
  if (auto v = env("LODSTORY_RATE_LIMIT")) c.rate_limit = parse_positive("LODSTORY_RATE_LIMIT", *v);
  if (auto v = env("LODSTORY_CACHE_TTL_MS"))
    c.cache_ttl = std::chrono::milliseconds(parse_positive("LODSTORY_CACHE_TTL_MS", *v));
  if (auto v = env("LODSTORY_MAX_ROWS")) c.max_rows = parse_positive("LODSTORY_MAX_ROWS", *v);
  if (auto v = env("LODSTORY_HOST")) c.host = *v;
  if (auto v = env("LODSTORY_PORT")) {
    auto port = parse_positive("LODSTORY_PORT", *v);
    if (port > 65535) throw Error(ErrorCode::BadRequest, "LODSTORY_PORT out of range");
    c.port = static_cast<int>(port);
  }
}

}  // namespace lodstory::service

#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace lodstory::service {

struct ServiceConfig {
  std::filesystem::path content_dir = "content";
  std::filesystem::path main_site_root = "site/main";
  std::string main_site_base_url = "http://localhost:8080/site";
  std::filesystem::path external_root = "site/catalogue";
  std::string external_base_url = "http://localhost:8080/catalogue";
  // Base used for embed snippets.
  std::string public_base_url = "http://localhost:8080";

  std::string auth_provider = "dev";  // "dev" or "none"
  std::filesystem::path token_file = "tokens.json";

  std::size_t rate_limit = 10;  // requests per window and principal
  std::chrono::milliseconds rate_window{1000};
  std::chrono::milliseconds cache_ttl{60000};
  std::size_t cache_capacity = 1024;

  std::size_t max_rows = 10000;
  std::chrono::milliseconds endpoint_timeout{30000};
  std::size_t max_in_flight = 8;

  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t worker_threads = 8;
  std::size_t max_body_bytes = 4 * 1024 * 1024;
};

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

// Reads the process environment.
std::optional<std::string> process_env(std::string_view name);

// Relative paths in the file resolve against the file's directory. Unknown
// keys are rejected. Errors: IoError, BadRequest.
ServiceConfig load_config(const std::filesystem::path& path);
ServiceConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);

// LODSTORY_CONTENT_DIR, LODSTORY_MAIN_ROOT, LODSTORY_MAIN_BASE_URL,
// LODSTORY_EXTERNAL_ROOT, LODSTORY_EXTERNAL_BASE_URL, LODSTORY_PUBLIC_BASE_URL,
// LODSTORY_AUTH_PROVIDER, LODSTORY_TOKEN_FILE, LODSTORY_RATE_LIMIT,
// LODSTORY_CACHE_TTL_MS, LODSTORY_MAX_ROWS, LODSTORY_HOST, LODSTORY_PORT.
void apply_env_overrides(ServiceConfig& config, const EnvLookup& env = process_env);

}  // namespace lodstory::service

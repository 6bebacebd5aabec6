#pragma once

#include <memory>
#include <string>
#include <thread>

#include "lodstory/error.hpp"
#include "lodstory/service/catalogue_service.hpp"

namespace lodstory::service {

inline constexpr std::string_view kSessionHeader = "X-Lodstory-Session";
inline constexpr std::string_view kCacheHeader = "X-Lodstory-Cache";
inline constexpr std::string_view kTruncatedHeader = "X-Lodstory-Truncated";

int http_status(ErrorCode code);

// {"error": {"code", "message", "path"?, "upstream_status"?, "diagnostics"?}}
std::string error_body(const Error& error);

// HTTP binding of CatalogueService: the JSON API under /api, embeddable
// component pages under /embed, and the two published trees as static files
// under /site and /catalogue.
class HttpFrontend {
 public:
  explicit HttpFrontend(CatalogueService& service);
  ~HttpFrontend();
  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port. Errors: IoError.
  int bind(const std::string& host, int port);
  // Serves until stop(). Requires bind().
  void run();
  // run() on a background thread.
  void start();
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace lodstory::service

#pragma once

#include <chrono>
#include <cstddef>
#include <semaphore>
#include <string>

#include "lodstory/sparql.hpp"

namespace lodstory {

struct ProbeReport {
  bool reachable = false;
  std::chrono::milliseconds latency{0};
  bool supports_json = false;
  std::string detail;  // human-readable reason when something failed
};

// SPARQL 1.1 Protocol client. Safe to share between threads; at most
// `max_in_flight` requests are outstanding at any time, further callers
// block until a slot frees up.
class SparqlGateway {
 public:
  static constexpr std::ptrdiff_t kMaxInFlightCeiling = 256;

  explicit SparqlGateway(std::size_t max_in_flight = 8);
  SparqlGateway(const SparqlGateway&) = delete;
  SparqlGateway& operator=(const SparqlGateway&) = delete;

  // Errors: EndpointUnreachable, EndpointRejected, MalformedResults.
  // NotSelectQuery is raised earlier, when the SparqlQuery is built.
  ResultSet execute_select(const EndpointRef& endpoint,
                           const SparqlQuery& query) const;

  // Never throws.
  ProbeReport probe_endpoint(const EndpointRef& endpoint) const noexcept;

  std::size_t max_in_flight() const noexcept { return max_in_flight_; }

 private:
  struct RawResponse {
    int status = 0;
    std::string content_type;
    std::string body;
  };

  RawResponse send(const EndpointRef& endpoint, const std::string& query) const;

  std::size_t max_in_flight_;
  mutable std::counting_semaphore<kMaxInFlightCeiling> slots_;
};

}  // namespace lodstory

#include "lodstory/sparql_gateway.hpp"

#include <algorithm>
#include <httplib.h>

#include "lodstory/error.hpp"
#include "lodstory/query_scan.hpp"
#include "lodstory/results_json.hpp"
#include "lodstory/version.hpp"

namespace lodstory {

EndpointRef::EndpointRef(std::string url, std::chrono::milliseconds timeout,
                         std::size_t max_rows, Transport transport)
    : url_(std::move(url)),
      timeout_(timeout),
      max_rows_(max_rows),
      transport_(transport) {
  auto parsed = parse_http_url(url_);
  if (!parsed) {
    throw Error(ErrorCode::InvalidEndpointUrl,
                "endpoint must be an absolute http(s) URL: '" + url_ + "'");
  }
  if (timeout_.count() <= 0) {
    throw Error(ErrorCode::InvalidEndpointUrl, "endpoint timeout must be positive");
  }
  if (max_rows_ == 0) {
    throw Error(ErrorCode::InvalidEndpointUrl, "endpoint row cap must be positive");
  }
  parsed_ = std::move(*parsed);
}

SparqlQuery::SparqlQuery(std::string text) : text_(std::move(text)) {
  if (text_.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::NotSelectQuery, "query text is empty");
  }
  projected_vars_ = extract_select_variables(text_);
}

namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<SparqlGateway::kMaxInFlightCeiling>& s)
      : s_(s) {
    s_.acquire();
  }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<SparqlGateway::kMaxInFlightCeiling>& s_;
};

bool is_foreign_results_format(std::string_view content_type) {
  return content_type.find("sparql-results+xml") != std::string_view::npos ||
         content_type.find("text/csv") != std::string_view::npos ||
         content_type.find("tab-separated-values") != std::string_view::npos;
}

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 512;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

}  // namespace

SparqlGateway::SparqlGateway(std::size_t max_in_flight)
    : max_in_flight_(std::clamp<std::size_t>(max_in_flight, 1, kMaxInFlightCeiling)),
      slots_(static_cast<std::ptrdiff_t>(max_in_flight_)) {}

SparqlGateway::RawResponse SparqlGateway::send(const EndpointRef& endpoint,
                                               const std::string& query) const {
  const HttpUrl& url = endpoint.parsed();
  SlotGuard slot(slots_);

  httplib::Client client(url.origin());
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout());
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      endpoint.timeout() - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  client.set_follow_location(true);

  httplib::Headers headers = {
      {"Accept", std::string(kResultsJsonMediaType)},
      {"User-Agent", std::string(kUserAgent)},
  };

  bool use_get = endpoint.transport() == Transport::Get ||
                 (endpoint.transport() == Transport::Auto &&
                  query.size() <= kMaxGetQueryBytes);
  httplib::Result res;
  if (use_get) {
    std::string target = url.target;
    target += target.find('?') == std::string::npos ? '?' : '&';
    target += "query=" + url_encode_component(query);
    res = client.Get(target, headers);
  } else {
    res = client.Post(url.target, headers, "query=" + url_encode_component(query),
                      "application/x-www-form-urlencoded");
  }
  if (!res) {
    throw Error(ErrorCode::EndpointUnreachable,
                "cannot reach " + endpoint.url() + ": " +
                    httplib::to_string(res.error()));
  }
  return {res->status, res->get_header_value("Content-Type"), res->body};
}

ResultSet SparqlGateway::execute_select(const EndpointRef& endpoint,
                                        const SparqlQuery& query) const {
  auto response = send(endpoint, query.text());
  if (response.status >= 400) {
    throw Error(ErrorCode::EndpointRejected,
                "endpoint answered HTTP " + std::to_string(response.status) + ": " +
                    excerpt(response.body),
                std::nullopt, response.status);
  }
  if (is_foreign_results_format(response.content_type)) {
    throw Error(ErrorCode::MalformedResults,
                "unsupported results format '" + response.content_type +
                    "', only " + std::string(kResultsJsonMediaType) + " is read");
  }
  ResultSet rs = parse_results_json(response.body);
  if (rs.rows.size() > endpoint.max_rows()) {
    rs.rows.resize(endpoint.max_rows());
    rs.truncated = true;
  }
  return rs;
}

ProbeReport SparqlGateway::probe_endpoint(const EndpointRef& endpoint) const noexcept {
  ProbeReport report;
  auto start = std::chrono::steady_clock::now();
  try {
    auto response = send(endpoint, "SELECT * WHERE { ?s ?p ?o } LIMIT 1");
    report.reachable = true;
    report.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    if (response.status >= 400) {
      report.detail = "HTTP " + std::to_string(response.status);
      return report;
    }
    try {
      parse_results_json(response.body);
      report.supports_json = true;
    } catch (const Error& e) {
      report.detail = e.what();
    }
  } catch (const std::exception& e) {
    report.reachable = false;
    report.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    report.detail = e.what();
  } catch (...) {
    report.reachable = false;
    report.detail = "unknown failure";
  }
  return report;
}

}  // namespace lodstory

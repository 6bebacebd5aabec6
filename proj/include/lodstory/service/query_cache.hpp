#pragma once

#include <chrono>
#include <cstddef>
#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "lodstory/service/rate_limiter.hpp"

namespace lodstory::service {

// TTL cache of serialized results keyed by endpoint and query text. Least
// recently inserted entries go first when full.
class QueryCache {
 public:
  QueryCache(std::chrono::milliseconds ttl, std::size_t capacity,
             SteadyClock clock = std::chrono::steady_clock::now);

  std::optional<std::string> get(std::string_view endpoint, std::string_view query);
  void put(std::string_view endpoint, std::string_view query, std::string body);
  std::size_t size() const;

 private:
  struct Entry {
    std::string body;
    std::chrono::steady_clock::time_point stored;
    std::list<std::string>::iterator order;
  };
  static std::string key(std::string_view endpoint, std::string_view query);

  std::chrono::milliseconds ttl_;
  std::size_t capacity_;
  SteadyClock clock_;
  mutable std::mutex mutex_;
  std::list<std::string> order_;
  std::unordered_map<std::string, Entry> entries_;
};

}  // namespace lodstory::service

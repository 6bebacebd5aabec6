#include "lodstory/service/query_cache.hpp"

namespace lodstory::service {

QueryCache::QueryCache(std::chrono::milliseconds ttl, std::size_t capacity, SteadyClock clock)
    : ttl_(ttl), capacity_(capacity == 0 ? 1 : capacity), clock_(std::move(clock)) {}

std::string QueryCache::key(std::string_view endpoint, std::string_view query) {
  // the endpoint is a validated URL and cannot contain a NUL
  std::string k(endpoint);
  k.push_back('\0');
  k.append(query);
  return k;
}

std::optional<std::string> QueryCache::get(std::string_view endpoint, std::string_view query) {
  auto now = clock_();
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key(endpoint, query));
  if (it == entries_.end()) return std::nullopt;
  if (now - it->second.stored >= ttl_) {
    order_.erase(it->second.order);
    entries_.erase(it);
    return std::nullopt;
  }
  return it->second.body;
}

void QueryCache::put(std::string_view endpoint, std::string_view query, std::string body) {
  auto now = clock_();
  auto k = key(endpoint, query);
  std::lock_guard lock(mutex_);
  if (auto it = entries_.find(k); it != entries_.end()) {
    order_.erase(it->second.order);
    entries_.erase(it);
  }
  while (entries_.size() >= capacity_) {
    entries_.erase(order_.front());
    order_.pop_front();
  }
  order_.push_back(k);
  entries_.emplace(std::move(k), Entry{std::move(body), now, std::prev(order_.end())});
}

std::size_t QueryCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace lodstory::service

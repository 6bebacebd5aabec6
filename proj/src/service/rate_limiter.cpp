#include "lodstory/service/rate_limiter.hpp"

namespace lodstory::service {

RateLimiter::RateLimiter(std::size_t limit, std::chrono::milliseconds window, SteadyClock clock)
    : limit_(limit), window_(window), clock_(std::move(clock)) {}

bool RateLimiter::try_acquire(std::string_view key) {
  auto now = clock_();
  std::lock_guard lock(mutex_);
  auto expire = [&](std::deque<std::chrono::steady_clock::time_point>& q) {
    while (!q.empty() && now - q.front() >= window_) q.pop_front();
  };
  // occasional sweep so idle keys do not accumulate
  if (++calls_ % 1024 == 0) {
    for (auto it = hits_.begin(); it != hits_.end();) {
      expire(it->second);
      it = it->second.empty() ? hits_.erase(it) : std::next(it);
    }
  }
  auto it = hits_.find(key);
  if (it == hits_.end()) it = hits_.emplace(std::string(key), std::deque<std::chrono::steady_clock::time_point>{}).first;
  auto& q = it->second;
  expire(q);
  if (q.size() >= limit_) return false;
  q.push_back(now);
  return true;
}

}  // namespace lodstory::service

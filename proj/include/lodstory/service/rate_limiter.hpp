#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

namespace lodstory::service {

using SteadyClock = std::function<std::chrono::steady_clock::time_point()>;

// Sliding-window limiter: at most `limit` admissions per `window` and key.
class RateLimiter {
 public:
  RateLimiter(std::size_t limit, std::chrono::milliseconds window,
              SteadyClock clock = std::chrono::steady_clock::now);

  // Records the attempt when admitted.
  bool try_acquire(std::string_view key);

 private:
  std::size_t limit_;
  std::chrono::milliseconds window_;
  SteadyClock clock_;
  std::mutex mutex_;
  std::map<std::string, std::deque<std::chrono::steady_clock::time_point>, std::less<>> hits_;
  std::size_t calls_ = 0;
};

}  // namespace lodstory::service

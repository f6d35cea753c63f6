// SPDX-License-Identifier: Apache-2.0
#include "elorank/rate_limiter.hpp"

#include <thread>

#include "elorank/errors.hpp"

namespace elorank {

void SystemClock::sleep_for(duration d) { std::this_thread::sleep_for(d); }

SystemClock& SystemClock::instance() {
  static SystemClock clock;
  return clock;
}

ManualClock::time_point ManualClock::now() {
  std::lock_guard lock(mu_);
  return now_;
}

void ManualClock::advance(duration d) {
  std::lock_guard lock(mu_);
  now_ += d;
}

RateLimiter::RateLimiter(int requests_per_minute, Clock& clock) : limit_(requests_per_minute), clock_(clock) {
  if (requests_per_minute <= 0) throw ValidationError("requests_per_minute must be positive");
}

Clock::time_point RateLimiter::acquire() {
  constexpr auto kWindow = std::chrono::minutes(1);
  // Holding the lock while waiting serializes callers, which is the point:
  // slots are handed out strictly in order.
  std::lock_guard lock(mu_);
  for (;;) {
    const auto now = clock_.now();
    while (!window_.empty() && now - window_.front() >= kWindow) window_.pop_front();
    if (window_.size() < static_cast<std::size_t>(limit_)) {
      window_.push_back(now);
      return now;
    }
    clock_.sleep_for(window_.front() + kWindow - now);
  }
}

}  // namespace elorank

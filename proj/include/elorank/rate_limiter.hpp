// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <deque>
#include <mutex>

namespace elorank {

/// Time source used for backoff and rate limiting. Swappable so tests can run
/// against a manual clock instead of sleeping.
class Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;
  using duration = std::chrono::steady_clock::duration;

  virtual ~Clock() = default;
  virtual time_point now() = 0;
  virtual void sleep_for(duration d) = 0;
};

class SystemClock final : public Clock {
 public:
  time_point now() override { return std::chrono::steady_clock::now(); }
  void sleep_for(duration d) override;

  static SystemClock& instance();
};

/// Clock that only moves when slept on or advanced.
class ManualClock final : public Clock {
 public:
  time_point now() override;
  void sleep_for(duration d) override { advance(d); }
  void advance(duration d);

 private:
  std::mutex mu_;
  time_point now_{};
};

/// Sliding 60-second window limiter: at most `requests_per_minute` calls to
/// acquire() return within any 60-second interval.
class RateLimiter {
 public:
  RateLimiter(int requests_per_minute, Clock& clock);

  /// Blocks (via the clock) until a slot is free, then records the dispatch
  /// time and returns it.
  Clock::time_point acquire();

  int requests_per_minute() const { return limit_; }

 private:
  int limit_;
  Clock& clock_;
  std::mutex mu_;
  std::deque<Clock::time_point> window_;
};

}  // namespace elorank

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace elorank {

enum class Winner { First, Second, Draw };

std::string_view to_string(Winner w);
/// Inverse of to_string; throws ValidationError on anything else.
Winner winner_from_string(std::string_view s);

/// Score for the item shown first.
constexpr double score_for_first(Winner w) {
  switch (w) {
    case Winner::First: return 1.0;
    case Winner::Second: return 0.0;
    case Winner::Draw: return 0.5;
  }
  return 0.5;
}

struct JudgeVerdict {
  Winner winner = Winner::Draw;
  std::string raw_response;
  int attempts = 1;
  std::int64_t latency_ms = 0;
  // Fallback draw after exhausted retries, or disagreement between the two
  // presentation orders in debias mode.
  bool flagged = false;
};

/// One pairwise question. `first` is presented as "A".
struct ComparisonRequest {
  std::string_view first_id;
  std::string_view first_text;
  std::string_view second_id;
  std::string_view second_text;
};

/// Decides which of two texts shows the attribute more strongly.
///
/// Implementations must tolerate concurrent compare() calls and must not
/// carry state between calls beyond caching and rate bookkeeping.
class PairwiseJudge {
 public:
  virtual ~PairwiseJudge() = default;

  /// Throws ValidationError if either text is empty.
  virtual JudgeVerdict compare(const ComparisonRequest& request) = 0;

  /// Short identifier recorded in match logs, e.g. "oracle" or "llm:gpt-4o-mini".
  virtual std::string name() const = 0;
};

/// Shared precondition check for compare().
void validate_request(const ComparisonRequest& request);

}  // namespace elorank

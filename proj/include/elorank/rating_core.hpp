// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace elorank {

/// Constants of the Elo system.
struct EloParams {
  double beta = 400.0;             // logistic scale of the win probability
  double k_factor = 32.0;          // per-match update step
  double initial_rating = 1500.0;  // every item starts here
  int epochs = 3;                  // passes over the match log in replay
  std::uint64_t shuffle_seed = 0;  // seeds the per-epoch match order

  /// Throws ValidationError unless beta > 0, k_factor > 0, epochs >= 1.
  void validate() const;
};

struct Rating {
  std::string item_id;
  double value = 0.0;
};

/// Outcome of one comparison, scored from the point of view of `a_id`.
struct MatchOutcome {
  std::string a_id;
  std::string b_id;
  double score_a = 0.5;  // exactly 1.0, 0.5 or 0.0

  void validate() const;
};

/// Maps a rating onto (0, 1) with a logistic centered on `center`.
struct TransformParams {
  double scale_c = 400.0 / std::numbers::ln10;
  double center = 1500.0;

  void validate() const;
};

using RatingMap = std::map<std::string, double>;

/// Probability that an item rated `r_a` beats one rated `r_b`.
double expected_score(double r_a, double r_b, double beta);

/// One Elo update. Returns the new (r_a, r_b); the pair sum is preserved.
std::pair<double, double> update_pair(double r_a, double r_b, double score_a,
                                      const EloParams& params);

/// Recomputes ratings from scratch by replaying `matches`.
///
/// Every item starts at `initial_rating`. Each epoch visits the matches in a
/// permutation derived from (shuffle_seed, epoch) and applies update_pair in
/// sequence, so the result depends only on the arguments and never on the
/// order in which comparisons were produced.
RatingMap replay_matches(std::span<const std::string> item_ids,
                         std::span<const MatchOutcome> matches,
                         const EloParams& params);

double transform_to_probability(double rating, const TransformParams& tp);

/// True iff `score` is one of the three legal match scores.
constexpr bool is_valid_score(double score) {
  return score == 1.0 || score == 0.5 || score == 0.0;
}

}  // namespace elorank

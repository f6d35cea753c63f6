// SPDX-License-Identifier: Apache-2.0
#include "elorank/rating_core.hpp"

#include <numeric>
#include <unordered_map>

#include "elorank/errors.hpp"
#include "elorank/random.hpp"

namespace elorank {

void EloParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be a positive finite number");
  if (!(k_factor > 0.0) || !std::isfinite(k_factor)) {
    throw ValidationError("k_factor must be a positive finite number");
  }
  if (!std::isfinite(initial_rating)) throw ValidationError("initial_rating must be finite");
  if (epochs < 1) throw ValidationError("epochs must be at least 1");
}

void MatchOutcome::validate() const {
  if (a_id == b_id) throw ValidationError("match pairs item '" + a_id + "' with itself");
  if (!is_valid_score(score_a)) {
    throw ValidationError("match " + a_id + " vs " + b_id + " has score " + std::to_string(score_a) +
                          "; expected 1, 0.5 or 0");
  }
}

void TransformParams::validate() const {
  if (!(scale_c > 0.0) || !std::isfinite(scale_c)) throw ValidationError("scale_c must be a positive finite number");
  if (!std::isfinite(center)) throw ValidationError("center must be finite");
}

double expected_score(double r_a, double r_b, double beta) {
  if (!std::isfinite(r_a) || !std::isfinite(r_b)) throw DomainError("expected_score: ratings must be finite");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("expected_score: beta must be positive");
  return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / beta));
}

std::pair<double, double> update_pair(double r_a, double r_b, double score_a, const EloParams& params) {
  if (!is_valid_score(score_a)) throw DomainError("update_pair: score must be 1, 0.5 or 0");
  const double e_a = expected_score(r_a, r_b, params.beta);
  // The mirrored update K*((1-S)-(1-E)) for b equals -delta.
  const double delta = params.k_factor * (score_a - e_a);
  return {r_a + delta, r_b - delta};
}

RatingMap replay_matches(std::span<const std::string> item_ids, std::span<const MatchOutcome> matches,
                         const EloParams& params) {
  params.validate();
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(item_ids.size());
  for (std::size_t i = 0; i < item_ids.size(); ++i) {
    if (!index.emplace(item_ids[i], i).second) throw ValidationError("duplicate item id '" + item_ids[i] + "'");
  }

  struct Indexed {
    std::size_t a, b;
    double score_a;
  };
  std::vector<Indexed> log;
  log.reserve(matches.size());
  for (const auto& m : matches) {
    m.validate();
    const auto a = index.find(m.a_id);
    if (a == index.end()) throw ValidationError("match references unknown item id '" + m.a_id + "'");
    const auto b = index.find(m.b_id);
    if (b == index.end()) throw ValidationError("match references unknown item id '" + m.b_id + "'");
    log.push_back({a->second, b->second, m.score_a});
  }

  std::vector<double> ratings(item_ids.size(), params.initial_rating);
  std::vector<std::size_t> order(log.size());
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(params.shuffle_seed, static_cast<std::uint64_t>(epoch)));
    rng.shuffle(std::span<std::size_t>(order));
    for (const std::size_t i : order) {
      const auto& m = log[i];
      std::tie(ratings[m.a], ratings[m.b]) = update_pair(ratings[m.a], ratings[m.b], m.score_a, params);
    }
  }

  RatingMap out;
  for (std::size_t i = 0; i < item_ids.size(); ++i) out.emplace(item_ids[i], ratings[i]);
  return out;
}

double transform_to_probability(double rating, const TransformParams& tp) {
  if (!std::isfinite(rating)) throw DomainError("transform_to_probability: rating must be finite");
  if (!(tp.scale_c > 0.0)) throw DomainError("transform_to_probability: scale_c must be positive");
  return 1.0 / (1.0 + std::exp(-(rating - tp.center) / tp.scale_c));
}

}  // namespace elorank

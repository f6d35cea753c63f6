// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "elorank/judge.hpp"

namespace elorank {

struct OracleParams {
  std::map<std::string, double> latent;  // ground-truth score per item id
  double tau = 0.0;                      // Bradley-Terry temperature; 0 is noise-free
  std::uint64_t rng_seed = 0;
};

/// Synthetic judge following the Bradley-Terry model on known latent scores.
///
/// With tau > 0 the first item wins with probability
/// 1 / (1 + exp(-(s_first - s_second) / tau)); the draw for a given
/// (rng_seed, first_id, second_id) is fixed, so repeated or concurrent calls
/// agree. With tau == 0 the higher score wins and exact ties are draws.
class OracleJudge final : public PairwiseJudge {
 public:
  explicit OracleJudge(OracleParams params);

  JudgeVerdict compare(const ComparisonRequest& request) override;
  std::string name() const override { return "oracle"; }

  const OracleParams& params() const { return params_; }

 private:
  double latent_of(std::string_view id) const;

  OracleParams params_;
};

/// Probability that an item with latent `s_first` beats `s_second`.
double bradley_terry_probability(double s_first, double s_second, double tau);

}  // namespace elorank

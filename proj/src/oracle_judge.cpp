// SPDX-License-Identifier: Apache-2.0
#include "elorank/oracle_judge.hpp"

#include <cmath>

#include "elorank/errors.hpp"
#include "elorank/hashing.hpp"
#include "elorank/random.hpp"

namespace elorank {

OracleJudge::OracleJudge(OracleParams params) : params_(std::move(params)) {
  if (!(params_.tau >= 0.0) || !std::isfinite(params_.tau)) throw ValidationError("oracle tau must be >= 0");
}

double OracleJudge::latent_of(std::string_view id) const {
  const auto it = params_.latent.find(std::string(id));
  if (it == params_.latent.end()) throw ValidationError("oracle has no latent score for id '" + std::string(id) + "'");
  return it->second;
}

double bradley_terry_probability(double s_first, double s_second, double tau) {
  return 1.0 / (1.0 + std::exp(-(s_first - s_second) / tau));
}

JudgeVerdict OracleJudge::compare(const ComparisonRequest& request) {
  validate_request(request);
  const double s_first = latent_of(request.first_id);
  const double s_second = latent_of(request.second_id);

  JudgeVerdict v;
  if (params_.tau == 0.0) {
    v.winner = s_first > s_second ? Winner::First : s_first < s_second ? Winner::Second : Winner::Draw;
  } else {
    // Length-prefixed ids so ("ab","c") and ("a","bc") hash differently.
    std::string key = std::to_string(request.first_id.size()) + ':';
    key.append(request.first_id).append(std::to_string(request.second_id.size())).push_back(':');
    key.append(request.second_id);
    Rng rng(derive_seed(params_.rng_seed, hash64(key)));
    const double p = bradley_terry_probability(s_first, s_second, params_.tau);
    v.winner = rng.uniform() < p ? Winner::First : Winner::Second;
  }
  v.raw_response = v.winner == Winner::First ? "A" : v.winner == Winner::Second ? "B" : "=";
  return v;
}

}  // namespace elorank

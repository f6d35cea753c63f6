// SPDX-License-Identifier: Apache-2.0
#include "elorank/judge.hpp"

#include "elorank/errors.hpp"

namespace elorank {

std::string_view to_string(Winner w) {
  switch (w) {
    case Winner::First: return "first";
    case Winner::Second: return "second";
    case Winner::Draw: return "draw";
  }
  return "draw";
}

Winner winner_from_string(std::string_view s) {
  if (s == "first") return Winner::First;
  if (s == "second") return Winner::Second;
  if (s == "draw") return Winner::Draw;
  throw ValidationError("unknown winner '" + std::string(s) + "'");
}

void validate_request(const ComparisonRequest& request) {
  if (request.first_text.empty() || request.second_text.empty()) {
    throw ValidationError("cannot compare an empty text (" + std::string(request.first_id) + " vs " +
                          std::string(request.second_id) + ")");
  }
}

}  // namespace elorank

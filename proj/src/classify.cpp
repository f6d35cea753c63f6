// SPDX-License-Identifier: Apache-2.0
#include "elorank/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "elorank/csv.hpp"
#include "elorank/errors.hpp"

namespace elorank {
namespace {

void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(what + " must be a probability in [0, 1]");
}

double quantile_cut(const ProbabilityMap& probs, double prevalence) {
  std::vector<double> sorted;
  sorted.reserve(probs.size());
  for (const auto& [id, p] : probs) sorted.push_back(p);
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  // 1-based rank of the (1 - prevalence) order statistic. The epsilon keeps
  // 2/3 * 3 from rounding up to 3.
  const double position = std::ceil((1.0 - prevalence) * n - 1e-9);
  if (position < 1.0) return -std::numeric_limits<double>::infinity();
  return sorted[static_cast<std::size_t>(std::min(position, n)) - 1];
}

double youden_cut(const ProbabilityMap& probs, const YoudenCalibration& cal, const LabelMap* gold) {
  if (gold == nullptr || cal.calibration_ids.empty()) {
    throw ValidationError("youden threshold needs gold labels for its calibration ids");
  }
  std::vector<std::pair<double, Label>> points;
  for (const auto& id : cal.calibration_ids) {
    const auto p = probs.find(id);
    if (p == probs.end()) throw ValidationError("calibration id '" + id + "' has no probability");
    const auto g = gold->find(id);
    if (g == gold->end()) throw ValidationError("calibration id '" + id + "' has no gold label");
    points.emplace_back(p->second, g->second);
  }
  const auto positives = std::count_if(points.begin(), points.end(), [](auto& x) { return x.second == Label::Harmful; });
  const auto negatives = static_cast<std::ptrdiff_t>(points.size()) - positives;
  if (positives == 0 || negatives == 0) throw ValidationError("youden calibration set needs both classes");

  std::vector<double> candidates{-std::numeric_limits<double>::infinity()};
  for (const auto& [p, l] : points) candidates.push_back(p);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  double best_cut = candidates.front();
  double best_j = -2.0;
  for (const double cut : candidates) {
    std::ptrdiff_t tp = 0, tn = 0;
    for (const auto& [p, l] : points) {
      if (l == Label::Harmful && p > cut) ++tp;
      if (l == Label::Benign && !(p > cut)) ++tn;
    }
    const double j = static_cast<double>(tp) / static_cast<double>(positives) +
                     static_cast<double>(tn) / static_cast<double>(negatives) - 1.0;
    // Ties keep the higher cut: fewer harmful calls for the same J.
    if (j >= best_j) {
      best_j = j;
      best_cut = cut;
    }
  }
  return best_cut;
}

}  // namespace

void validate_strategy(const ThresholdStrategy& strategy) {
  if (const auto* f = std::get_if<FixedThreshold>(&strategy)) check_probability(f->value, "fixed threshold");
  if (const auto* q = std::get_if<PrevalenceQuantile>(&strategy)) check_probability(q->prevalence, "prevalence");
  if (const auto* y = std::get_if<YoudenCalibration>(&strategy); y && y->calibration_ids.empty()) {
    throw ValidationError("youden threshold needs calibration ids");
  }
}

double resolve_threshold(const ProbabilityMap& probs, const ThresholdStrategy& strategy, const LabelMap* gold) {
  validate_strategy(strategy);
  for (const auto& [id, p] : probs) check_probability(p, "probability of '" + id + "'");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FixedThreshold>) {
          return s.value;
        } else if constexpr (std::is_same_v<T, PrevalenceQuantile>) {
          return quantile_cut(probs, s.prevalence);
        } else {
          return youden_cut(probs, s, gold);
        }
      },
      strategy);
}

LabelMap assign_labels(const ProbabilityMap& probs, const ThresholdStrategy& strategy, const LabelMap* gold) {
  const double cut = resolve_threshold(probs, strategy, gold);
  LabelMap out;
  for (const auto& [id, p] : probs) out.emplace(id, p > cut ? Label::Harmful : Label::Benign);
  return out;
}

std::string describe(const ThresholdStrategy& strategy) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FixedThreshold>) {
          return "fixed:" + format_double(s.value);
        } else if constexpr (std::is_same_v<T, PrevalenceQuantile>) {
          return "prevalence_quantile:" + format_double(s.prevalence);
        } else {
          return "youden:" + std::to_string(s.calibration_ids.size()) + "_ids";
        }
      },
      strategy);
}

}  // namespace elorank

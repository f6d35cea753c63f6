// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "elorank/labels.hpp"

namespace elorank {

/// Harmful iff p > value.
struct FixedThreshold {
  double value = 0.5;
};

/// Harmful iff p is strictly above the (1 - prevalence) order-statistic
/// quantile of all probabilities.
struct PrevalenceQuantile {
  double prevalence = 0.5;
};

/// Threshold maximizing Youden's J on the labeled calibration ids, then
/// applied as a fixed threshold to every item.
struct YoudenCalibration {
  std::vector<std::string> calibration_ids;
};

using ThresholdStrategy = std::variant<FixedThreshold, PrevalenceQuantile, YoudenCalibration>;

using ProbabilityMap = std::map<std::string, double>;

/// Throws ValidationError on probabilities outside [0, 1] or bad parameters.
void validate_strategy(const ThresholdStrategy& strategy);

/// The numeric cut used by `strategy` on `probs` (labels are p > cut).
double resolve_threshold(const ProbabilityMap& probs, const ThresholdStrategy& strategy, const LabelMap* gold);

/// Labels every id in `probs`. Youden needs `gold` labels for the
/// calibration ids, with both classes present.
LabelMap assign_labels(const ProbabilityMap& probs, const ThresholdStrategy& strategy,
                       const LabelMap* gold = nullptr);

std::string describe(const ThresholdStrategy& strategy);

}  // namespace elorank

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "elorank/labels.hpp"

namespace elorank {

/// Counts with "harmful" as the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // predicted harmful iff score >= threshold
};

/// Names of metrics whose denominator was zero and which were set to 0.
struct MetricFlags {
  bool precision = false, recall = false, f1 = false, mcc = false, balanced_accuracy = false;
  bool any() const { return precision || recall || f1 || mcc || balanced_accuracy; }
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  double balanced_accuracy = 0.0;
  double roc_auc = 0.0;
  std::vector<RocPoint> roc_points;
  MetricFlags flags;
};

/// Metric columns in table order.
inline const std::vector<std::string> kMetricNames = {"accuracy", "f1", "mcc", "precision",
                                                      "recall", "balanced_accuracy", "roc_auc"};

/// Looks up a metric by its kMetricNames spelling.
double metric_value(const MetricsReport& report, const std::string& name);

ConfusionMatrix confusion(const LabelMap& predicted, const LabelMap& gold);

/// Threshold metrics. roc_auc and roc_points are left empty. Zero
/// denominators give 0 and set the matching flag.
MetricsReport metrics_from_confusion(const ConfusionMatrix& cm);

using ScoreMap = std::map<std::string, double>;

/// (concordant + tied/2) / (n_pos * n_neg) over positive x negative pairs.
double roc_auc(const ScoreMap& scores, const LabelMap& gold);

/// Points at every distinct score, plus a (0, 0) sentinel at +inf, sorted by
/// fpr then tpr. The trapezoid area equals roc_auc.
std::vector<RocPoint> roc_curve(const ScoreMap& scores, const LabelMap& gold);

/// Trapezoidal area under a curve given in roc_curve order.
double trapezoid_area(const std::vector<RocPoint>& points);

/// Confusion metrics from labels plus ROC analysis from scores.
MetricsReport evaluate_predictions(const ScoreMap& scores, const LabelMap& predicted, const LabelMap& gold);

struct KappaResult {
  double kappa = 0.0;
  bool flagged = false;  // chance agreement was exactly 1
};

KappaResult cohens_kappa(const LabelMap& rater1, const LabelMap& rater2);

/// Mid-ranks (1-based, ties averaged).
std::vector<double> mid_ranks(const std::vector<double>& values);

/// Kendall tau-b between paired samples.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

/// Spearman rank correlation (Pearson on mid-ranks).
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace elorank

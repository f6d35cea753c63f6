// SPDX-License-Identifier: Apache-2.0
#include "elorank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "elorank/errors.hpp"

namespace elorank {
namespace {

double ratio(std::uint64_t num, std::uint64_t den, bool& flag) {
  if (den == 0) {
    flag = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

void require_same_ids(const LabelMap& a, const LabelMap& b, const char* what) {
  if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
        return x.first == y.first;
      })) {
    throw ValidationError(std::string(what) + ": the two label sets cover different ids");
  }
}

struct ScoredLabel {
  double score;
  bool positive;
};

std::vector<ScoredLabel> join_scores(const ScoreMap& scores, const LabelMap& gold) {
  std::vector<ScoredLabel> out;
  out.reserve(gold.size());
  bool has_pos = false, has_neg = false;
  for (const auto& [id, label] : gold) {
    const auto it = scores.find(id);
    if (it == scores.end()) throw ValidationError("no score for id '" + id + "'");
    if (!std::isfinite(it->second)) throw ValidationError("non-finite score for id '" + id + "'");
    const bool pos = label == Label::Harmful;
    (pos ? has_pos : has_neg) = true;
    out.push_back({it->second, pos});
  }
  if (scores.size() != gold.size()) throw ValidationError("scores and gold labels cover different ids");
  if (!has_pos || !has_neg) throw ValidationError("ROC analysis needs at least one harmful and one benign item");
  return out;
}

}  // namespace

double metric_value(const MetricsReport& r, const std::string& name) {
  if (name == "accuracy") return r.accuracy;
  if (name == "f1") return r.f1;
  if (name == "mcc") return r.mcc;
  if (name == "precision") return r.precision;
  if (name == "recall") return r.recall;
  if (name == "balanced_accuracy") return r.balanced_accuracy;
  if (name == "roc_auc") return r.roc_auc;
  throw ValidationError("unknown metric '" + name + "'");
}

ConfusionMatrix confusion(const LabelMap& predicted, const LabelMap& gold) {
  require_same_ids(predicted, gold, "confusion");
  ConfusionMatrix cm;
  auto p = predicted.begin();
  for (const auto& [id, g] : gold) {
    const bool pred_pos = (p++)->second == Label::Harmful;
    const bool gold_pos = g == Label::Harmful;
    if (pred_pos && gold_pos) ++cm.tp;
    else if (pred_pos) ++cm.fp;
    else if (gold_pos) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

MetricsReport metrics_from_confusion(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw ValidationError("metrics of an empty confusion matrix");
  MetricsReport r;
  bool unused = false;
  r.accuracy = ratio(cm.tp + cm.tn, cm.total(), unused);
  r.precision = ratio(cm.tp, cm.tp + cm.fp, r.flags.precision);
  r.recall = ratio(cm.tp, cm.tp + cm.fn, r.flags.recall);
  r.f1 = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn, r.flags.f1);

  bool no_pos = false, no_neg = false;
  const double tpr = ratio(cm.tp, cm.tp + cm.fn, no_pos);
  const double tnr = ratio(cm.tn, cm.tn + cm.fp, no_neg);
  r.flags.balanced_accuracy = no_pos || no_neg;
  r.balanced_accuracy = (tpr + tnr) / 2.0;

  const long double tp = cm.tp, fp = cm.fp, fn = cm.fn, tn = cm.tn;
  const long double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0) {
    r.flags.mcc = true;
    r.mcc = 0.0;
  } else {
    r.mcc = static_cast<double>((tp * tn - fp * fn) / std::sqrt(den));
  }
  return r;
}

double roc_auc(const ScoreMap& scores, const LabelMap& gold) {
  auto items = join_scores(scores, gold);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.score < b.score; });
  // Walk tie groups from low to high: a positive beats every negative in
  // lower groups and ties with negatives in its own group.
  std::uint64_t concordant = 0, tied = 0, neg_below = 0, n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    std::uint64_t pos = 0, neg = 0;
    while (j < items.size() && items[j].score == items[i].score) {
      (items[j].positive ? pos : neg) += 1;
      ++j;
    }
    concordant += pos * neg_below;
    tied += pos * neg;
    neg_below += neg;
    n_pos += pos;
    n_neg += neg;
    i = j;
  }
  return static_cast<double>(2 * concordant + tied) / static_cast<double>(2 * n_pos * n_neg);
}

std::vector<RocPoint> roc_curve(const ScoreMap& scores, const LabelMap& gold) {
  auto items = join_scores(scores, gold);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  std::uint64_t n_pos = 0, n_neg = 0;
  for (const auto& it : items) (it.positive ? n_pos : n_neg) += 1;

  std::vector<RocPoint> points{{0.0, 0.0, std::numeric_limits<double>::infinity()}};
  std::uint64_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < items.size();) {
    const double threshold = items[i].score;
    while (i < items.size() && items[i].score == threshold) {
      (items[i].positive ? tp : fp) += 1;
      ++i;
    }
    points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                      static_cast<double>(tp) / static_cast<double>(n_pos), threshold});
  }
  return points;
}

double trapezoid_area(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

MetricsReport evaluate_predictions(const ScoreMap& scores, const LabelMap& predicted, const LabelMap& gold) {
  auto report = metrics_from_confusion(confusion(predicted, gold));
  report.roc_auc = roc_auc(scores, gold);
  report.roc_points = roc_curve(scores, gold);
  return report;
}

KappaResult cohens_kappa(const LabelMap& rater1, const LabelMap& rater2) {
  require_same_ids(rater1, rater2, "cohens_kappa");
  if (rater1.empty()) throw ValidationError("cohens_kappa needs at least one rated item");
  const auto cm = confusion(rater1, rater2);
  const double n = static_cast<double>(cm.total());
  const double p_o = static_cast<double>(cm.tp + cm.tn) / n;
  const double r1_pos = static_cast<double>(cm.tp + cm.fp) / n;
  const double r2_pos = static_cast<double>(cm.tp + cm.fn) / n;
  const double p_e = r1_pos * r2_pos + (1.0 - r1_pos) * (1.0 - r2_pos);
  if (p_e == 1.0) return {p_o == 1.0 ? 1.0 : 0.0, true};
  return {(p_o - p_e) / (1.0 - p_e), false};
}

std::vector<double> mid_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("kendall_tau needs two equal-length samples");
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++ties_x;
      } else if (dy == 0) {
        ++ties_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double den = std::sqrt(static_cast<double>(concordant + discordant + ties_x) *
                               static_cast<double>(concordant + discordant + ties_y));
  return den == 0 ? 0.0 : static_cast<double>(concordant - discordant) / den;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("spearman_rho needs two equal-length samples");
  const auto rx = mid_ranks(x);
  const auto ry = mid_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  return (sxx == 0 || syy == 0) ? 0.0 : sxy / std::sqrt(sxx * syy);
}

}  // namespace elorank

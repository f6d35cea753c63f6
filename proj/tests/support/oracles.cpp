// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <cmath>
#include <sstream>

#include "elorank/random.hpp"

namespace elorank::testing {

PairCount brute_force_auc(const ScoreMap& scores, const LabelMap& gold) {
  PairCount c;
  for (const auto& [pid, ps] : scores) {
    if (gold.at(pid) != Label::Harmful) continue;
    for (const auto& [nid, ns] : scores) {
      if (gold.at(nid) != Label::Benign) continue;
      ++c.pairs;
      if (ps > ns) ++c.concordant;
      if (ps == ns) ++c.tied;
    }
  }
  return c;
}

namespace {

// Zero-denominator convention: 0.
double safe(double num, double den) { return den == 0 ? 0.0 : num / den; }

}  // namespace

std::string check_confusion_metrics(const ConfusionMatrix& cm, double tolerance) {
  const double tp = static_cast<double>(cm.tp), fp = static_cast<double>(cm.fp);
  const double fn = static_cast<double>(cm.fn), tn = static_cast<double>(cm.tn);
  const double n = tp + fp + fn + tn;

  const double ppv = safe(tp, tp + fp), tpr = safe(tp, tp + fn);
  const double tnr = safe(tn, tn + fp), npv = safe(tn, tn + fn);
  const double fdr = safe(fp, tp + fp), fnr = safe(fn, tp + fn);
  const double fpr = safe(fp, tn + fp), for_ = safe(fn, tn + fn);

  // Harmonic mean of precision and recall.
  const double f1 = (ppv + tpr == 0) ? 0.0 : 2.0 * ppv * tpr / (ppv + tpr);
  // MCC via the geometric-mean identity, valid when every marginal is positive.
  const bool marginals = tp + fp > 0 && tp + fn > 0 && tn + fp > 0 && tn + fn > 0;
  const double mcc = marginals ? std::sqrt(ppv * tpr * tnr * npv) - std::sqrt(fdr * fnr * fpr * for_) : 0.0;

  const auto r = metrics_from_confusion(cm);
  struct Check {
    const char* name;
    double got;
    double want;
  };
  const Check checks[] = {{"accuracy", r.accuracy, 1.0 - (fp + fn) / n},
                          {"precision", r.precision, ppv},
                          {"recall", r.recall, tpr},
                          {"f1", r.f1, f1},
                          {"balanced_accuracy", r.balanced_accuracy, 1.0 - (fnr + fpr) / 2.0 -
                                                                         (tp + fn == 0 ? 0.5 : 0.0) -
                                                                         (tn + fp == 0 ? 0.5 : 0.0)},
                          {"mcc", r.mcc, mcc}};
  std::ostringstream msg;
  for (const auto& c : checks) {
    if (!(std::abs(c.got - c.want) <= tolerance)) {
      msg << c.name << " for tp=" << cm.tp << " fp=" << cm.fp << " fn=" << cm.fn << " tn=" << cm.tn << ": got "
          << c.got << " want " << c.want;
      return msg.str();
    }
  }
  if (r.flags.precision != (tp + fp == 0) || r.flags.recall != (tp + fn == 0) || r.flags.mcc != !marginals) {
    msg << "flags for tp=" << cm.tp << " fp=" << cm.fp << " fn=" << cm.fn << " tn=" << cm.tn;
    return msg.str();
  }
  return {};
}

int exhaustive_confusion_check(int max_entry, double tolerance, std::string& first) {
  int mismatches = 0;
  for (int tp = 0; tp <= max_entry; ++tp) {
    for (int fp = 0; fp <= max_entry; ++fp) {
      for (int fn = 0; fn <= max_entry; ++fn) {
        for (int tn = 0; tn <= max_entry; ++tn) {
          if (tp + fp + fn + tn == 0) continue;
          const ConfusionMatrix cm{static_cast<std::uint64_t>(tp), static_cast<std::uint64_t>(fp),
                                   static_cast<std::uint64_t>(fn), static_cast<std::uint64_t>(tn)};
          auto msg = check_confusion_metrics(cm, tolerance);
          if (!msg.empty() && mismatches++ == 0) first = std::move(msg);
        }
      }
    }
  }
  return mismatches;
}

ScoredInstance random_instance(std::uint64_t seed, int max_items) {
  Rng rng(seed);
  ScoredInstance inst;
  const auto n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_items - 1)));
  // A coarse score grid forces ties.
  const auto levels = 1 + rng.below(20);
  for (int i = 0; i < n; ++i) {
    const auto id = "i" + std::to_string(i);
    inst.scores[id] = static_cast<double>(rng.below(levels)) / static_cast<double>(levels);
    inst.gold[id] = i == 0 ? Label::Harmful : i == 1 ? Label::Benign
                                                     : (rng.below(2) ? Label::Harmful : Label::Benign);
  }
  return inst;
}

}  // namespace elorank::testing

// SPDX-License-Identifier: Apache-2.0
#include "elorank/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>

#include "elorank/csv.hpp"
#include "elorank/errors.hpp"
#include "elorank/llm_judge.hpp"
#include "elorank/oracle_judge.hpp"
#include "elorank/random.hpp"

namespace elorank {
namespace {

constexpr std::uint64_t kScheduleStream = 1;
constexpr std::uint64_t kReplayStream = 2;
constexpr std::uint64_t kJudgeStream = 3;

Dataset synthetic(std::vector<std::pair<double, Label>> items, std::uint64_t seed, const std::string& name) {
  Rng rng(seed);
  rng.shuffle(std::span(items));
  const int width = static_cast<int>(std::to_string(items.size()).size());
  std::vector<TextEntry> entries;
  entries.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string num = std::to_string(i);
    TextEntry e;
    e.id = "s" + std::string(static_cast<std::size_t>(width) - num.size(), '0') + num;
    e.text = "synthetic item " + e.id;
    e.label = items[i].second;
    e.meta[kLatentKey] = format_double(items[i].first);
    entries.push_back(std::move(e));
  }
  return Dataset(name, std::move(entries));
}

double evenly_spaced(std::size_t i, std::size_t count) {
  return count < 2 ? 0.5 : static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

EloRun run_elo(const Dataset& dataset, PairwiseJudge& judge, const EloPipelineConfig& config, std::uint64_t seed,
               MatchLog* log) {
  EloRun run;
  const auto ids = dataset.ids();
  const int m = std::min(config.m, static_cast<int>(ids.size()) - 1);
  run.schedule = build_schedule(ids, m, derive_seed(seed, kScheduleStream));

  std::map<std::string, std::string> texts;
  for (const auto& e : dataset.entries()) texts.emplace(e.id, e.text);
  EloParams elo = config.elo;
  elo.shuffle_seed = derive_seed(seed, kReplayStream);
  TournamentOptions options;
  options.concurrency_limit = config.concurrency_limit;
  options.log = log;
  run.tournament = run_tournament(run.schedule, judge, texts, elo, options);

  for (const auto& [id, rating] : run.tournament.ratings) {
    run.probabilities[id] = transform_to_probability(rating, config.transform);
  }
  if (const auto* youden = std::get_if<YoudenCalibration>(&config.strategy)) {
    YoudenCalibration local;
    for (const auto& id : youden->calibration_ids) {
      if (dataset.contains(id)) local.calibration_ids.push_back(id);
    }
    const auto gold = dataset.gold();
    run.labels = assign_labels(run.probabilities, local, &gold);
  } else {
    run.labels = assign_labels(run.probabilities, config.strategy);
  }
  return run;
}

Pipeline make_elo_pipeline(JudgeFactory judges, EloPipelineConfig config) {
  return [judges = std::move(judges), config = std::move(config)](const Dataset& subset, std::uint64_t seed) {
    auto judge = judges(derive_seed(seed, kJudgeStream));
    auto run = run_elo(subset, *judge, config, seed);
    return PipelineOutput{std::move(run.probabilities), std::move(run.labels)};
  };
}

Pipeline make_zero_shot_pipeline(ZeroShotClassifier& classifier) {
  auto mu = std::make_shared<std::mutex>();
  return [&classifier, mu](const Dataset& subset, std::uint64_t) {
    PipelineOutput out;
    std::lock_guard lock(*mu);
    for (const auto& e : subset.entries()) {
      const auto result = classifier.classify(e.text);
      out.labels[e.id] = result.label;
      out.scores[e.id] = result.label == Label::Harmful ? 1.0 : 0.0;
    }
    return out;
  };
}

Dataset linear_corpus(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("synthetic corpus needs at least 2 items");
  std::vector<std::pair<double, Label>> items;
  for (std::size_t i = 0; i < n; ++i) {
    items.emplace_back(evenly_spaced(i, n), 2 * i >= n ? Label::Harmful : Label::Benign);
  }
  return synthetic(std::move(items), seed, "synthetic-linear");
}

Dataset two_class_corpus(const TwoClassConfig& c) {
  if (c.n < 2) throw ValidationError("synthetic corpus needs at least 2 items");
  if (!(c.harmful_fraction > 0.0 && c.harmful_fraction < 1.0)) {
    throw ValidationError("harmful_fraction must be in (0, 1)");
  }
  if (!(c.spread >= 0.0) || !std::isfinite(c.separation)) throw ValidationError("invalid separation or spread");
  auto n_h = static_cast<std::size_t>(std::llround(static_cast<double>(c.n) * c.harmful_fraction));
  n_h = std::clamp<std::size_t>(n_h, 1, c.n - 1);
  const std::size_t n_b = c.n - n_h;
  std::vector<std::pair<double, Label>> items;
  for (std::size_t i = 0; i < n_b; ++i) items.emplace_back(c.spread * (evenly_spaced(i, n_b) - 0.5), Label::Benign);
  for (std::size_t i = 0; i < n_h; ++i) {
    items.emplace_back(c.separation + c.spread * (evenly_spaced(i, n_h) - 0.5), Label::Harmful);
  }
  return synthetic(std::move(items), c.seed, "synthetic-two-class");
}

std::map<std::string, double> latent_scores(const Dataset& dataset, const std::string& key) {
  std::map<std::string, double> out;
  for (const auto& e : dataset.entries()) {
    const auto it = e.meta.find(key);
    if (it == e.meta.end()) throw ValidationError("item '" + e.id + "' has no '" + key + "' meta value");
    double v = 0.0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw ValidationError("item '" + e.id + "' has a non-numeric '" + key + "' value '" + s + "'");
    }
    out[e.id] = v;
  }
  return out;
}

double oracle_cross_class_error(const Dataset& dataset, double tau) {
  std::vector<double> harmful, benign;
  const auto latent = latent_scores(dataset);
  for (const auto& e : dataset.entries()) {
    if (!e.label) throw ValidationError("oracle error rate needs labeled items");
    (*e.label == Label::Harmful ? harmful : benign).push_back(latent.at(e.id));
  }
  if (harmful.empty() || benign.empty()) throw ValidationError("oracle error rate needs both classes");
  double sum = 0.0;
  for (double h : harmful) {
    for (double b : benign) {
      if (tau == 0.0) sum += h > b ? 0.0 : h < b ? 1.0 : 0.5;
      else sum += 1.0 - bradley_terry_probability(h, b, tau);
    }
  }
  return sum / static_cast<double>(harmful.size() * benign.size());
}

double calibrate_tau(const Dataset& dataset, double target) {
  if (!(target > 0.0 && target < 0.5)) throw ValidationError("target error rate must be in (0, 0.5)");
  double lo = 0.0, hi = 1.0;
  while (oracle_cross_class_error(dataset, hi) < target) {
    hi *= 2.0;
    if (hi > 1e12) throw ValidationError("no tau reaches the target error rate");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = (lo + hi) / 2.0;
    (oracle_cross_class_error(dataset, mid) < target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace elorank

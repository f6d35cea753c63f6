// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "elorank/bootstrap.hpp"
#include "elorank/classify.hpp"
#include "elorank/corpus.hpp"
#include "elorank/judge.hpp"
#include "elorank/rating_core.hpp"
#include "elorank/tournament.hpp"

namespace elorank {

class MatchLog;
class ZeroShotClassifier;

struct EloPipelineConfig {
  int m = 10;  // lowered to N-1 on smaller subsets
  EloParams elo;
  TransformParams transform;
  ThresholdStrategy strategy = FixedThreshold{};
  int concurrency_limit = 1;
};

struct EloRun {
  Schedule schedule;
  TournamentResult tournament;
  ProbabilityMap probabilities;
  LabelMap labels;
};

/// Schedule, tournament, transform and threshold over `dataset`. The
/// schedule and replay order are derived from `seed`; Youden calibration
/// uses the calibration ids present in `dataset`.
EloRun run_elo(const Dataset& dataset, PairwiseJudge& judge, const EloPipelineConfig& config, std::uint64_t seed,
               MatchLog* log = nullptr);

/// Builds a fresh judge for one repetition.
using JudgeFactory = std::function<std::unique_ptr<PairwiseJudge>(std::uint64_t seed)>;

Pipeline make_elo_pipeline(JudgeFactory judges, EloPipelineConfig config);

/// Scores are 1 for a harmful answer and 0 otherwise. `classifier` must
/// outlive the pipeline and is called under a lock.
Pipeline make_zero_shot_pipeline(ZeroShotClassifier& classifier);

inline constexpr const char* kLatentKey = "latent";

/// Items with latent scores linearly spaced on [0, 1]; the upper half is
/// labeled harmful. Ids are shuffled by `seed`.
Dataset linear_corpus(std::size_t n, std::uint64_t seed);

struct TwoClassConfig {
  std::size_t n = 200;
  double harmful_fraction = 0.5;
  double separation = 2.0;  // distance between the class centers
  double spread = 0.5;      // width of each class's evenly spaced latent range
  std::uint64_t seed = 0;
};

/// Benign items centered on latent 0, harmful items on `separation`.
Dataset two_class_corpus(const TwoClassConfig& config);

/// Latent scores read from entry meta.
std::map<std::string, double> latent_scores(const Dataset& dataset, const std::string& key = kLatentKey);

/// Expected fraction of harmful x benign pairs the oracle gets wrong.
double oracle_cross_class_error(const Dataset& dataset, double tau);

/// Smallest tau whose cross-class error rate reaches `target` (bisection).
double calibrate_tau(const Dataset& dataset, double target);

}  // namespace elorank

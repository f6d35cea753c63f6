// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "elorank/corpus.hpp"
#include "elorank/metrics.hpp"

namespace elorank {

struct BootstrapConfig {
  std::size_t sample_size = 200;
  std::size_t repetitions = 100;
  std::uint64_t seed = 0;
  bool with_replacement = false;
  int threads = 1;

  void validate(std::size_t corpus_size) const;
};

/// Scores in [0, 1] and predicted labels for every id of the subset.
struct PipelineOutput {
  ScoreMap scores;
  LabelMap labels;
};

/// Maps a labeled subset to predictions. `seed` is fixed per repetition.
/// Called concurrently when threads > 1.
using Pipeline = std::function<PipelineOutput(const Dataset& subset, std::uint64_t seed)>;

struct NamedPipeline {
  std::string name;
  Pipeline run;
};

struct RepetitionResult {
  std::size_t index = 0;
  bool ok = false;
  std::string error;  // set when the pipeline threw
  MetricsReport report;
  ScoreMap scores;  // pipeline scores, kept for pooled ROC curves
  LabelMap gold;
};

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 with fewer than two values
};

struct BootstrapResult {
  std::vector<RepetitionResult> repetitions;
  std::map<std::string, MetricSummary> summary;  // keyed by kMetricNames
  std::size_t failed = 0;
  std::size_t redrawn = 0;  // single-class draws replaced by a stratified draw

  std::size_t completed() const { return repetitions.size() - failed; }
  /// Per-repetition values of one metric over completed repetitions.
  std::vector<double> values(const std::string& metric) const;
};

/// The subsample used for repetition `r`. With replacement, repeated
/// entries get ids suffixed "#2", "#3", ... Sets `redrawn` when the plain
/// draw held only one class.
Dataset bootstrap_subsample(const Dataset& corpus, const BootstrapConfig& config, std::size_t r, bool& redrawn);

/// Seed handed to the pipelines in repetition `r`.
std::uint64_t repetition_seed(const BootstrapConfig& config, std::size_t r);

/// Runs every pipeline on the same subsamples (paired design). Results are
/// identical for any thread count.
std::map<std::string, BootstrapResult> bootstrap_evaluate(const Dataset& corpus,
                                                          const std::vector<NamedPipeline>& pipelines,
                                                          const BootstrapConfig& config);

BootstrapResult bootstrap_evaluate(const Dataset& corpus, const Pipeline& pipeline, const BootstrapConfig& config);

/// Mean and sample SD over completed repetitions.
std::map<std::string, MetricSummary> summarize(const std::vector<RepetitionResult>& repetitions);

}  // namespace elorank

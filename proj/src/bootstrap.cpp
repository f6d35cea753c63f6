// SPDX-License-Identifier: Apache-2.0
#include "elorank/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "elorank/errors.hpp"
#include "elorank/random.hpp"

namespace elorank {
namespace {

constexpr std::uint64_t kPipelineStream = 0x7069706532;

bool single_class(const Dataset& d) {
  bool pos = false, neg = false;
  for (const auto& e : d.entries()) (*e.label == Label::Harmful ? pos : neg) = true;
  return !(pos && neg);
}

// Draws `n` of `pool` with replacement, as entry indices.
void draw_with_replacement(const std::vector<std::size_t>& pool, std::size_t n, Rng& rng,
                           std::vector<std::size_t>& out) {
  for (std::size_t i = 0; i < n; ++i) out.push_back(pool[rng.below(pool.size())]);
}

Dataset materialize(const Dataset& corpus, std::vector<std::size_t> picks, const std::string& name) {
  std::sort(picks.begin(), picks.end());
  std::vector<TextEntry> entries;
  entries.reserve(picks.size());
  for (std::size_t i = 0; i < picks.size(); ++i) {
    TextEntry e = corpus.entries()[picks[i]];
    std::size_t copy = 1;
    for (std::size_t j = i; j > 0 && picks[j - 1] == picks[i]; --j) ++copy;
    if (copy > 1) e.id += "#" + std::to_string(copy);
    entries.push_back(std::move(e));
  }
  return Dataset(name, std::move(entries));
}

Dataset resample_with_replacement(const Dataset& corpus, std::size_t n, std::uint64_t seed, bool stratified) {
  std::vector<std::size_t> all(corpus.size()), harmful, benign;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    all[i] = i;
    (*corpus.entries()[i].label == Label::Harmful ? harmful : benign).push_back(i);
  }
  std::vector<std::size_t> picks;
  if (!stratified) {
    Rng rng(seed);
    draw_with_replacement(all, n, rng, picks);
  } else {
    auto n_h = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * static_cast<double>(harmful.size()) / static_cast<double>(corpus.size())));
    n_h = std::clamp<std::size_t>(n_h, 1, n - 1);
    Rng rng_h(derive_seed(seed, 1));
    Rng rng_b(derive_seed(seed, 2));
    draw_with_replacement(harmful, n_h, rng_h, picks);
    draw_with_replacement(benign, n - n_h, rng_b, picks);
  }
  return materialize(corpus, std::move(picks), corpus.name());
}

RepetitionResult run_one(const Pipeline& pipeline, const Dataset& subset, std::uint64_t seed, std::size_t r) {
  RepetitionResult result;
  result.index = r;
  try {
    auto out = pipeline(subset, seed);
    result.gold = subset.gold();
    result.report = evaluate_predictions(out.scores, out.labels, result.gold);
    result.scores = std::move(out.scores);
    result.ok = true;
  } catch (const ConfigurationError&) {
    throw;
  } catch (const EnvironmentError&) {
    throw;
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

}  // namespace

void BootstrapConfig::validate(std::size_t corpus_size) const {
  if (sample_size < 2) throw ValidationError("bootstrap sample_size must be at least 2");
  if (repetitions < 1) throw ValidationError("bootstrap repetitions must be at least 1");
  if (threads < 1) throw ValidationError("bootstrap threads must be at least 1");
  if (!with_replacement && sample_size > corpus_size) {
    throw ValidationError("bootstrap sample_size " + std::to_string(sample_size) + " exceeds corpus size " +
                          std::to_string(corpus_size) + " (sampling without replacement)");
  }
}

std::vector<double> BootstrapResult::values(const std::string& metric) const {
  std::vector<double> out;
  for (const auto& r : repetitions) {
    if (r.ok) out.push_back(metric_value(r.report, metric));
  }
  return out;
}

Dataset bootstrap_subsample(const Dataset& corpus, const BootstrapConfig& config, std::size_t r, bool& redrawn) {
  const std::uint64_t seed = derive_seed(config.seed, r);
  redrawn = false;
  Dataset subset = config.with_replacement ? resample_with_replacement(corpus, config.sample_size, seed, false)
                                           : sample(corpus, config.sample_size, seed, false);
  if (!single_class(subset)) return subset;
  redrawn = true;
  return config.with_replacement ? resample_with_replacement(corpus, config.sample_size, seed, true)
                                 : sample(corpus, config.sample_size, seed, true);
}

std::uint64_t repetition_seed(const BootstrapConfig& config, std::size_t r) {
  return derive_seed(derive_seed(config.seed, r), kPipelineStream);
}

std::map<std::string, MetricSummary> summarize(const std::vector<RepetitionResult>& repetitions) {
  std::map<std::string, MetricSummary> out;
  for (const auto& name : kMetricNames) {
    std::vector<double> v;
    for (const auto& r : repetitions) {
      if (r.ok) v.push_back(metric_value(r.report, name));
    }
    MetricSummary s;
    if (v.empty()) {
      s.mean = s.sd = std::numeric_limits<double>::quiet_NaN();
    } else {
      for (double x : v) s.mean += x;
      s.mean /= static_cast<double>(v.size());
      if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
      }
    }
    out[name] = s;
  }
  return out;
}

std::map<std::string, BootstrapResult> bootstrap_evaluate(const Dataset& corpus,
                                                          const std::vector<NamedPipeline>& pipelines,
                                                          const BootstrapConfig& config) {
  if (pipelines.empty()) throw ValidationError("bootstrap_evaluate needs at least one pipeline");
  if (!corpus.fully_labeled()) throw ValidationError("bootstrap_evaluate needs a fully labeled corpus");
  if (single_class(corpus)) throw ValidationError("bootstrap_evaluate needs both harmful and benign items");
  config.validate(corpus.size());

  const std::size_t reps = config.repetitions;
  std::vector<std::vector<RepetitionResult>> results(pipelines.size(), std::vector<RepetitionResult>(reps));
  std::vector<char> redrawn(reps, 0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;
  auto worker = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        bool was_redrawn = false;
        const Dataset subset = bootstrap_subsample(corpus, config, r, was_redrawn);
        redrawn[r] = was_redrawn;
        const std::uint64_t seed = repetition_seed(config, r);
        for (std::size_t p = 0; p < pipelines.size(); ++p) results[p][r] = run_one(pipelines[p].run, subset, seed, r);
      } catch (...) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        next = reps;
      }
    }
  };
  const auto n_threads = static_cast<std::size_t>(std::min<std::size_t>(config.threads, reps));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  const auto redraw_count = static_cast<std::size_t>(std::count(redrawn.begin(), redrawn.end(), 1));
  std::map<std::string, BootstrapResult> out;
  for (std::size_t p = 0; p < pipelines.size(); ++p) {
    BootstrapResult br;
    br.repetitions = std::move(results[p]);
    br.failed = static_cast<std::size_t>(
        std::count_if(br.repetitions.begin(), br.repetitions.end(), [](const auto& r) { return !r.ok; }));
    br.redrawn = redraw_count;
    br.summary = summarize(br.repetitions);
    if (!out.emplace(pipelines[p].name, std::move(br)).second) {
      throw ValidationError("duplicate pipeline name '" + pipelines[p].name + "'");
    }
  }
  return out;
}

BootstrapResult bootstrap_evaluate(const Dataset& corpus, const Pipeline& pipeline, const BootstrapConfig& config) {
  auto all = bootstrap_evaluate(corpus, {NamedPipeline{"pipeline", pipeline}}, config);
  return std::move(all.begin()->second);
}

}  // namespace elorank

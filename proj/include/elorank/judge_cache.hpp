// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "elorank/judge.hpp"

namespace elorank {

/// What besides the two texts changes a verdict.
struct CacheKeyContext {
  std::string template_version;
  std::string model_name;
};

/// Content-addressed key: canonical unordered pair of text hashes, the
/// presentation order, the template version, and the model name.
std::string cache_key(std::string_view first_text, std::string_view second_text, const CacheKeyContext& ctx);

/// Append-only JSONL verdict store with an in-memory index.
///
/// Unreadable lines are skipped with a warning. If the file cannot be opened
/// for appending the cache keeps working in memory only and warns once.
class JudgeCache {
 public:
  /// Empty path: memory-only.
  explicit JudgeCache(std::filesystem::path path = {});

  std::optional<JudgeVerdict> lookup(const std::string& key) const;
  void store(const std::string& key, const JudgeVerdict& verdict, const CacheKeyContext& ctx);

  std::size_t size() const;
  bool persistent() const { return persistent_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, JudgeVerdict> index_;
  std::ofstream out_;
  bool persistent_ = false;
};

/// Judge decorator consulting a JudgeCache before the wrapped judge.
/// Flagged verdicts are not stored, so transient failures get retried on the
/// next run.
class CachedJudge final : public PairwiseJudge {
 public:
  CachedJudge(PairwiseJudge& inner, JudgeCache& cache, CacheKeyContext ctx);

  JudgeVerdict compare(const ComparisonRequest& request) override;
  std::string name() const override { return "cached-" + inner_.name(); }

 private:
  PairwiseJudge& inner_;
  JudgeCache& cache_;
  CacheKeyContext ctx_;
};

}  // namespace elorank

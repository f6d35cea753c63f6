// SPDX-License-Identifier: Apache-2.0
#include "elorank/judge_cache.hpp"

#include <nlohmann/json.hpp>

#include "elorank/hashing.hpp"
#include "elorank/log.hpp"

namespace elorank {

using json = nlohmann::json;

std::string cache_key(std::string_view first_text, std::string_view second_text, const CacheKeyContext& ctx) {
  const auto h1 = sha256_hex(first_text);
  const auto h2 = sha256_hex(second_text);
  const bool forward = h1 <= h2;
  Sha256 h;
  h.update("elorank-cache-v1\n");
  h.update(forward ? h1 : h2).update(",").update(forward ? h2 : h1).update("\n");
  h.update(forward ? "order=fwd\n" : "order=rev\n");
  h.update(ctx.template_version).update("\n").update(ctx.model_name);
  return h.hex_digest();
}

JudgeCache::JudgeCache(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty()) return;
  if (std::ifstream in(path_); in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        const auto rec = json::parse(line);
        JudgeVerdict v;
        v.winner = winner_from_string(rec.at("winner").get<std::string>());
        v.raw_response = rec.value("raw_response", "");
        v.attempts = rec.value("attempts", 1);
        v.latency_ms = rec.value("latency_ms", std::int64_t{0});
        v.flagged = rec.value("flagged", false);
        index_.insert_or_assign(rec.at("key").get<std::string>(), std::move(v));
      } catch (const std::exception& e) {
        log_warning("cache " + path_.string() + ":" + std::to_string(line_no) + " skipped (" + e.what() + ")");
      }
    }
  }
  out_.open(path_, std::ios::app);
  persistent_ = static_cast<bool>(out_);
  if (!persistent_) log_warning("cannot open cache file " + path_.string() + " for writing; caching in memory only");
}

std::optional<JudgeVerdict> JudgeCache::lookup(const std::string& key) const {
  std::lock_guard lock(mu_);
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void JudgeCache::store(const std::string& key, const JudgeVerdict& verdict, const CacheKeyContext& ctx) {
  std::lock_guard lock(mu_);
  index_.insert_or_assign(key, verdict);
  if (!persistent_) return;
  const json rec = {{"key", key},
                    {"winner", to_string(verdict.winner)},
                    {"raw_response", verdict.raw_response},
                    {"attempts", verdict.attempts},
                    {"latency_ms", verdict.latency_ms},
                    {"flagged", verdict.flagged},
                    {"template_version", ctx.template_version},
                    {"model", ctx.model_name}};
  out_ << rec.dump() << '\n';
  out_.flush();
  if (!out_) {
    persistent_ = false;
    log_warning("write to cache file " + path_.string() + " failed; caching in memory only");
  }
}

std::size_t JudgeCache::size() const {
  std::lock_guard lock(mu_);
  return index_.size();
}

CachedJudge::CachedJudge(PairwiseJudge& inner, JudgeCache& cache, CacheKeyContext ctx)
    : inner_(inner), cache_(cache), ctx_(std::move(ctx)) {}

JudgeVerdict CachedJudge::compare(const ComparisonRequest& request) {
  validate_request(request);
  const auto key = cache_key(request.first_text, request.second_text, ctx_);
  if (auto hit = cache_.lookup(key)) return *hit;
  auto verdict = inner_.compare(request);
  if (!verdict.flagged) cache_.store(key, verdict, ctx_);
  return verdict;
}

}  // namespace elorank

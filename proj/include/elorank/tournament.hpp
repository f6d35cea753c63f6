// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "elorank/judge.hpp"
#include "elorank/rating_core.hpp"

namespace elorank {

class MatchLog;

/// One scheduled comparison; `first_id` is shown as "A".
struct Pairing {
  std::string first_id;
  std::string second_id;

  bool operator==(const Pairing&) const = default;
};

struct Schedule {
  std::vector<Pairing> pairings;
  int comparisons_per_item = 0;  // m
  std::uint64_t seed = 0;
  std::size_t item_count = 0;  // N

  bool operator==(const Schedule&) const = default;
};

/// Near-m-regular random comparison graph over `item_ids`.
///
/// Built from m rounds of seeded random matchings, then repaired so every
/// item has degree exactly m; when N*m is odd a single item gets m+1.
/// m == N-1 yields the complete round robin. Presentation order is a fair
/// coin per pairing. Deterministic in (item_ids order, m, seed).
Schedule build_schedule(const std::vector<std::string>& item_ids, int m, std::uint64_t seed);

/// Number of pairings each id takes part in.
std::map<std::string, int> schedule_degrees(const Schedule& schedule);

/// Throws ValidationError if the schedule has a self-pair or repeats an
/// unordered pair.
void validate_schedule(const Schedule& schedule);

/// Schedule as JSONL: one {"pairing","first_id","second_id"} per line.
std::string serialize_schedule(const Schedule& schedule);
/// Reads serialize_schedule output. m, seed and N come from the manifest,
/// so they are left zero here.
Schedule parse_schedule(std::istream& in, std::string_view source_name);

struct TournamentResult {
  std::vector<MatchOutcome> matches;  // indexed like schedule.pairings
  RatingMap ratings;
  std::vector<JudgeVerdict> audit;    // indexed like schedule.pairings
  std::size_t reused = 0;             // outcomes taken from an existing match log
};

struct TournamentOptions {
  int concurrency_limit = 1;
  MatchLog* log = nullptr;  // optional durable log; existing entries are reused
  // Called after each newly judged pairing with (done, pending); may run on
  // worker threads.
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Phase 1 sends every pairing to the judge (up to concurrency_limit calls in
/// flight) and records one outcome per pairing; phase 2 replays the complete
/// log in pairing order. ConfigurationError and ValidationError from the
/// judge abort the run; any other judge failure becomes a flagged draw.
TournamentResult run_tournament(const Schedule& schedule, PairwiseJudge& judge,
                                const std::map<std::string, std::string>& corpus, const EloParams& params,
                                const TournamentOptions& options = {});

}  // namespace elorank

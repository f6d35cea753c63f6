// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "elorank/judge.hpp"
#include "elorank/rating_core.hpp"

namespace elorank {

struct MatchRecord {
  std::size_t pairing = 0;
  std::string first_id;
  std::string second_id;
  double score_a = 0.5;
  std::string judge;
  JudgeVerdict verdict;
  std::string timestamp;  // UTC ISO-8601
};

/// Append-only JSONL log of judged pairings, safe for concurrent appends.
///
/// Opening an existing file loads its records so an interrupted run can skip
/// pairings that were already judged. A truncated final line (crash during a
/// write) is ignored.
class MatchLog {
 public:
  explicit MatchLog(std::filesystem::path path);

  bool contains(std::size_t pairing) const;
  std::optional<MatchRecord> find(std::size_t pairing) const;
  void append(const MatchRecord& record);

  /// Records sorted by pairing index.
  std::vector<MatchRecord> records() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::size_t, MatchRecord> records_;
  std::ofstream out_;
};

std::string match_record_json(const MatchRecord& record);
MatchRecord parse_match_record(std::string_view line);

/// Reads a match log file into outcomes ordered by pairing index.
std::vector<MatchOutcome> read_match_outcomes(const std::filesystem::path& path);

std::string utc_timestamp();

}  // namespace elorank

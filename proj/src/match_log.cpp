// SPDX-License-Identifier: Apache-2.0
#include "elorank/match_log.hpp"

#include <chrono>
#include <ctime>
#include <iterator>

#include <nlohmann/json.hpp>

#include "elorank/errors.hpp"
#include "elorank/log.hpp"

namespace elorank {

using json = nlohmann::json;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string match_record_json(const MatchRecord& r) {
  const json rec = {{"pairing", r.pairing},
                    {"first_id", r.first_id},
                    {"second_id", r.second_id},
                    {"score_a", r.score_a},
                    {"judge", r.judge},
                    {"winner", to_string(r.verdict.winner)},
                    {"raw_response", r.verdict.raw_response},
                    {"attempts", r.verdict.attempts},
                    {"latency_ms", r.verdict.latency_ms},
                    {"flagged", r.verdict.flagged},
                    {"timestamp", r.timestamp}};
  return rec.dump();
}

MatchRecord parse_match_record(std::string_view line) {
  const auto rec = json::parse(line);
  MatchRecord r;
  r.pairing = rec.at("pairing").get<std::size_t>();
  r.first_id = rec.at("first_id").get<std::string>();
  r.second_id = rec.at("second_id").get<std::string>();
  r.score_a = rec.at("score_a").get<double>();
  if (!is_valid_score(r.score_a)) throw ValidationError("score_a must be 1, 0.5 or 0");
  r.judge = rec.value("judge", "");
  r.verdict.winner = rec.contains("winner") ? winner_from_string(rec["winner"].get<std::string>())
                     : r.score_a == 1.0     ? Winner::First
                     : r.score_a == 0.0     ? Winner::Second
                                            : Winner::Draw;
  r.verdict.raw_response = rec.value("raw_response", "");
  r.verdict.attempts = rec.value("attempts", 1);
  r.verdict.latency_ms = rec.value("latency_ms", std::int64_t{0});
  r.verdict.flagged = rec.value("flagged", false);
  r.timestamp = rec.value("timestamp", "");
  return r;
}

MatchLog::MatchLog(std::filesystem::path path) : path_(std::move(path)) {
  bool torn_tail = false;
  if (std::ifstream in(path_); in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> bad;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        auto r = parse_match_record(line);
        records_.insert_or_assign(r.pairing, std::move(r));
      } catch (const std::exception& e) {
        bad.push_back(std::to_string(line_no) + " (" + e.what() + ")");
      }
    }
    // Only a torn last line is expected after a crash.
    if (bad.size() == 1 && bad.front().starts_with(std::to_string(line_no) + " ")) {
      log_warning("ignoring truncated last line of " + path_.string());
      torn_tail = true;
    } else if (!bad.empty()) {
      throw ValidationError(path_.string() + ": unreadable match record at line " + bad.front());
    }
  }
  // Appends must start on a record boundary: a torn last line is cut off,
  // a complete one missing its newline gets it.
  bool needs_newline = false;
  if (std::ifstream tail(path_, std::ios::binary); tail) {
    const std::string body((std::istreambuf_iterator<char>(tail)), std::istreambuf_iterator<char>());
    tail.close();
    if (torn_tail) {
      const auto last_char = body.find_last_not_of('\n');
      const auto keep = last_char == std::string::npos ? std::string::npos : body.find_last_of('\n', last_char);
      std::filesystem::resize_file(path_, keep == std::string::npos ? 0 : keep + 1);
    } else {
      needs_newline = !body.empty() && body.back() != '\n';
    }
  }
  out_.open(path_, std::ios::app | std::ios::binary);
  if (!out_) throw EnvironmentError("cannot open match log " + path_.string() + " for appending");
  if (needs_newline) out_ << '\n';
}

bool MatchLog::contains(std::size_t pairing) const {
  std::lock_guard lock(mu_);
  return records_.count(pairing) != 0;
}

std::optional<MatchRecord> MatchLog::find(std::size_t pairing) const {
  std::lock_guard lock(mu_);
  const auto it = records_.find(pairing);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void MatchLog::append(const MatchRecord& record) {
  std::lock_guard lock(mu_);
  if (!records_.emplace(record.pairing, record).second) return;
  out_ << match_record_json(record) << '\n';
  out_.flush();
  if (!out_) throw EnvironmentError("write to match log " + path_.string() + " failed");
}

std::vector<MatchRecord> MatchLog::records() const {
  std::lock_guard lock(mu_);
  std::vector<MatchRecord> out;
  out.reserve(records_.size());
  for (const auto& [i, r] : records_) out.push_back(r);
  return out;
}

std::vector<MatchOutcome> read_match_outcomes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read match log " + path.string());
  std::map<std::size_t, MatchOutcome> ordered;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto r = parse_match_record(line);
      ordered.insert_or_assign(r.pairing, MatchOutcome{r.first_id, r.second_id, r.score_a});
    } catch (const std::exception& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::vector<MatchOutcome> out;
  out.reserve(ordered.size());
  for (auto& [i, m] : ordered) out.push_back(std::move(m));
  return out;
}

}  // namespace elorank

// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "elorank/errors.hpp"
#include "elorank/log.hpp"
#include "elorank/match_log.hpp"
#include "elorank/oracle_judge.hpp"
#include "elorank/stats.hpp"
#include "elorank/tournament.hpp"
#include "test_support.hpp"

namespace elorank {
namespace {

std::vector<std::string> make_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("item" + std::to_string(i));
  return ids;
}

std::set<std::pair<std::string, std::string>> unordered_pairs(const Schedule& s) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& p : s.pairings) out.insert(std::minmax(p.first_id, p.second_id));
  return out;
}

class AlwaysFirst final : public PairwiseJudge {
 public:
  JudgeVerdict compare(const ComparisonRequest& r) override {
    validate_request(r);
    ++calls;
    return {Winner::First, "A", 1, 0, false};
  }
  std::string name() const override { return "always-first"; }
  std::atomic<int> calls{0};
};

class Throwing final : public PairwiseJudge {
 public:
  explicit Throwing(int mode) : mode_(mode) {}
  JudgeVerdict compare(const ComparisonRequest&) override {
    if (mode_ == 0) throw std::runtime_error("backend exploded");
    throw ConfigurationError("bad key");
  }
  std::string name() const override { return "throwing"; }

 private:
  int mode_;
};

TEST(BuildSchedule, CompleteRoundRobin) {
  const auto s = build_schedule(make_ids(4), 3, 1);
  EXPECT_EQ(s.pairings.size(), 6u);
  EXPECT_EQ(unordered_pairs(s).size(), 6u);
  for (const auto& [id, d] : schedule_degrees(s)) EXPECT_EQ(d, 3) << id;
}

TEST(BuildSchedule, TwoItems) {
  const auto s = build_schedule(make_ids(2), 1, 9);
  ASSERT_EQ(s.pairings.size(), 1u);
  EXPECT_NE(s.pairings[0].first_id, s.pairings[0].second_id);
}

TEST(BuildSchedule, SixItemsDegreeTwoAnySeed) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = build_schedule(make_ids(6), 2, seed);
    ASSERT_EQ(s.pairings.size(), 6u) << seed;
    EXPECT_EQ(unordered_pairs(s).size(), 6u);
    // Degree count straight from the pairings.
    std::map<std::string, int> deg;
    for (const auto& p : s.pairings) {
      ++deg[p.first_id];
      ++deg[p.second_id];
    }
    ASSERT_EQ(deg.size(), 6u);
    for (const auto& [id, d] : deg) EXPECT_EQ(d, 2) << "seed " << seed << " " << id;
  }
}

TEST(BuildSchedule, RejectsBadArguments) {
  EXPECT_THROW(build_schedule(make_ids(1), 1, 0), ValidationError);
  EXPECT_THROW(build_schedule(make_ids(5), 0, 0), ValidationError);
  EXPECT_THROW(build_schedule(make_ids(5), 5, 0), ValidationError);
  EXPECT_THROW(build_schedule({"a", "b", "a"}, 1, 0), ValidationError);
}

TEST(BuildSchedule, RandomConfigurationsSatisfyInvariants) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + gen() % 80;
    const int m = 1 + static_cast<int>(gen() % std::min<std::size_t>(n - 1, 15));
    const std::uint64_t seed = gen();
    const auto s = build_schedule(make_ids(n), m, seed);
    EXPECT_NO_THROW(validate_schedule(s));
    EXPECT_EQ(unordered_pairs(s).size(), s.pairings.size());
    int extra = 0;
    const auto deg = schedule_degrees(s);
    ASSERT_EQ(deg.size(), n);
    for (const auto& [id, d] : deg) {
      ASSERT_TRUE(d == m || d == m + 1) << "n=" << n << " m=" << m << " degree " << d;
      extra += d - m;
    }
    EXPECT_EQ(extra, static_cast<int>((n * static_cast<std::size_t>(m)) % 2)) << "n=" << n << " m=" << m;
    EXPECT_EQ(s, build_schedule(make_ids(n), m, seed));
  }
}

TEST(BuildSchedule, SeedChangesSchedule) {
  EXPECT_NE(build_schedule(make_ids(50), 10, 1).pairings, build_schedule(make_ids(50), 10, 2).pairings);
}

TEST(BuildSchedule, PresentationBalance) {
  // 1000 seeds, N=100, m=10: each item is shown 10,000 times, half as "A"
  // in expectation; binomial sigma = 50.
  const auto ids = make_ids(100);
  std::map<std::string, int> as_first, shown;
  long long lower_first = 0, pairings = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    for (const auto& p : build_schedule(ids, 10, seed).pairings) {
      ++as_first[p.first_id];
      ++shown[p.first_id];
      ++shown[p.second_id];
      lower_first += p.first_id < p.second_id;
      ++pairings;
    }
  }
  double chi2 = 0.0;
  for (const auto& id : ids) {
    const double n = shown[id];
    const double dev = as_first[id] - n / 2.0;
    chi2 += dev * dev / (n / 4.0);
    // Bonferroni-level bound over 100 items.
    EXPECT_LE(std::fabs(dev), 4.5 * std::sqrt(n / 4.0)) << id;
  }
  EXPECT_GE(chi_square_sf(chi2, 100), 1e-3) << "chi2 " << chi2;
  const double orient_dev = static_cast<double>(lower_first) - pairings / 2.0;
  EXPECT_LE(std::fabs(orient_dev), 4.5 * std::sqrt(pairings / 4.0));
}

TEST(Schedule, SerializeParseRoundTrip) {
  const auto s = build_schedule(make_ids(12), 4, 77);
  std::istringstream in(serialize_schedule(s));
  const auto back = parse_schedule(in, "mem");
  EXPECT_EQ(back.pairings, s.pairings);
}

TEST(Schedule, ParseRejectsDuplicatesAndGaps) {
  std::istringstream dup(
      "{\"pairing\":0,\"first_id\":\"a\",\"second_id\":\"b\"}\n{\"pairing\":1,\"first_id\":\"b\",\"second_id\":\"a\"}\n");
  EXPECT_THROW(parse_schedule(dup, "dup"), ValidationError);
  std::istringstream self("{\"pairing\":0,\"first_id\":\"a\",\"second_id\":\"a\"}\n");
  EXPECT_THROW(parse_schedule(self, "self"), ValidationError);
  std::istringstream junk("not json\n");
  EXPECT_THROW(parse_schedule(junk, "junk"), ValidationError);
}

TEST(RunTournament, SinglePairingFirstWins) {
  Schedule s;
  s.pairings = {{"x", "y"}};
  AlwaysFirst judge;
  EloParams p;
  p.epochs = 1;
  const auto r = run_tournament(s, judge, {{"x", "tx"}, {"y", "ty"}}, p);
  EXPECT_DOUBLE_EQ(r.ratings.at("x"), 1516);
  EXPECT_DOUBLE_EQ(r.ratings.at("y"), 1484);
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0].score_a, 1.0);
}

TEST(RunTournament, OracleOrderMatchesLatent) {
  const auto s = build_schedule({"lo", "mid", "hi"}, 2, 4);
  OracleJudge judge({{{"lo", 1.0}, {"mid", 2.0}, {"hi", 3.0}}, 0.0, 0});
  const auto r = run_tournament(s, judge, {{"lo", "a"}, {"mid", "b"}, {"hi", "c"}}, EloParams{});
  EXPECT_GT(r.ratings.at("hi"), r.ratings.at("mid"));
  EXPECT_GT(r.ratings.at("mid"), r.ratings.at("lo"));
}

TEST(RunTournament, EmptyOrMissingTextIsRejected) {
  Schedule s;
  s.pairings = {{"x", "y"}};
  AlwaysFirst judge;
  EXPECT_THROW(run_tournament(s, judge, {{"x", "tx"}, {"y", ""}}, EloParams{}), ValidationError);
  EXPECT_THROW(run_tournament(s, judge, {{"x", "tx"}}, EloParams{}), ValidationError);
  EXPECT_EQ(judge.calls, 0);
}

TEST(RunTournament, JudgeFailureBecomesFlaggedDraw) {
  Schedule s;
  s.pairings = {{"x", "y"}};
  Throwing judge(0);
  const auto r = run_tournament(s, judge, {{"x", "tx"}, {"y", "ty"}}, EloParams{});
  EXPECT_EQ(r.audit[0].winner, Winner::Draw);
  EXPECT_TRUE(r.audit[0].flagged);
  EXPECT_EQ(r.matches[0].score_a, 0.5);
}

TEST(RunTournament, ConfigurationErrorAborts) {
  Schedule s;
  s.pairings = {{"x", "y"}};
  Throwing judge(1);
  EXPECT_THROW(run_tournament(s, judge, {{"x", "tx"}, {"y", "ty"}}, EloParams{}), ConfigurationError);
}

TEST(RunTournament, RatingsIndependentOfConcurrency) {
  const auto ids = make_ids(60);
  std::map<std::string, double> latent;
  std::map<std::string, std::string> corpus;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    latent[ids[i]] = static_cast<double>(i) / 10.0;
    corpus[ids[i]] = "text " + ids[i];
  }
  const auto s = build_schedule(ids, 8, 3);
  OracleJudge judge({latent, 0.7, 42});
  TournamentOptions serial, parallel;
  parallel.concurrency_limit = 8;
  const auto a = run_tournament(s, judge, corpus, EloParams{}, serial);
  const auto b = run_tournament(s, judge, corpus, EloParams{}, parallel);
  EXPECT_EQ(a.ratings, b.ratings);
}

TEST(RunTournament, ProgressIsReported) {
  const auto ids = make_ids(10);
  std::map<std::string, std::string> corpus;
  for (const auto& id : ids) corpus[id] = "t" + id;
  const auto s = build_schedule(ids, 3, 1);
  AlwaysFirst judge;
  std::atomic<std::size_t> last{0};
  TournamentOptions o;
  o.concurrency_limit = 4;
  o.progress = [&](std::size_t done, std::size_t total) {
    EXPECT_EQ(total, s.pairings.size());
    std::size_t prev = last.load();
    while (done > prev && !last.compare_exchange_weak(prev, done)) {
    }
  };
  run_tournament(s, judge, corpus, EloParams{}, o);
  EXPECT_EQ(last.load(), s.pairings.size());
}

TEST(MatchLog, CompleteLastLineWithoutNewlineIsKept) {
  testing::TempDir dir;
  MatchRecord a;
  a.pairing = 0;
  a.first_id = "x";
  a.second_id = "y";
  a.score_a = 1.0;
  testing::write_text(dir / "m.jsonl", match_record_json(a));
  {
    MatchLog log(dir / "m.jsonl");
    MatchRecord b = a;
    b.pairing = 1;
    log.append(b);
  }
  EXPECT_EQ(MatchLog(dir / "m.jsonl").records().size(), 2u);
}

TEST(MatchLog, ResumeSkipsJudgedPairings) {
  set_quiet(true);
  testing::TempDir dir;
  const auto ids = make_ids(20);
  std::map<std::string, std::string> corpus;
  for (const auto& id : ids) corpus[id] = "t" + id;
  const auto s = build_schedule(ids, 4, 8);
  {
    MatchLog log(dir / "m.jsonl");
    AlwaysFirst judge;
    TournamentOptions o;
    o.log = &log;
    run_tournament(s, judge, corpus, EloParams{}, o);
    EXPECT_EQ(judge.calls, static_cast<int>(s.pairings.size()));
  }
  // Simulate a crash: drop the last 5 records and tear the one before them.
  auto text = testing::read_text(dir / "m.jsonl");
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  std::string kept;
  for (std::size_t i = 0; i + 6 < lines.size(); ++i) kept += lines[i] + "\n";
  kept += lines[lines.size() - 6].substr(0, 10);
  testing::write_text(dir / "m.jsonl", kept);

  MatchLog log(dir / "m.jsonl");
  AlwaysFirst judge;
  TournamentOptions o;
  o.log = &log;
  o.concurrency_limit = 3;
  const auto r = run_tournament(s, judge, corpus, EloParams{}, o);
  EXPECT_EQ(judge.calls, 6);
  EXPECT_EQ(r.reused, s.pairings.size() - 6);

  std::set<std::size_t> seen;
  for (const auto& rec : MatchLog(dir / "m.jsonl").records()) EXPECT_TRUE(seen.insert(rec.pairing).second);
  EXPECT_EQ(seen.size(), s.pairings.size());
  EXPECT_EQ(read_match_outcomes(dir / "m.jsonl").size(), s.pairings.size());
  set_quiet(false);
}

TEST(MatchLog, MismatchedLogIsRejected) {
  testing::TempDir dir;
  MatchLog log(dir / "m.jsonl");
  log.append({0, "b", "a", 1.0, "x", {}, utc_timestamp()});
  Schedule s;
  s.pairings = {{"a", "b"}};
  AlwaysFirst judge;
  TournamentOptions o;
  o.log = &log;
  EXPECT_THROW(run_tournament(s, judge, {{"a", "1"}, {"b", "2"}}, EloParams{}, o), ValidationError);
}

TEST(MatchLog, RecordRoundTrip) {
  MatchRecord r{7, "a", "b", 0.5, "oracle", {Winner::Draw, "=", 2, 15, true}, "2026-01-01T00:00:00Z"};
  const auto back = parse_match_record(match_record_json(r));
  EXPECT_EQ(back.pairing, 7u);
  EXPECT_EQ(back.first_id, "a");
  EXPECT_EQ(back.second_id, "b");
  EXPECT_EQ(back.score_a, 0.5);
  EXPECT_EQ(back.judge, "oracle");
  EXPECT_EQ(back.verdict.winner, Winner::Draw);
  EXPECT_EQ(back.verdict.attempts, 2);
  EXPECT_EQ(back.verdict.latency_ms, 15);
  EXPECT_TRUE(back.verdict.flagged);
  EXPECT_EQ(back.timestamp, r.timestamp);
}

}  // namespace
}  // namespace elorank

// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "elorank/errors.hpp"
#include "elorank/oracle_judge.hpp"

namespace elorank {
namespace {

Winner judge_once(double s_first, double s_second, double tau, std::uint64_t seed) {
  OracleJudge j({{{"a", s_first}, {"b", s_second}}, tau, seed});
  return j.compare({"a", "text a", "b", "text b"}).winner;
}

double first_win_rate(double s_first, double s_second, double tau) {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) wins += judge_once(s_first, s_second, tau, seed) == Winner::First;
  return wins / 10000.0;
}

TEST(OracleJudge, NoiseFreeExamples) {
  EXPECT_EQ(judge_once(5, 1, 0, 0), Winner::First);
  EXPECT_EQ(judge_once(2, 0, 0, 0), Winner::First);
  EXPECT_EQ(judge_once(0, 2, 0, 0), Winner::Second);
  EXPECT_EQ(judge_once(1, 1, 0, 0), Winner::Draw);
}

TEST(OracleJudge, EqualLatentIsFairCoin) {
  EXPECT_NEAR(first_win_rate(3, 3, 1.0), 0.5, 0.02);
  EXPECT_NEAR(first_win_rate(3, 3, 0.1), 0.5, 0.02);
}

TEST(OracleJudge, MatchesBradleyTerryClosedForm) {
  EXPECT_NEAR(first_win_rate(1, 0, 1.0), 1.0 / (1.0 + std::exp(-1.0)), 0.02);
  const double cases[][3] = {{2, 0, 1}, {0, 1, 0.5}, {0.3, 0, 2}, {1, 0, 0.25}};
  for (const auto& c : cases) {
    EXPECT_NEAR(first_win_rate(c[0], c[1], c[2]), 1.0 / (1.0 + std::exp(-(c[0] - c[1]) / c[2])), 0.02);
  }
}

TEST(OracleJudge, DeterministicPerPair) {
  OracleJudge j({{{"a", 0.0}, {"b", 0.1}}, 1.0, 17});
  const auto first = j.compare({"a", "x", "b", "y"}).winner;
  for (int i = 0; i < 20; ++i) EXPECT_EQ(j.compare({"a", "x", "b", "y"}).winner, first);
}

TEST(OracleJudge, Errors) {
  OracleJudge j({{{"a", 0.0}}, 0.0, 0});
  EXPECT_THROW(j.compare({"a", "x", "zz", "y"}), ValidationError);
  EXPECT_THROW(j.compare({"a", "", "a", "y"}), ValidationError);
  EXPECT_THROW(OracleJudge({{}, -1.0, 0}), ValidationError);
}

TEST(OracleJudge, RawResponseFollowsProtocol) {
  OracleJudge j({{{"a", 1.0}, {"b", 0.0}}, 0.0, 0});
  EXPECT_EQ(j.compare({"a", "x", "b", "y"}).raw_response, "A");
  EXPECT_EQ(j.compare({"b", "y", "a", "x"}).raw_response, "B");
}

}  // namespace
}  // namespace elorank

// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>

#include "elorank/errors.hpp"
#include "elorank/llm_judge.hpp"
#include "elorank/mock_backend.hpp"
#include "elorank/rate_limiter.hpp"

namespace elorank {
namespace {

using namespace std::chrono_literals;

LlmJudgeConfig mock_config(const MockChatServer& server) {
  LlmJudgeConfig c;
  c.endpoint_url = server.endpoint_url();
  c.api_key_env_var = "";
  c.timeout_ms = 5000;
  return c;
}

TEST(ParseReply, AbTokens) {
  EXPECT_EQ(parse_ab_reply("A"), 'A');
  EXPECT_EQ(parse_ab_reply("  b"), 'B');
  EXPECT_EQ(parse_ab_reply("\"A\"."), 'A');
  EXPECT_EQ(parse_ab_reply("**B**"), 'B');
  EXPECT_EQ(parse_ab_reply("B\nbecause"), 'B');
  EXPECT_FALSE(parse_ab_reply("I cannot help with that."));
  EXPECT_FALSE(parse_ab_reply(""));
  EXPECT_FALSE(parse_ab_reply("AB"));
}

TEST(ParseReply, YesNoTokens) {
  EXPECT_EQ(parse_yes_no_reply("yes"), Label::Harmful);
  EXPECT_EQ(parse_yes_no_reply("No."), Label::Benign);
  EXPECT_EQ(parse_yes_no_reply("Harmful"), Label::Harmful);
  EXPECT_FALSE(parse_yes_no_reply("I'm sorry"));
}

TEST(Templates, RenderIsSinglePass) {
  EXPECT_EQ(render_template("[{TEXT_A}|{TEXT_B}]", {{"{TEXT_A}", "x{TEXT_B}"}, {"{TEXT_B}", "y"}}), "[x{TEXT_B}|y]");
  EXPECT_EQ(count_slot(kDefaultPairTemplate, "{TEXT_A}"), 1u);
}

TEST(Templates, ConfigValidation) {
  LlmJudgeConfig c;
  EXPECT_NO_THROW(c.validate_pairwise());
  c.prompt_template = "{TEXT_A} only";
  EXPECT_THROW(c.validate_pairwise(), ValidationError);
  c.prompt_template = "{TEXT_A} {TEXT_B} {TEXT_A}";
  EXPECT_THROW(c.validate_pairwise(), ValidationError);
  EXPECT_NO_THROW(LlmJudgeConfig{}.zero_shot_variant().validate_single());
}

TEST(Templates, VersionTracksContent) {
  LlmJudgeConfig a, b;
  EXPECT_EQ(a.effective_template_version(), b.effective_template_version());
  b.attribute_description = "microaggressions";
  EXPECT_NE(a.effective_template_version(), b.effective_template_version());
  b.template_version = "v7";
  EXPECT_EQ(b.effective_template_version(), "v7");
}

TEST(LlmJudge, RepliesMapToWinners) {
  MockChatServer server;
  ManualClock clock;
  server.script({MockReply::text("A"), MockReply::text("B")});
  LlmJudge judge(mock_config(server), nullptr, clock);
  const auto v1 = judge.compare({"x", "first text", "y", "second text"});
  EXPECT_EQ(v1.winner, Winner::First);
  EXPECT_EQ(v1.attempts, 1);
  EXPECT_FALSE(v1.flagged);
  const auto v2 = judge.compare({"x", "first text", "y", "second text"});
  EXPECT_EQ(v2.winner, Winner::Second);
  EXPECT_EQ(v2.attempts, 1);
  EXPECT_EQ(server.call_count(), 2);
}

TEST(LlmJudge, RequestFollowsWireFormat) {
  MockChatServer server;
  ManualClock clock;
  auto config = mock_config(server);
  config.model_name = "test-model";
  LlmJudge judge(config, nullptr, clock);
  judge.compare({"x", "alpha text", "y", "beta text"});
  const auto req = server.requests().at(0);
  EXPECT_EQ(req.at("model"), "test-model");
  EXPECT_EQ(req.at("temperature"), 0.0);
  EXPECT_EQ(req.at("max_tokens"), 1);
  ASSERT_EQ(req.at("messages").size(), 2u);
  EXPECT_EQ(req.at("messages")[0].at("role"), "system");
  EXPECT_EQ(req.at("messages")[1].at("role"), "user");
  const auto user = MockChatServer::user_message(req);
  EXPECT_LT(user.find("alpha text"), user.find("beta text"));
  EXPECT_NE(user.find("Respond with exactly one character: A or B."), std::string::npos);
}

TEST(LlmJudge, RefusalStreakGivesFlaggedDraw) {
  MockChatServer server;
  ManualClock clock;
  server.set_responder([](const auto&) { return MockReply::text("I cannot help with that."); });
  auto config = mock_config(server);
  config.max_retries = 3;
  const auto start = clock.now();
  LlmJudge judge(config, nullptr, clock);
  const auto v = judge.compare({"x", "t1", "y", "t2"});
  EXPECT_EQ(v.winner, Winner::Draw);
  EXPECT_TRUE(v.flagged);
  EXPECT_EQ(v.attempts, 3);
  EXPECT_EQ(server.call_count(), 3);
  // Backoff 500 ms then 1000 ms, both through the injected clock.
  EXPECT_EQ(clock.now() - start, 1500ms);
}

TEST(LlmJudge, RecoversAfterTransientFailures) {
  MockChatServer server;
  ManualClock clock;
  server.script({MockReply::http_error(500), MockReply::http_error(429), MockReply::text("B")});
  LlmJudge judge(mock_config(server), nullptr, clock);
  const auto v = judge.compare({"x", "t1", "y", "t2"});
  EXPECT_EQ(v.winner, Winner::Second);
  EXPECT_EQ(v.attempts, 3);
  EXPECT_FALSE(v.flagged);
}

TEST(LlmJudge, MalformedBodyIsRetried) {
  MockChatServer server;
  ManualClock clock;
  server.script({MockReply{200, "", std::string("{not json")}, MockReply::text("A")});
  LlmJudge judge(mock_config(server), nullptr, clock);
  const auto v = judge.compare({"x", "t1", "y", "t2"});
  EXPECT_EQ(v.winner, Winner::First);
  EXPECT_EQ(v.attempts, 2);
}

TEST(LlmJudge, UnreachableEndpointGivesFlaggedDraw) {
  ManualClock clock;
  LlmJudgeConfig c;
  c.endpoint_url = "http://127.0.0.1:1/v1/chat/completions";
  c.api_key_env_var = "";
  c.timeout_ms = 500;
  c.max_retries = 2;
  LlmJudge judge(c, nullptr, clock);
  const auto v = judge.compare({"x", "t1", "y", "t2"});
  EXPECT_EQ(v.winner, Winner::Draw);
  EXPECT_TRUE(v.flagged);
  EXPECT_EQ(v.attempts, 2);
}

TEST(LlmJudge, AuthFailureIsConfigurationError) {
  for (int status : {401, 403}) {
    MockChatServer server;
    ManualClock clock;
    server.set_responder([status](const auto&) { return MockReply::http_error(status); });
    LlmJudge judge(mock_config(server), nullptr, clock);
    EXPECT_THROW(judge.compare({"x", "t1", "y", "t2"}), ConfigurationError);
    EXPECT_EQ(server.call_count(), 1);
  }
}

TEST(LlmJudge, ApiKeyComesFromNamedVariable) {
  MockChatServer server;
  ManualClock clock;
  auto config = mock_config(server);
  config.api_key_env_var = "ELORANK_TEST_KEY";
  ::setenv("ELORANK_TEST_KEY", "sk-test-123", 1);
  LlmJudge judge(config, nullptr, clock);
  judge.compare({"x", "t1", "y", "t2"});
  EXPECT_EQ(server.authorization_headers().at(0), "Bearer sk-test-123");
  ::unsetenv("ELORANK_TEST_KEY");
  config.api_key_env_var = "ELORANK_TEST_KEY_UNSET";
  EXPECT_THROW(LlmJudge(config, nullptr, clock), ConfigurationError);
}

TEST(LlmJudge, DebiasAgreementAndDisagreement) {
  MockChatServer server;
  ManualClock clock;
  auto config = mock_config(server);
  config.debias_both_orders = true;
  LlmJudge judge(config, nullptr, clock);

  // "A" in the swapped order names the other text: disagreement.
  server.script({MockReply::text("A"), MockReply::text("A")});
  auto v = judge.compare({"x", "text one", "y", "text two"});
  EXPECT_EQ(v.winner, Winner::Draw);
  EXPECT_TRUE(v.flagged);
  EXPECT_EQ(v.attempts, 2);

  server.script({MockReply::text("A"), MockReply::text("B")});
  v = judge.compare({"x", "text one", "y", "text two"});
  EXPECT_EQ(v.winner, Winner::First);
  EXPECT_FALSE(v.flagged);

  server.script({MockReply::text("B"), MockReply::text("A")});
  v = judge.compare({"x", "text one", "y", "text two"});
  EXPECT_EQ(v.winner, Winner::Second);

  const auto reqs = server.requests();
  const auto fwd = MockChatServer::user_message(reqs[reqs.size() - 2]);
  const auto rev = MockChatServer::user_message(reqs.back());
  EXPECT_LT(fwd.find("text one"), fwd.find("text two"));
  EXPECT_GT(rev.find("text one"), rev.find("text two"));
}

TEST(LlmJudge, ContentBasedResponderJudgesByText) {
  MockChatServer server;
  ManualClock clock;
  server.set_responder([](const nlohmann::json& req) {
    const auto user = MockChatServer::user_message(req);
    return MockReply::text(user.find("toxic") < user.find("Text B") ? "A" : "B");
  });
  LlmJudge judge(mock_config(server), nullptr, clock);
  EXPECT_EQ(judge.compare({"x", "toxic text", "y", "kind text"}).winner, Winner::First);
  EXPECT_EQ(judge.compare({"y", "kind text", "x", "toxic text"}).winner, Winner::Second);
}

TEST(LlmJudge, RejectsEmptyText) {
  MockChatServer server;
  ManualClock clock;
  LlmJudge judge(mock_config(server), nullptr, clock);
  EXPECT_THROW(judge.compare({"x", "", "y", "t"}), ValidationError);
  EXPECT_EQ(server.call_count(), 0);
}

TEST(ZeroShot, Examples) {
  MockChatServer server;
  ManualClock clock;
  ZeroShotClassifier zs(mock_config(server).zero_shot_variant(), nullptr, clock);
  server.script({MockReply::text("yes"), MockReply::text("No.")});
  auto r = zs.classify("some text");
  EXPECT_EQ(r.label, Label::Harmful);
  EXPECT_FALSE(r.flagged);
  r = zs.classify("some text");
  EXPECT_EQ(r.label, Label::Benign);
  EXPECT_EQ(r.raw_response, "No.");

  server.set_responder([](const auto&) { return MockReply::text("I can't assist with that."); });
  r = zs.classify("some text");
  EXPECT_EQ(r.label, Label::Benign);
  EXPECT_TRUE(r.flagged);
  EXPECT_EQ(r.attempts, 3);
  const auto user = MockChatServer::user_message(server.requests().at(0));
  EXPECT_NE(user.find("some text"), std::string::npos);
}

TEST(RateLimiter, WindowBudgetUnderManualClock) {
  ManualClock clock;
  RateLimiter limiter(5, clock);
  std::vector<Clock::time_point> sent;
  for (int i = 0; i < 23; ++i) {
    if (i % 4 == 0) clock.advance(7s);
    sent.push_back(limiter.acquire());
  }
  for (std::size_t i = 0; i < sent.size(); ++i) {
    const auto in_window = std::count_if(sent.begin(), sent.end(),
                                         [&](auto t) { return t >= sent[i] && t < sent[i] + 60s; });
    EXPECT_LE(in_window, 5);
  }
  EXPECT_EQ(sent[5] - sent[0], 60s);
}

TEST(RateLimiter, JudgeRespectsBudget) {
  MockChatServer server;
  ManualClock clock;
  auto config = mock_config(server);
  config.requests_per_minute = 2;
  const auto start = clock.now();
  LlmJudge judge(config, nullptr, clock);
  for (int i = 0; i < 5; ++i) judge.compare({"x", "t1", "y", "t2"});
  EXPECT_EQ(server.call_count(), 5);
  EXPECT_EQ(clock.now() - start, 120s);
}

TEST(ChatTransport, ExtractsContentAndRefusal) {
  std::string content, error;
  EXPECT_TRUE(extract_chat_content(chat_completion_body("B"), content, error));
  EXPECT_EQ(content, "B");
  EXPECT_TRUE(extract_chat_content(
      R"({"choices":[{"message":{"role":"assistant","content":null,"refusal":"I refuse"}}]})", content, error));
  EXPECT_EQ(content, "I refuse");
  EXPECT_FALSE(extract_chat_content(R"({"choices":[]})", content, error));
  EXPECT_FALSE(extract_chat_content("nope", content, error));
}

}  // namespace
}  // namespace elorank

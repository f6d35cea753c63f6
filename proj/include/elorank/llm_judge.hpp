// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "elorank/chat_transport.hpp"
#include "elorank/judge.hpp"
#include "elorank/labels.hpp"
#include "elorank/rate_limiter.hpp"

namespace elorank {

inline constexpr std::string_view kDefaultAttribute =
    "harmful content (for example hate speech, harassment, or microaggressions)";

inline constexpr std::string_view kDefaultPairSystemTemplate =
    "You compare two texts and decide which one exhibits stronger {ATTRIBUTE}. "
    "Do not explain, summarize, or repeat the texts.";

inline constexpr std::string_view kDefaultPairTemplate =
    "Text A:\n<<<\n{TEXT_A}\n>>>\n\n"
    "Text B:\n<<<\n{TEXT_B}\n>>>\n\n"
    "Which text exhibits stronger {ATTRIBUTE}? Respond with exactly one character: A or B.";

inline constexpr std::string_view kDefaultZeroShotSystemTemplate =
    "You label texts for {ATTRIBUTE}. Do not explain, summarize, or repeat the text.";

inline constexpr std::string_view kDefaultZeroShotTemplate =
    "Text:\n<<<\n{TEXT}\n>>>\n\n"
    "Does this text contain {ATTRIBUTE}? Answer with exactly one word: yes or no.";

struct LlmJudgeConfig {
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string model_name = "gpt-4o-mini";
  // Name of the environment variable holding the bearer token. Empty means
  // no Authorization header.
  std::string api_key_env_var = "OPENAI_API_KEY";
  std::string system_template = std::string(kDefaultPairSystemTemplate);
  std::string prompt_template = std::string(kDefaultPairTemplate);
  std::string attribute_description = std::string(kDefaultAttribute);
  // Overrides the derived template hash in cache keys when set.
  std::string template_version;
  double temperature = 0.0;
  int max_tokens = 1;
  int max_retries = 3;  // total attempts per question
  int timeout_ms = 30000;
  int requests_per_minute = 500;
  int backoff_initial_ms = 500;
  int backoff_max_ms = 8000;
  bool debias_both_orders = false;

  /// Pairwise mode: {TEXT_A} and {TEXT_B} each exactly once.
  void validate_pairwise() const;
  /// Zero-shot mode: {TEXT} exactly once.
  void validate_single() const;

  /// Version tag for cache keys: template_version if set, otherwise a short
  /// hash of both templates and the attribute text.
  std::string effective_template_version() const;

  /// The same config with the zero-shot default templates.
  LlmJudgeConfig zero_shot_variant() const;
};

/// Number of occurrences of `slot` (e.g. "{TEXT_A}") in `tmpl`.
std::size_t count_slot(std::string_view tmpl, std::string_view slot);

/// Single-pass slot substitution; substituted text is never rescanned, so a
/// text containing "{TEXT_B}" is inserted literally.
std::string render_template(std::string_view tmpl,
                            std::initializer_list<std::pair<std::string_view, std::string_view>> slots);

/// First whitespace-delimited token, stripped of quotes, asterisks, and
/// trailing punctuation, then matched case-insensitively against "A"/"B".
std::optional<char> parse_ab_reply(std::string_view reply);

/// yes/harmful/true -> Harmful, no/not/benign/false -> Benign.
std::optional<Label> parse_yes_no_reply(std::string_view reply);

/// Reads the API key named by `config.api_key_env_var`. Throws
/// ConfigurationError if the variable is named but unset or empty.
std::string read_api_key(const LlmJudgeConfig& config);

/// Shared retry/backoff/rate-limit loop for one chat question.
class ChatSession {
 public:
  ChatSession(LlmJudgeConfig config, std::shared_ptr<ChatTransport> transport, Clock& clock);

  struct Answer {
    std::string raw;
    int attempts = 0;
    bool parsed = false;
  };

  /// Sends `user_text` with the rendered system prompt until `accept` returns
  /// true or max_retries attempts are spent. HTTP 401/403 throws
  /// ConfigurationError; every other failure is retried.
  template <typename Accept>
  Answer ask(const std::string& user_text, Accept&& accept);

  const LlmJudgeConfig& config() const { return config_; }
  Clock& clock() { return clock_; }

 private:
  ChatResponse send_once(const std::string& user_text);
  void backoff(int attempt);

  LlmJudgeConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  Clock& clock_;
  RateLimiter limiter_;
  std::string system_text_;
};

/// Pairwise judge over an OpenAI-compatible endpoint.
class LlmJudge final : public PairwiseJudge {
 public:
  /// With a null transport an HttpChatTransport is built from the config and
  /// the API key environment variable.
  explicit LlmJudge(LlmJudgeConfig config, std::shared_ptr<ChatTransport> transport = nullptr,
                    Clock& clock = SystemClock::instance());

  JudgeVerdict compare(const ComparisonRequest& request) override;
  std::string name() const override { return "llm:" + session_.config().model_name; }

  const LlmJudgeConfig& config() const { return session_.config(); }

 private:
  JudgeVerdict ask_once(std::string_view text_a, std::string_view text_b);

  ChatSession session_;
};

struct ZeroShotResult {
  Label label = Label::Benign;
  std::string raw_response;
  int attempts = 1;
  bool flagged = false;  // unparsable after retries; label is the benign default
};

/// Direct single-text classification baseline.
class ZeroShotClassifier {
 public:
  /// `config` must use single-text templates (see zero_shot_variant()).
  explicit ZeroShotClassifier(LlmJudgeConfig config, std::shared_ptr<ChatTransport> transport = nullptr,
                              Clock& clock = SystemClock::instance());

  ZeroShotResult classify(std::string_view text);

 private:
  ChatSession session_;
};

}  // namespace elorank

// SPDX-License-Identifier: Apache-2.0
#include "elorank/llm_judge.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "elorank/errors.hpp"
#include "elorank/hashing.hpp"

namespace elorank {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string first_token(std::string_view reply) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  auto begin = std::find_if_not(reply.begin(), reply.end(), is_space);
  auto end = std::find_if(begin, reply.end(), is_space);
  std::string_view token(begin, static_cast<std::size_t>(end - begin));
  constexpr std::string_view kStrip = "\"'`*_.,:;!?()[]{}<>";
  while (!token.empty() && kStrip.find(token.front()) != std::string_view::npos) token.remove_prefix(1);
  while (!token.empty() && kStrip.find(token.back()) != std::string_view::npos) token.remove_suffix(1);
  return lowercase(token);
}

std::shared_ptr<ChatTransport> default_transport(const LlmJudgeConfig& config) {
  return std::make_shared<HttpChatTransport>(config.endpoint_url, read_api_key(config), config.timeout_ms);
}

}  // namespace

std::size_t count_slot(std::string_view tmpl, std::string_view slot) {
  std::size_t n = 0;
  for (auto pos = tmpl.find(slot); pos != std::string_view::npos; pos = tmpl.find(slot, pos + slot.size())) ++n;
  return n;
}

std::string render_template(std::string_view tmpl,
                            std::initializer_list<std::pair<std::string_view, std::string_view>> slots) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    bool matched = false;
    if (tmpl[i] == '{') {
      for (const auto& [slot, value] : slots) {
        if (tmpl.substr(i, slot.size()) == slot) {
          out.append(value);
          i += slot.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out.push_back(tmpl[i++]);
  }
  return out;
}

std::optional<char> parse_ab_reply(std::string_view reply) {
  const auto token = first_token(reply);
  if (token == "a") return 'A';
  if (token == "b") return 'B';
  return std::nullopt;
}

std::optional<Label> parse_yes_no_reply(std::string_view reply) {
  const auto token = first_token(reply);
  if (token == "yes" || token == "harmful" || token == "true") return Label::Harmful;
  if (token == "no" || token == "not" || token == "benign" || token == "false") return Label::Benign;
  return std::nullopt;
}

std::string read_api_key(const LlmJudgeConfig& config) {
  if (config.api_key_env_var.empty()) return {};
  const char* value = std::getenv(config.api_key_env_var.c_str());
  if (value == nullptr || *value == '\0') {
    throw ConfigurationError("environment variable " + config.api_key_env_var + " (API key) is not set");
  }
  return value;
}

void LlmJudgeConfig::validate_pairwise() const {
  if (count_slot(prompt_template, "{TEXT_A}") != 1 || count_slot(prompt_template, "{TEXT_B}") != 1) {
    throw ValidationError("pairwise prompt template must contain {TEXT_A} and {TEXT_B} exactly once each");
  }
  if (max_retries < 1) throw ValidationError("max_retries must be at least 1");
  if (temperature < 0.0) throw ValidationError("temperature must be >= 0");
  if (requests_per_minute < 1) throw ValidationError("requests_per_minute must be positive");
}

void LlmJudgeConfig::validate_single() const {
  if (count_slot(prompt_template, "{TEXT}") != 1) {
    throw ValidationError("zero-shot prompt template must contain {TEXT} exactly once");
  }
  if (max_retries < 1) throw ValidationError("max_retries must be at least 1");
  if (temperature < 0.0) throw ValidationError("temperature must be >= 0");
  if (requests_per_minute < 1) throw ValidationError("requests_per_minute must be positive");
}

std::string LlmJudgeConfig::effective_template_version() const {
  if (!template_version.empty()) return template_version;
  Sha256 h;
  h.update(system_template).update(std::string_view("\0", 1)).update(prompt_template);
  h.update(std::string_view("\0", 1)).update(attribute_description);
  return h.hex_digest().substr(0, 16);
}

LlmJudgeConfig LlmJudgeConfig::zero_shot_variant() const {
  LlmJudgeConfig c = *this;
  c.system_template = std::string(kDefaultZeroShotSystemTemplate);
  c.prompt_template = std::string(kDefaultZeroShotTemplate);
  c.max_tokens = std::max(c.max_tokens, 2);
  c.debias_both_orders = false;
  return c;
}

ChatSession::ChatSession(LlmJudgeConfig config, std::shared_ptr<ChatTransport> transport, Clock& clock)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      clock_(clock),
      limiter_(config_.requests_per_minute, clock),
      system_text_(render_template(config_.system_template, {{"{ATTRIBUTE}", config_.attribute_description}})) {}

ChatResponse ChatSession::send_once(const std::string& user_text) {
  ChatRequest request;
  request.model = config_.model_name;
  request.temperature = config_.temperature;
  request.max_tokens = config_.max_tokens;
  request.messages = {{"system", system_text_}, {"user", user_text}};
  limiter_.acquire();
  auto response = transport_->send(request);
  if (response.delivered && (response.status == 401 || response.status == 403)) {
    throw ConfigurationError("endpoint rejected credentials (" + response.error + ")");
  }
  return response;
}

void ChatSession::backoff(int attempt) {
  long long delay = config_.backoff_initial_ms;
  for (int i = 1; i < attempt && delay < config_.backoff_max_ms; ++i) delay *= 2;
  delay = std::min<long long>(delay, config_.backoff_max_ms);
  if (delay > 0) clock_.sleep_for(std::chrono::milliseconds(delay));
}

template <typename Accept>
ChatSession::Answer ChatSession::ask(const std::string& user_text, Accept&& accept) {
  Answer answer;
  for (int attempt = 1; attempt <= config_.max_retries; ++attempt) {
    answer.attempts = attempt;
    const auto response = send_once(user_text);
    const bool ok = response.delivered && response.status == 200;
    answer.raw = ok ? response.content : "[error] " + response.error;
    if (ok && accept(response.content)) {
      answer.parsed = true;
      return answer;
    }
    if (attempt < config_.max_retries) backoff(attempt);
  }
  return answer;
}

LlmJudge::LlmJudge(LlmJudgeConfig config, std::shared_ptr<ChatTransport> transport, Clock& clock)
    : session_((config.validate_pairwise(), config), transport ? std::move(transport) : default_transport(config),
               clock) {}

JudgeVerdict LlmJudge::ask_once(std::string_view text_a, std::string_view text_b) {
  const auto start = session_.clock().now();
  const auto user = render_template(session_.config().prompt_template,
                                    {{"{TEXT_A}", text_a},
                                     {"{TEXT_B}", text_b},
                                     {"{ATTRIBUTE}", session_.config().attribute_description}});
  std::optional<char> choice;
  const auto answer = session_.ask(user, [&](const std::string& content) {
    choice = parse_ab_reply(content);
    return choice.has_value();
  });

  JudgeVerdict v;
  v.raw_response = answer.raw;
  v.attempts = answer.attempts;
  v.latency_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(session_.clock().now() - start).count();
  if (answer.parsed) {
    v.winner = *choice == 'A' ? Winner::First : Winner::Second;
  } else {
    v.winner = Winner::Draw;
    v.flagged = true;
  }
  return v;
}

JudgeVerdict LlmJudge::compare(const ComparisonRequest& request) {
  validate_request(request);
  auto forward = ask_once(request.first_text, request.second_text);
  if (!session_.config().debias_both_orders) return forward;

  // Second question shows the texts swapped, so its "A" names the second item.
  auto swapped = ask_once(request.second_text, request.first_text);
  Winner mapped = swapped.winner;
  if (mapped == Winner::First) {
    mapped = Winner::Second;
  } else if (mapped == Winner::Second) {
    mapped = Winner::First;
  }

  JudgeVerdict v;
  v.raw_response = forward.raw_response + " | " + swapped.raw_response;
  v.attempts = forward.attempts + swapped.attempts;
  v.latency_ms = forward.latency_ms + swapped.latency_ms;
  if (forward.flagged || swapped.flagged || forward.winner != mapped) {
    v.winner = Winner::Draw;
    v.flagged = true;
  } else {
    v.winner = forward.winner;
  }
  return v;
}

ZeroShotClassifier::ZeroShotClassifier(LlmJudgeConfig config, std::shared_ptr<ChatTransport> transport,
                                       Clock& clock)
    : session_((config.validate_single(), config), transport ? std::move(transport) : default_transport(config),
               clock) {}

ZeroShotResult ZeroShotClassifier::classify(std::string_view text) {
  if (text.empty()) throw ValidationError("cannot classify an empty text");
  const auto user = render_template(session_.config().prompt_template,
                                    {{"{TEXT}", text}, {"{ATTRIBUTE}", session_.config().attribute_description}});
  std::optional<Label> label;
  const auto answer = session_.ask(user, [&](const std::string& content) {
    label = parse_yes_no_reply(content);
    return label.has_value();
  });
  ZeroShotResult r;
  r.raw_response = answer.raw;
  r.attempts = answer.attempts;
  if (answer.parsed) {
    r.label = *label;
  } else {
    r.label = Label::Benign;
    r.flagged = true;
  }
  return r;
}

}  // namespace elorank

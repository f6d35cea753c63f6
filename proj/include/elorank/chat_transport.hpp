// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace elorank {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 1;
};

struct ChatResponse {
  bool delivered = false;  // false: no HTTP response at all (connect/timeout)
  int status = 0;
  std::string content;     // first choice's message content (or refusal text)
  std::string error;       // transport or parse diagnostics
};

/// Sends one chat-completion request. Implementations must be thread-safe.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual ChatResponse send(const ChatRequest& request) = 0;
};

/// OpenAI-compatible chat completions over HTTP(S).
class HttpChatTransport final : public ChatTransport {
 public:
  /// `endpoint_url` is the full completions URL, e.g.
  /// https://api.openai.com/v1/chat/completions. An empty `api_key` sends no
  /// Authorization header (local servers).
  HttpChatTransport(std::string endpoint_url, std::string api_key, int timeout_ms);

  ChatResponse send(const ChatRequest& request) override;

 private:
  std::string base_;  // scheme://host[:port]
  std::string path_;
  std::string api_key_;
  int timeout_ms_;
};

/// JSON body for a chat-completions request.
std::string chat_request_body(const ChatRequest& request);

/// Pulls choices[0].message.content out of a response body. Falls back to
/// the message's "refusal" field when content is null. Returns false on a
/// body that is not a chat completion.
bool extract_chat_content(const std::string& body, std::string& content, std::string& error);

}  // namespace elorank

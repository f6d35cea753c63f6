// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace httplib {
class Server;
}

namespace elorank {

struct MockReply {
  int status = 200;
  std::string content;                  // wrapped into a chat-completion body
  std::optional<std::string> raw_body;  // sent verbatim instead, when set

  static MockReply text(std::string content) { return {200, std::move(content), std::nullopt}; }
  static MockReply http_error(int status) { return {status, {}, R"({"error":{"message":"mock error"}})"}; }
};

/// In-process OpenAI-compatible server on 127.0.0.1 with scripted replies.
///
/// Scripted replies are consumed in order; once exhausted the responder is
/// consulted (default: always "A"). Every request body is recorded.
class MockChatServer {
 public:
  using Responder = std::function<MockReply(const nlohmann::json& request)>;

  MockChatServer();
  ~MockChatServer();
  MockChatServer(const MockChatServer&) = delete;
  MockChatServer& operator=(const MockChatServer&) = delete;

  /// Full completions URL, e.g. http://127.0.0.1:38123/v1/chat/completions.
  std::string endpoint_url() const;

  void script(std::vector<MockReply> replies);
  void set_responder(Responder responder);

  int call_count() const { return calls_.load(); }
  std::vector<nlohmann::json> requests() const;
  std::vector<std::string> authorization_headers() const;

  /// Text of the last user message in a recorded request.
  static std::string user_message(const nlohmann::json& request);

 private:
  MockReply next_reply(const nlohmann::json& request);

  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> calls_{0};
  mutable std::mutex mu_;
  std::deque<MockReply> script_;
  Responder responder_;
  std::vector<nlohmann::json> requests_;
  std::vector<std::string> auth_;
};

/// Chat-completion JSON body carrying `content` as the first choice.
std::string chat_completion_body(const std::string& content);

}  // namespace elorank

// SPDX-License-Identifier: Apache-2.0
#include "elorank/mock_backend.hpp"

#include <httplib.h>

#include "elorank/errors.hpp"

namespace elorank {

using json = nlohmann::json;

std::string chat_completion_body(const std::string& content) {
  const json body = {{"id", "mock"},
                     {"object", "chat.completion"},
                     {"choices", json::array({{{"index", 0},
                                               {"message", {{"role", "assistant"}, {"content", content}}},
                                               {"finish_reason", "stop"}}})}};
  return body.dump();
}

MockChatServer::MockChatServer()
    : server_(std::make_unique<httplib::Server>()), responder_([](const json&) { return MockReply::text("A"); }) {
  server_->Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
    calls_.fetch_add(1);
    json parsed = json::parse(req.body, nullptr, false);
    {
      std::lock_guard lock(mu_);
      requests_.push_back(parsed);
      auth_.push_back(req.get_header_value("Authorization"));
    }
    const MockReply reply = next_reply(parsed);
    res.status = reply.status;
    res.set_content(reply.raw_body ? *reply.raw_body : chat_completion_body(reply.content), "application/json");
  });
  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw EnvironmentError("mock chat server could not bind a local port");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

MockChatServer::~MockChatServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockChatServer::endpoint_url() const {
  return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
}

void MockChatServer::script(std::vector<MockReply> replies) {
  std::lock_guard lock(mu_);
  script_.assign(std::make_move_iterator(replies.begin()), std::make_move_iterator(replies.end()));
}

void MockChatServer::set_responder(Responder responder) {
  std::lock_guard lock(mu_);
  responder_ = std::move(responder);
}

std::vector<json> MockChatServer::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::vector<std::string> MockChatServer::authorization_headers() const {
  std::lock_guard lock(mu_);
  return auth_;
}

std::string MockChatServer::user_message(const json& request) {
  if (!request.is_object() || !request.contains("messages")) return {};
  std::string last;
  for (const auto& m : request["messages"]) {
    if (m.value("role", "") == "user") last = m.value("content", "");
  }
  return last;
}

MockReply MockChatServer::next_reply(const json& request) {
  Responder responder;
  {
    std::lock_guard lock(mu_);
    if (!script_.empty()) {
      MockReply r = std::move(script_.front());
      script_.pop_front();
      return r;
    }
    responder = responder_;
  }
  return responder(request);
}

}  // namespace elorank

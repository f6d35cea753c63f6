// SPDX-License-Identifier: Apache-2.0
#include "elorank/chat_transport.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>
#include <regex>

#include "elorank/errors.hpp"

namespace elorank {

using json = nlohmann::json;

std::string chat_request_body(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  json body = {{"model", request.model},
               {"messages", std::move(messages)},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};
  return body.dump();
}

bool extract_chat_content(const std::string& body, std::string& content, std::string& error) {
  const json parsed = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) {
    error = "response is not JSON";
    return false;
  }
  const auto choices = parsed.find("choices");
  if (choices == parsed.end() || !choices->is_array() || choices->empty()) {
    error = "response has no choices";
    return false;
  }
  const auto& message = (*choices)[0].value("message", json::object());
  if (const auto c = message.find("content"); c != message.end() && c->is_string()) {
    content = c->get<std::string>();
    return true;
  }
  if (const auto r = message.find("refusal"); r != message.end() && r->is_string()) {
    content = r->get<std::string>();
    return true;
  }
  error = "first choice has no message content";
  return false;
}

HttpChatTransport::HttpChatTransport(std::string endpoint_url, std::string api_key, int timeout_ms)
    : api_key_(std::move(api_key)), timeout_ms_(timeout_ms) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(endpoint_url, m, kUrl)) {
    throw ConfigurationError("endpoint URL must look like http(s)://host[:port]/path, got '" + endpoint_url + "'");
  }
  base_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : std::string("/v1/chat/completions");
}

ChatResponse HttpChatTransport::send(const ChatRequest& request) {
  httplib::Client client(base_);
  const auto timeout = std::chrono::milliseconds(timeout_ms_);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  ChatResponse out;
  auto res = client.Post(path_, headers, chat_request_body(request), "application/json");
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.delivered = true;
  out.status = res->status;
  if (res->status != 200) {
    out.error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
    return out;
  }
  if (!extract_chat_content(res->body, out.content, out.error)) out.status = -1;
  return out;
}

}  // namespace elorank

// Copyright 2026 The cookplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <httplib.h>

#include <regex>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cookplan/planner.hpp"

namespace cookplan {

using nlohmann::json;

HttpBackend::HttpBackend(ChatBackendConfig config) : config_(std::move(config)) {}

std::string HttpBackend::send(const std::vector<ChatMessage>& messages) {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.base_url, m, url_re)) {
    throw BackendError(BackendError::Code::TransportError, "bad base url " + config_.base_url);
  }
  std::string path = m.str(2);
  while (!path.empty() && path.back() == '/') path.pop_back();
  path += "/chat/completions";

  json body{{"model", config_.model}, {"temperature", config_.temperature}, {"messages", json::array()}};
  for (const auto& msg : messages) body["messages"].push_back({{"role", msg.role}, {"content", msg.content}});
  const std::string payload = body.dump();

  httplib::Client client(m.str(1));
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  BackendError last(BackendError::Code::TransportError, "no attempt made");
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(100 << attempt));
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      const auto err = res.error();
      last = BackendError(err == httplib::Error::Read || err == httplib::Error::Write ||
                                  err == httplib::Error::ConnectionTimeout
                              ? BackendError::Code::Timeout
                              : BackendError::Code::TransportError,
                          fmt::format("{} ({})", httplib::to_string(err), config_.base_url));
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last = BackendError(BackendError::Code::TransportError, fmt::format("HTTP {}", res->status));
      continue;
    }
    if (res->status != 200) {
      throw BackendError(BackendError::Code::TransportError,
                         fmt::format("HTTP {}: {}", res->status, res->body.substr(0, 200)));
    }
    std::string content;
    try {
      const json j = json::parse(res->body);
      const auto& c = j.at("choices").at(0).at("message").at("content");
      if (c.is_string()) content = c.get<std::string>();
    } catch (const json::exception& e) {
      throw BackendError(BackendError::Code::EmptyResponse, std::string("malformed reply: ") + e.what());
    }
    if (content.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw BackendError(BackendError::Code::EmptyResponse, "reply has no content");
    }
    return content;
  }
  throw last;
}

}  // namespace cookplan

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

// HTTP and WebSocket front end for GameService.
//
//   POST /api/games                      {layout, backend?, profile?, horizon?, seed?, free_play?}
//   GET  /api/layouts
//   GET  /api/games/{id}
//   POST /api/games/{id}/instruction     {text}
//   POST /api/games/{id}/feedback        {text}
//   POST /api/games/{id}/accept
//   WS   /api/games/{id}/stream          client sends {action}; server sends snapshots
//   POST /api/bench/reasoning            {task, sessions, lengths|length, n, backend?, seed?}

#ifndef COOKPLAN_SERVER_HPP_
#define COOKPLAN_SERVER_HPP_

#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cookplan/service.hpp"

namespace cookplan {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Routes one plain HTTP request. Never throws; failures come back as error
/// bodies.
ApiResponse handle_api(GameService& service, std::string_view method, std::string_view target,
                       std::string_view body);

/// Game id when `target` is a stream path.
std::optional<std::string> stream_target(std::string_view target);

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8080;  // 0 picks a free port
  int io_threads = 2;
  int worker_threads = 4;
};

class Server {
 public:
  Server(GameService& service, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts serving in background threads. Returns the bound port.
  unsigned short start();
  /// Blocks until stop() is called from another thread.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cookplan

#endif  // COOKPLAN_SERVER_HPP_

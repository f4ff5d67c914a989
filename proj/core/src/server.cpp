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

#include "cookplan/server.hpp"

#include <condition_variable>
#include <deque>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <fmt/format.h>

#include "cookplan/json.hpp"
#include "cookplan/layouts.hpp"

namespace cookplan {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

// --- Routing -------------------------------------------------------------------------

namespace {

std::vector<std::string_view> path_parts(std::string_view target) {
  if (auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
  std::vector<std::string_view> parts;
  while (!target.empty()) {
    if (target.front() == '/') {
      target.remove_prefix(1);
      continue;
    }
    const auto slash = target.find('/');
    parts.push_back(target.substr(0, slash));
    if (slash == std::string_view::npos) break;
    target.remove_prefix(slash);
  }
  return parts;
}

json parse_body(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ServiceError("BadRequest", 400, "body must be a JSON object");
  return j;
}

std::string text_field(const json& j) {
  if (!j.contains("text") || !j.at("text").is_string()) {
    throw ServiceError("BadRequest", 400, "missing string field 'text'");
  }
  return j.at("text").get<std::string>();
}

json plan_json(const PlanReply& r) {
  return {{"convention", convention_json(r.convention)}, {"transcripts", transcripts_json(r.transcripts)}};
}

json layouts_json() {
  json out = json::array();
  for (const auto& name : bundled_layout_names()) out.push_back(layout_json(load_layout(name)));
  return {{"layouts", out}};
}

json reasoning_bench(const GameService& service, const json& req) {
  const std::string task = req.value("task", "lastletter");
  const int sessions = req.value("sessions", 1);
  const int n = req.value("n", 10);
  const std::uint64_t seed = req.value("seed", std::uint64_t{0});
  const std::string backend_spec = req.value("backend", "oracle");
  std::vector<int> lengths;
  if (req.contains("lengths")) {
    lengths = req.at("lengths").get<std::vector<int>>();
  } else {
    lengths.push_back(req.value("length", task == "scan" ? 2 : 4));
  }
  if (n <= 0 || sessions <= 0 || lengths.empty()) {
    throw ServiceError("BadRequest", 400, "n, sessions and lengths must be positive");
  }
  const ReasoningTask kind = reasoning_task_from(task);
  auto backend = make_reasoning_backend(backend_spec, service.options().chat);
  json rows = json::array();
  for (int length : lengths) {
    rows.push_back(json::parse(to_json(run_reasoning_bench(kind, sessions, *backend, n, length, seed))));
  }
  return {{"rows", rows}};
}

ApiResponse route(GameService& service, std::string_view method, std::string_view target, std::string_view body) {
  const auto parts = path_parts(target);
  const bool get = method == "GET";
  const bool post = method == "POST";
  if (parts.size() < 2 || parts[0] != "api") throw ServiceError("NotFound", 404, "no such endpoint");

  if (parts[1] == "layouts" && parts.size() == 2 && get) return {200, layouts_json()};
  if (parts[1] == "bench" && parts.size() == 3 && parts[2] == "reasoning" && post) {
    return {200, reasoning_bench(service, parse_body(body))};
  }
  if (parts[1] == "games") {
    if (parts.size() == 2 && post) {
      const json req = parse_body(body);
      if (!req.contains("layout") || !req.at("layout").is_string()) {
        throw ServiceError("BadRequest", 400, "missing string field 'layout'");
      }
      const std::string id = service.create_game(req.at("layout").get<std::string>(), GameConfig::from_json(req));
      return {201, {{"id", id}, {"phase", to_string(service.phase(id))}}};
    }
    if (parts.size() >= 3) {
      const std::string id(parts[2]);
      if (parts.size() == 3 && get) return {200, service.view(id)};
      if (parts.size() == 4 && post) {
        if (parts[3] == "instruction") {
          return {200, plan_json(service.submit_instruction(id, text_field(parse_body(body))))};
        }
        if (parts[3] == "feedback") {
          return {200, plan_json(service.submit_feedback(id, text_field(parse_body(body))))};
        }
        if (parts[3] == "accept") {
          service.accept(id);
          return {200, {{"id", id}, {"phase", to_string(service.phase(id))}}};
        }
      }
    }
  }
  const bool known = parts[1] == "layouts" || parts[1] == "games" || parts[1] == "bench";
  if (known && !get && !post) throw ServiceError("MethodNotAllowed", 405, "method not allowed");
  throw ServiceError("NotFound", 404, "no such endpoint");
}

}  // namespace

ApiResponse handle_api(GameService& service, std::string_view method, std::string_view target,
                       std::string_view body) {
  try {
    return route(service, method, target, body);
  } catch (const ServiceError& e) {
    return {e.status(), e.body()};
  } catch (const json::exception& e) {
    return {400, ServiceError("BadRequest", 400, e.what()).body()};
  } catch (const std::invalid_argument& e) {
    return {400, ServiceError("BadRequest", 400, e.what()).body()};
  } catch (const std::exception& e) {
    return {500, ServiceError("Internal", 500, e.what()).body()};
  }
}

std::optional<std::string> stream_target(std::string_view target) {
  const auto parts = path_parts(target);
  if (parts.size() == 4 && parts[0] == "api" && parts[1] == "games" && parts[3] == "stream") {
    return std::string(parts[2]);
  }
  return std::nullopt;
}

// --- Transport -----------------------------------------------------------------------

namespace {

std::string_view sv(beast::string_view s) { return {s.data(), s.size()}; }

json error_message(const std::string& code, const std::string& message) {
  return ServiceError(code, 400, message).body();
}

class StreamSession : public std::enable_shared_from_this<StreamSession> {
 public:
  StreamSession(tcp::socket socket, GameService& service, std::string id)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), service_(service), id_(std::move(id)) {}

  void run(http::request<http::string_body> req) {
    req_ = std::move(req);
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req_, beast::bind_front_handler(&StreamSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    try {
      service_.resume_clock(id_, std::chrono::steady_clock::now());
      publish(true);
    } catch (const ServiceError& e) {
      send(e.body().dump());
      closing_ = true;
      return;
    }
    read();
    schedule();
  }

  void read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&StreamSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      closed_ = true;
      timer_.cancel();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    const json msg = json::parse(text, nullptr, false);
    std::optional<Action> action;
    if (!msg.is_discarded() && msg.is_object() && msg.contains("action") && msg.at("action").is_string()) {
      action = action_from_string(msg.at("action").get<std::string>());
    }
    if (!action) {
      send(error_message("BadRequest", "expected {\"action\": up|down|left|right|stay|interact}").dump());
    } else {
      try {
        service_.queue_action(id_, *action);
      } catch (const ServiceError& e) {
        send(e.body().dump());
      }
    }
    if (!closing_) read();
  }

  void schedule() {
    timer_.expires_after(service_.options().tick_interval / 4);
    timer_.async_wait(beast::bind_front_handler(&StreamSession::on_timer, shared_from_this()));
  }

  void on_timer(beast::error_code ec) {
    if (ec || closed_ || closing_) return;
    try {
      service_.step_if_due(id_, std::chrono::steady_clock::now());
      publish(false);
    } catch (const std::exception&) {
      return;
    }
    if (!closing_) schedule();
  }

  void publish(bool force) {
    Snapshot snap = service_.snapshot(id_);
    if (!force && snap.tick == last_tick_ && snap.phase == last_phase_) return;
    last_tick_ = snap.tick;
    last_phase_ = snap.phase;
    send(snap.body.dump());
    if (snap.phase == Phase::Finished) closing_ = true;
  }

  void send(std::string text) {
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) write_next();
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()),
                    beast::bind_front_handler(&StreamSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      closed_ = true;
      timer_.cancel();
      return;
    }
    queue_.pop_front();
    if (!queue_.empty()) {
      write_next();
    } else if (closing_ && !closed_) {
      closed_ = true;
      timer_.cancel();
      ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
    }
  }

  websocket::stream<beast::tcp_stream> ws_;
  http::request<http::string_body> req_;
  asio::steady_timer timer_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  GameService& service_;
  std::string id_;
  int last_tick_ = -1;
  Phase last_phase_ = Phase::Planning;
  bool closing_ = false;
  bool closed_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, GameService& service, asio::thread_pool& workers)
      : stream_(std::move(socket)), service_(service), workers_(workers) {}

  void run() { read(); }

 private:
  void read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(300));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (websocket::is_upgrade(req_)) {
      if (auto id = stream_target(sv(req_.target()))) {
        stream_.expires_never();
        std::make_shared<StreamSession>(stream_.release_socket(), service_, *id)->run(std::move(req_));
        return;
      }
    }
    // Planner calls may block for a long time; keep them off the I/O threads.
    asio::post(workers_, [self = shared_from_this()] {
      const ApiResponse r = handle_api(self->service_, sv(self->req_.method_string()),
                                       sv(self->req_.target()), self->req_.body());
      asio::post(self->stream_.get_executor(), [self, r] { self->respond(r); });
    });
  }

  void respond(const ApiResponse& r) {
    auto res = std::make_shared<http::response<http::string_body>>(static_cast<http::status>(r.status),
                                                                   req_.version());
    res->set(http::field::server, "cookplan");
    res->set(http::field::content_type, "application/json");
    res->set(http::field::access_control_allow_origin, "*");
    res->keep_alive(req_.keep_alive());
    res->body() = r.body.dump();
    res->prepare_payload();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
      if (ec) return;
      if (!res->keep_alive()) {
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
        return;
      }
      self->read();
    });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  GameService& service_;
  asio::thread_pool& workers_;
};

}  // namespace

struct Server::Impl {
  GameService& service;
  ServerOptions options;
  asio::io_context ioc;
  asio::thread_pool workers;
  tcp::acceptor acceptor{ioc};
  std::vector<std::thread> threads;
  std::mutex mu;
  std::condition_variable cv;
  bool stopped = false;

  Impl(GameService& s, ServerOptions o)
      : service(s), options(std::move(o)), workers(static_cast<std::size_t>(std::max(1, options.worker_threads))) {}

  void accept() {
    acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<HttpSession>(std::move(socket), service, workers)->run();
      accept();
    });
  }
};

Server::Server(GameService& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {}

Server::~Server() { stop(); }

unsigned short Server::start() {
  const tcp::endpoint ep(asio::ip::make_address(impl_->options.address), impl_->options.port);
  impl_->acceptor.open(ep.protocol());
  impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
  impl_->acceptor.bind(ep);
  impl_->acceptor.listen(asio::socket_base::max_listen_connections);
  impl_->accept();
  for (int i = 0; i < std::max(1, impl_->options.io_threads); ++i) {
    impl_->threads.emplace_back([this] { impl_->ioc.run(); });
  }
  return impl_->acceptor.local_endpoint().port();
}

void Server::wait() {
  std::unique_lock lock(impl_->mu);
  impl_->cv.wait(lock, [this] { return impl_->stopped; });
}

void Server::stop() {
  {
    std::lock_guard lock(impl_->mu);
    if (impl_->stopped) return;
    impl_->stopped = true;
  }
  impl_->cv.notify_all();
  impl_->ioc.stop();
  for (auto& t : impl_->threads) {
    if (t.joinable()) t.join();
  }
  impl_->workers.join();
}

}  // namespace cookplan

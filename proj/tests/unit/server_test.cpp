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

#include <gtest/gtest.h>

#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "cookplan/layouts.hpp"
#include "cookplan/server.hpp"
#include "support/golden.hpp"

namespace cookplan {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;
using testing::golden;

// --- Routing without sockets ---------------------------------------------------------

TEST(Api, Layouts) {
  GameService svc;
  const ApiResponse r = handle_api(svc, "GET", "/api/layouts", "");
  ASSERT_EQ(r.status, 200);
  std::vector<std::string> names;
  for (const auto& l : r.body.at("layouts")) names.push_back(l.at("name"));
  EXPECT_EQ(names, bundled_layout_names());
  EXPECT_EQ(r.body.at("layouts")[0].at("rows").size(), r.body.at("layouts")[0].at("height").get<std::size_t>());
}

TEST(Api, GameLifecycle) {
  GameService svc;
  const ApiResponse created = handle_api(svc, "POST", "/api/games", R"({"layout":"replan_example"})");
  ASSERT_EQ(created.status, 201);
  EXPECT_EQ(created.body.at("phase"), "planning");
  const std::string id = created.body.at("id");
  const std::string base = "/api/games/" + id;

  EXPECT_EQ(handle_api(svc, "POST", base + "/accept", "").status, 409);

  const ApiResponse first =
      handle_api(svc, "POST", base + "/instruction", R"({"text":"Please join me in making onion soup."})");
  ASSERT_EQ(first.status, 200);
  EXPECT_EQ(first.body.at("convention").at("human").size(), 0u);
  EXPECT_FALSE(first.body.at("transcripts").empty());
  EXPECT_EQ(first.body.at("transcripts")[0].at("session_index"), 1);

  const ApiResponse second =
      handle_api(svc, "POST", base + "/feedback", json{{"text", golden("replan_feedback")}}.dump());
  ASSERT_EQ(second.status, 200);
  EXPECT_GT(second.body.at("convention").at("human").size(), 0u);

  const ApiResponse view = handle_api(svc, "GET", base, "");
  ASSERT_EQ(view.status, 200);
  EXPECT_EQ(view.body.at("phase"), "reviewing");
  EXPECT_EQ(view.body.at("convention").at("text"), second.body.at("convention").at("text"));

  const ApiResponse accepted = handle_api(svc, "POST", base + "/accept", "");
  ASSERT_EQ(accepted.status, 200);
  EXPECT_EQ(accepted.body.at("phase"), "playing");
  const ApiResponse late = handle_api(svc, "POST", base + "/feedback", R"({"text":"x"})");
  EXPECT_EQ(late.status, 409);
  EXPECT_EQ(late.body.at("error").at("code"), "PhaseError");
}

TEST(Api, ErrorShapes) {
  GameService svc;
  const ApiResponse unknown = handle_api(svc, "POST", "/api/games", R"({"layout":"atlantis"})");
  EXPECT_EQ(unknown.status, 404);
  EXPECT_EQ(unknown.body.at("error").at("code"), "UnknownLayout");
  EXPECT_TRUE(unknown.body.at("error").at("message").is_string());
  EXPECT_FALSE(unknown.body.at("error").contains("stage"));

  EXPECT_EQ(handle_api(svc, "POST", "/api/games", "{not json").status, 400);
  EXPECT_EQ(handle_api(svc, "POST", "/api/games", R"({"layout":"many_orders","horizon":"long"})").status, 400);
  EXPECT_EQ(handle_api(svc, "GET", "/api/games/g42", "").body.at("error").at("code"), "GameNotFound");
  EXPECT_EQ(handle_api(svc, "GET", "/api/nothing", "").status, 404);
  EXPECT_EQ(handle_api(svc, "DELETE", "/api/layouts", "").status, 405);

  const std::string id = handle_api(svc, "POST", "/api/games", R"({"layout":"many_orders"})").body.at("id");
  EXPECT_EQ(handle_api(svc, "POST", "/api/games/" + id + "/instruction", "{}").status, 400);
  const ApiResponse failed = handle_api(svc, "POST", "/api/games/" + id + "/instruction", R"({"text":"x"})");
  EXPECT_EQ(failed.status, 422);
  EXPECT_EQ(failed.body.at("error").at("code"), "StageFailed");
  EXPECT_EQ(failed.body.at("error").at("stage"), 1);
}

TEST(Api, ReasoningBench) {
  GameService svc;
  const ApiResponse r = handle_api(svc, "POST", "/api/bench/reasoning",
                                   R"({"task":"lastletter","sessions":2,"lengths":[4,8],"n":10})");
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body.at("rows").size(), 2u);
  for (const auto& row : r.body.at("rows")) {
    EXPECT_DOUBLE_EQ(row.at("mean").get<double>(), 1.0);
    EXPECT_EQ(row.at("backend"), "oracle");
  }
  const ApiResponse scan =
      handle_api(svc, "POST", "/api/bench/reasoning", R"({"task":"scan","sessions":3,"n":5,"backend":"lesioned"})");
  ASSERT_EQ(scan.status, 200);
  EXPECT_EQ(scan.body.at("rows")[0].at("backend"), "lesioned");
  EXPECT_EQ(handle_api(svc, "POST", "/api/bench/reasoning", R"({"task":"chess"})").status, 400);
  EXPECT_EQ(handle_api(svc, "POST", "/api/bench/reasoning", R"({"n":0})").status, 400);
}

TEST(Api, StreamTarget) {
  EXPECT_EQ(stream_target("/api/games/g7/stream"), "g7");
  EXPECT_FALSE(stream_target("/api/games/g7").has_value());
  EXPECT_FALSE(stream_target("/api/games/g7/stream/x").has_value());
}

// --- Over the wire -------------------------------------------------------------------

class Live : public ::testing::Test {
 protected:
  void SetUp() override {
    ServiceOptions opts;
    opts.tick_interval = std::chrono::milliseconds(4);
    service_ = std::make_unique<GameService>(opts);
    ServerOptions sopts;
    sopts.port = 0;
    server_ = std::make_unique<Server>(*service_, sopts);
    port_ = server_->start();
  }
  void TearDown() override { server_->stop(); }

  std::pair<int, json> request(http::verb verb, const std::string& target, const std::string& body = "") {
    asio::io_context ioc;
    beast::tcp_stream stream(ioc);
    stream.connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port_));
    http::request<http::string_body> req(verb, target, 11);
    req.set(http::field::host, "localhost");
    req.set(http::field::content_type, "application/json");
    req.body() = body;
    req.prepare_payload();
    http::write(stream, req);
    beast::flat_buffer buf;
    http::response<http::string_body> res;
    http::read(stream, buf, res);
    beast::error_code ec;
    stream.socket().shutdown(tcp::socket::shutdown_both, ec);
    return {static_cast<int>(res.result_int()), json::parse(res.body())};
  }

  std::unique_ptr<websocket::stream<tcp::socket>> open_stream(asio::io_context& ioc, const std::string& id) {
    auto ws = std::make_unique<websocket::stream<tcp::socket>>(ioc);
    ws->next_layer().connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port_));
    ws->handshake("localhost", "/api/games/" + id + "/stream");
    return ws;
  }

  static json next(websocket::stream<tcp::socket>& ws) {
    beast::flat_buffer buf;
    ws.read(buf);
    return json::parse(beast::buffers_to_string(buf.data()));
  }

  std::unique_ptr<GameService> service_;
  std::unique_ptr<Server> server_;
  unsigned short port_ = 0;
};

TEST_F(Live, HttpRoundTrip) {
  auto [status, layouts] = request(http::verb::get, "/api/layouts");
  EXPECT_EQ(status, 200);
  EXPECT_EQ(layouts.at("layouts").size(), 5u);
  auto [cs, created] = request(http::verb::post, "/api/games", R"({"layout":"many_orders"})");
  EXPECT_EQ(cs, 201);
  auto [ps, plan] = request(http::verb::post, "/api/games/" + created.at("id").get<std::string>() + "/instruction",
                            R"({"text":"Please make onion soup."})");
  EXPECT_EQ(ps, 200);
  EXPECT_EQ(plan.at("convention").at("ai").size(), 6u);
  auto [es, err] = request(http::verb::get, "/api/games/missing");
  EXPECT_EQ(es, 404);
  EXPECT_EQ(err.at("error").at("code"), "GameNotFound");
}

TEST_F(Live, StreamPlaysToTheEnd) {
  auto [cs, created] = request(http::verb::post, "/api/games", R"({"layout":"many_orders","horizon":60})");
  const std::string id = created.at("id");
  request(http::verb::post, "/api/games/" + id + "/instruction", R"({"text":"Please make onion soup."})");

  asio::io_context ioc;
  auto ws = open_stream(ioc, id);
  const json hello = next(*ws);
  EXPECT_EQ(hello.at("phase"), "reviewing");
  EXPECT_EQ(hello.at("tick"), 0);

  request(http::verb::post, "/api/games/" + id + "/accept");
  ws->write(asio::buffer(std::string(R"({"action":"up"})")));
  ws->write(asio::buffer(std::string(R"({"move":"sideways"})")));
  int last = -1;
  bool saw_error = false;
  json msg;
  for (;;) {
    msg = next(*ws);
    if (msg.contains("error")) {
      saw_error = true;
      continue;
    }
    if (msg.at("phase") == "playing" || msg.at("phase") == "finished") {
      // The phase change itself is announced at tick 0; after that every
      // message carries a new tick.
      EXPECT_GT(msg.at("tick").get<int>(), last);
      last = msg.at("tick");
      EXPECT_EQ(msg.at("remaining_ticks"), 60 - last);
    }
    if (msg.at("type") == "finished") break;
  }
  EXPECT_TRUE(saw_error);
  EXPECT_EQ(last, 60);
  EXPECT_EQ(msg.at("result").at("ticks"), 60);
  EXPECT_TRUE(msg.at("result").contains("event_proportions"));
  EXPECT_EQ(service_->phase(id), Phase::Finished);

  // Reconnecting to a finished game replays the final snapshot.
  asio::io_context ioc2;
  auto again = open_stream(ioc2, id);
  const json replay = next(*again);
  EXPECT_EQ(replay.at("type"), "finished");
  EXPECT_EQ(replay.at("tick"), 60);
}

TEST_F(Live, DroppedStreamPausesTheGame) {
  auto [cs, created] = request(http::verb::post, "/api/games", R"({"layout":"many_orders"})");
  const std::string id = created.at("id");
  request(http::verb::post, "/api/games/" + id + "/instruction", R"({"text":"Please make onion soup."})");
  request(http::verb::post, "/api/games/" + id + "/accept");
  int seen = 0;
  {
    asio::io_context ioc;
    auto ws = open_stream(ioc, id);
    for (int i = 0; i < 5; ++i) seen = next(*ws).at("tick");
    ws->close(websocket::close_code::normal);
  }
  std::this_thread::sleep_for(std::chrono::milliseconds(30));
  const int paused = service_->state(id).tick;
  EXPECT_LE(paused, seen + 1);
  std::this_thread::sleep_for(std::chrono::milliseconds(60));
  EXPECT_EQ(service_->state(id).tick, paused);

  asio::io_context ioc;
  auto ws = open_stream(ioc, id);
  const json replay = next(*ws);
  EXPECT_EQ(replay.at("tick"), paused);
  EXPECT_EQ(replay.at("phase"), "playing");
}

TEST_F(Live, StreamForUnknownGame) {
  asio::io_context ioc;
  auto ws = open_stream(ioc, "g404");
  const json msg = next(*ws);
  EXPECT_EQ(msg.at("error").at("code"), "GameNotFound");
}

}  // namespace
}  // namespace cookplan

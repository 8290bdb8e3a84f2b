// Copyright 2026 The spatialrt Authors
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

// HTTP bindings for the location-cache and model-checker services.
//
//   location-cache                       model-checker
//   PUT  /locations/{entity_id}          POST /check
//   GET  /locations                      GET  /healthz
//   GET  /locations/{entity_id}          GET  /metrics
//   GET  /healthz

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include <httplib.h>

#include "spatialrt/checker_service.hpp"
#include "spatialrt/location_store.hpp"
#include "spatialrt/wire.hpp"

namespace spatialrt::http {

inline double wall_clock_seconds() {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
}

inline void reply_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply_json(res, status, {{"error", message}});
}

inline void register_cache_routes(httplib::Server& srv, LocationStore& store,
                                  std::function<double()> now = wall_clock_seconds) {
  srv.Put(R"(/locations/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      return reply_error(res, 400, "body is not valid JSON");
    }
    try {
      const auto status = store.update(location_from_json(req.matches[1], body));
      reply_json(res, 200, {{"status", to_string(status)}});
    } catch (const std::invalid_argument& e) {
      reply_error(res, 400, e.what());
    }
  });
  srv.Get("/locations", [&store, now](const httplib::Request&, httplib::Response& res) {
    reply_json(res, 200, snapshot_to_json(store.snapshot(now())));
  });
  srv.Get(R"(/locations/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    if (auto loc = store.get(req.matches[1])) return reply_json(res, 200, location_to_json(*loc));
    reply_error(res, 404, "unknown entity");
  });
  srv.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });
}

inline void register_checker_routes(httplib::Server& srv, CheckerService& service) {
  srv.Post("/check", [&service](const httplib::Request& req, httplib::Response& res) {
    CheckRequest creq;
    try {
      creq = request_from_json(json::parse(req.body));
    } catch (const json::exception&) {
      return reply_error(res, 400, "body is not valid JSON");
    } catch (const WireError& e) {
      return reply_error(res, 400, e.what());
    }
    try {
      reply_json(res, 200, result_to_json(service.handle_check(creq)));
    } catch (const ServiceError& e) {
      json body = {{"error", e.what()}};
      if (e.position()) body["position"] = *e.position();
      reply_json(res, e.status(), body);
    } catch (const std::exception& e) {
      reply_error(res, 500, e.what());
    }
  });
  srv.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });
  srv.Get("/metrics", [&service](const httplib::Request&, httplib::Response& res) {
    reply_json(res, 200, service.metrics());
  });
}

/// Snapshot source that issues one GET /locations per call.
inline SnapshotSource cache_snapshot_source(const std::string& base_url) {
  return [base_url]() -> Snapshot {
    httplib::Client cli(base_url);
    cli.set_connection_timeout(5);
    cli.set_read_timeout(10);
    auto res = cli.Get("/locations");
    if (!res) throw std::runtime_error("location cache unreachable: " + httplib::to_string(res.error()));
    if (res->status != 200) throw std::runtime_error("location cache answered " + std::to_string(res->status));
    return snapshot_from_json(json::parse(res->body));
  };
}

/// An httplib server running on a background thread, bound to an ephemeral
/// or fixed port on the loopback or given host. Stops on destruction.
class BackgroundServer {
 public:
  explicit BackgroundServer(std::function<void(httplib::Server&)> setup, const std::string& host = "127.0.0.1",
                            int port = 0)
      : srv_(std::make_unique<httplib::Server>()) {
    setup(*srv_);
    port_ = port == 0 ? srv_->bind_to_any_port(host) : (srv_->bind_to_port(host, port) ? port : -1);
    if (port_ <= 0) throw std::runtime_error("cannot bind HTTP server on " + host);
    thread_ = std::thread([this] { srv_->listen_after_bind(); });
    srv_->wait_until_ready();
    url_ = "http://" + host + ":" + std::to_string(port_);
  }

  BackgroundServer(const BackgroundServer&) = delete;
  BackgroundServer& operator=(const BackgroundServer&) = delete;

  ~BackgroundServer() {
    srv_->stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const noexcept { return port_; }
  const std::string& url() const noexcept { return url_; }

 private:
  std::unique_ptr<httplib::Server> srv_;
  std::thread thread_;
  int port_ = -1;
  std::string url_;
};

}  // namespace spatialrt::http

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

#include <chrono>
#include <thread>

#include <gtest/gtest.h>

#include "spatialrt/checker_service.hpp"
#include "spatialrt/fixtures.hpp"
#include "spatialrt/http.hpp"
#include "spatialrt/ingest.hpp"
#include "spatialrt/replay.hpp"

namespace srt = spatialrt;

namespace {

srt::Snapshot bikes_at(std::initializer_list<std::pair<const char*, const char*>> at) {
  srt::Snapshot s;
  for (auto [e, poi] : at) s.entities[e] = {e, poi, 1};
  s.snapshot_ts = 1;
  return s;
}

srt::CheckRequest bike_request(srt::Snapshot snap, srt::CheckMode mode = srt::CheckMode::boolean) {
  srt::CheckRequest r;
  r.formula = srt::fixtures::kBikeToMainSquare;
  r.snapshot = std::move(snap);
  r.mode = mode;
  r.presence_prop = "bike";
  return r;
}

}  // namespace

TEST(Wire, RequestRoundTrip) {
  auto r = bike_request(bikes_at({{"b1", "museum"}}), srt::CheckMode::points);
  const auto back = srt::request_from_json(srt::request_to_json(r));
  EXPECT_EQ(back.formula, r.formula);
  EXPECT_EQ(back.snapshot, r.snapshot);
  EXPECT_EQ(back.mode, srt::CheckMode::points);
  EXPECT_EQ(back.presence_prop, "bike");
  EXPECT_EQ(srt::request_from_json({{"formula", "true"}}).presence_prop, "taxi");
  EXPECT_THROW(srt::request_from_json({{"formula", 3}}), srt::WireError);
  EXPECT_THROW(srt::request_from_json({{"formula", "a"}, {"mode", "loud"}}), srt::WireError);
}

TEST(CheckerService, VerdictsAndTimings) {
  srt::CheckerService svc(srt::fixtures::mini_city(), {2, 16, 8});
  srt::CheckRequest top;
  top.formula = "true";
  top.snapshot = srt::Snapshot{};
  const auto r = svc.handle_check(top);
  EXPECT_TRUE(r.satisfied);
  EXPECT_GE(r.compute_ms, 0);
  EXPECT_GE(r.wait_ms, 0);
  EXPECT_EQ(r.model_version, srt::fixtures::mini_city().version_string());
  EXPECT_FALSE(r.points);

  EXPECT_FALSE(svc.handle_check(bike_request(bikes_at({{"b1", "museum"}}))).satisfied);
  const auto pts = svc.handle_check(bike_request(bikes_at({{"b1", "bus_stop1"}}), srt::CheckMode::points));
  EXPECT_TRUE(pts.satisfied);
  EXPECT_EQ(*pts.points, std::vector<std::string>{"bus_stop1"});
}

TEST(CheckerService, PointsMatchLibraryOnSynthModel) {
  const auto model = srt::synth_model(400, 1500, 1200, 3);
  srt::CheckerService svc(model, {2, 64, 8});
  srt::Snapshot snap;
  for (int i = 0; i < 40; ++i) snap.entities["taxi" + std::to_string(i)] = {"taxi" + std::to_string(i), "poi" + std::to_string(i * 9), 0};
  srt::CheckRequest req;
  req.formula = srt::fixtures::kP2;
  req.snapshot = snap;
  req.mode = srt::CheckMode::points;
  const auto res = svc.handle_check(req);
  const auto direct = srt::sat(srt::to_valuation(snap, model, "taxi").model, srt::parse_formula(srt::fixtures::kP2));
  EXPECT_EQ(*res.points, model.space().names_of(direct));
  EXPECT_EQ(res.satisfied, !direct.empty());
}

TEST(CheckerService, ParseErrorIs400WithPosition) {
  srt::CheckerService svc(srt::fixtures::mini_city(), {1, 4, 4});
  srt::CheckRequest bad;
  bad.formula = "bike &";
  bad.snapshot = srt::Snapshot{};
  try {
    svc.handle_check(bad);
    FAIL();
  } catch (const srt::ServiceError& e) {
    EXPECT_EQ(e.status(), 400);
    EXPECT_EQ(e.position(), std::optional<std::size_t>(6));
  }
  EXPECT_EQ(svc.metrics()["errors"], 1);
}

TEST(CheckerService, SnapshotSourcing) {
  std::atomic<int> fetched{0};
  srt::CheckerService svc(srt::fixtures::mini_city(), {1, 4, 4}, [&] {
    ++fetched;
    return bikes_at({{"b1", "bus_stop1"}});
  });
  auto req = bike_request(bikes_at({{"b1", "museum"}}));
  EXPECT_FALSE(svc.handle_check(req).satisfied);
  EXPECT_EQ(fetched, 0);
  req.snapshot.reset();
  EXPECT_TRUE(svc.handle_check(req).satisfied);
  EXPECT_EQ(fetched, 1);

  srt::CheckerService failing(srt::fixtures::mini_city(), {1, 4, 4},
                              []() -> srt::Snapshot { throw std::runtime_error("down"); });
  try {
    failing.handle_check(req);
    FAIL();
  } catch (const srt::ServiceError& e) {
    EXPECT_EQ(e.status(), 502);
  }
  srt::CheckerService none(srt::fixtures::mini_city(), {1, 4, 4});
  EXPECT_THROW(none.handle_check(req), srt::ServiceError);
}

TEST(CheckerService, QueueFullIs503) {
  // A large model keeps the single worker busy while the queue fills.
  const auto model = srt::synth_model(3000, 20000, 9000, 5);
  srt::CheckerService svc(model, {1, 2, 8});
  srt::CheckRequest req;
  req.formula = srt::fixtures::kP1;
  req.snapshot = srt::Snapshot{};
  std::vector<std::future<srt::CheckResult>> pending;
  int rejected = 0;
  for (int i = 0; i < 50; ++i) {
    req.snapshot->entities["t"] = {"t", "poi" + std::to_string(i), 0};
    try {
      pending.push_back(svc.submit(req));
    } catch (const srt::ServiceError& e) {
      EXPECT_EQ(e.status(), 503);
      ++rejected;
    }
  }
  EXPECT_GT(rejected, 0);
  for (auto& f : pending) f.get();
}

TEST(CheckerService, ConcurrentCallsAgree) {
  srt::CheckerService svc(srt::fixtures::mini_city(), {4, 256, 8});
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&] {
      for (int i = 0; i < 25; ++i) {
        if (svc.handle_check(bike_request(bikes_at({{"b1", "museum"}}))).satisfied) ++mismatches;
        if (!svc.handle_check(bike_request(bikes_at({{"b2", "bridge2"}}))).satisfied) ++mismatches;
      }
    });
  for (auto& t : threads) t.join();
  EXPECT_EQ(mismatches, 0);
  const auto m = svc.metrics();
  EXPECT_EQ(m["requests"], 200);
  EXPECT_GE(m["compute_ms"]["p95"].get<double>(), m["compute_ms"]["p50"].get<double>());
}

TEST(Http, LocationCacheRoutes) {
  srt::LocationStore store;
  srt::http::BackgroundServer srv([&](httplib::Server& s) { srt::http::register_cache_routes(s, store, [] { return 42.0; }); });
  httplib::Client cli(srv.url());
  auto put = cli.Put("/locations/taxiA", R"({"poi":"museum","ts":10})", "application/json");
  ASSERT_TRUE(put);
  EXPECT_EQ(put->status, 200);
  EXPECT_EQ(srt::json::parse(put->body)["status"], "applied");
  put = cli.Put("/locations/taxiA", R"({"poi":"park","ts":5})", "application/json");
  EXPECT_EQ(srt::json::parse(put->body)["status"], "stale");
  EXPECT_EQ(cli.Put("/locations/taxiA", R"({"poi":"park"})", "application/json")->status, 400);
  EXPECT_EQ(cli.Put("/locations/taxiA", "not json", "application/json")->status, 400);

  auto all = cli.Get("/locations");
  const auto snap = srt::snapshot_from_json(srt::json::parse(all->body));
  EXPECT_EQ(snap.snapshot_ts, 42.0);
  EXPECT_EQ(snap.entities.at("taxiA").poi_id, "museum");
  EXPECT_EQ(cli.Get("/locations/taxiA")->status, 200);
  EXPECT_EQ(cli.Get("/locations/nobody")->status, 404);
  EXPECT_EQ(cli.Get("/healthz")->status, 200);
}

TEST(Http, CheckerWithCacheBackend) {
  srt::LocationStore store;
  store.update({"b1", "bus_stop1", 1});
  srt::http::BackgroundServer cache([&](httplib::Server& s) { srt::http::register_cache_routes(s, store); });
  srt::CheckerService svc(srt::fixtures::mini_city(), {2, 16, 8}, srt::http::cache_snapshot_source(cache.url()));
  srt::http::BackgroundServer checker([&](httplib::Server& s) { srt::http::register_checker_routes(s, svc); });
  httplib::Client cli(checker.url());

  srt::json body = {{"formula", srt::fixtures::kBikeToMainSquare}, {"presence_prop", "bike"}, {"mode", "points"}};
  auto res = cli.Post("/check", body.dump(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const auto out = srt::result_from_json(srt::json::parse(res->body));
  EXPECT_TRUE(out.satisfied);
  EXPECT_EQ(*out.points, std::vector<std::string>{"bus_stop1"});

  res = cli.Post("/check", R"({"formula":"a & (","snapshot":{"snapshot_ts":0,"entities":{}}})", "application/json");
  EXPECT_EQ(res->status, 400);
  EXPECT_TRUE(srt::json::parse(res->body).contains("position"));
  EXPECT_EQ(cli.Post("/check", "{", "application/json")->status, 400);
  EXPECT_EQ(cli.Get("/healthz")->status, 200);
  const auto metrics = srt::json::parse(cli.Get("/metrics")->body);
  EXPECT_EQ(metrics["model_version"], svc.model_version());
}

TEST(Http, UnreachableCacheIs502) {
  int dead_port = 0;
  {
    srt::http::BackgroundServer tmp([](httplib::Server&) {});
    dead_port = tmp.port();
  }
  srt::CheckerService svc(srt::fixtures::mini_city(), {1, 4, 4},
                          srt::http::cache_snapshot_source("http://127.0.0.1:" + std::to_string(dead_port)));
  srt::http::BackgroundServer checker([&](httplib::Server& s) { srt::http::register_checker_routes(s, svc); });
  httplib::Client cli(checker.url());
  auto res = cli.Post("/check", R"({"formula":"true"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 502);
}

TEST(ReplayHttp, RecordsEveryRequest) {
  const auto model = srt::synth_model(200, 600, 400, 1);
  srt::CheckerService svc(model, {2, 64, 8});
  srt::http::BackgroundServer checker([&](httplib::Server& s) { srt::http::register_checker_routes(s, svc); });
  srt::TraceOptions to;
  to.pois = model.space().ids();
  const auto trace = srt::steady_trace(30, 60, to);
  const auto records = srt::replay_http(trace, 60, checker.url(), {8, 30, "taxi"});
  ASSERT_EQ(records.size(), 30u);
  double last_submit = 0;
  for (const auto& r : records) {
    EXPECT_FALSE(r.error);
    EXPECT_LE(r.submit, r.start);
    EXPECT_LE(r.start, r.end);
    last_submit = std::max(last_submit, r.submit);
  }
  EXPECT_NEAR(last_submit, 1.0, 0.25);
}

TEST(ReplayHttp, UnreachableTargetYieldsErrorRecords) {
  int dead_port = 0;
  {
    srt::http::BackgroundServer tmp([](httplib::Server&) {});
    dead_port = tmp.port();
  }
  const auto trace = srt::steady_trace(5, 1);
  const auto records = srt::replay_http(trace, 1, "http://127.0.0.1:" + std::to_string(dead_port), {2, 2, "taxi"});
  ASSERT_EQ(records.size(), 5u);
  for (const auto& r : records) EXPECT_TRUE(r.error || r.timed_out);
}

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

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "spatialrt/fixtures.hpp"
#include "spatialrt/location_store.hpp"
#include "spatialrt/records.hpp"
#include "spatialrt/simulator.hpp"
#include "spatialrt/wire.hpp"
#include "spatialrt/workload.hpp"

namespace spatialrt {

/// Formula text for a trace `formula_ref`: P1, P2, P3 and `bike-route` name the
/// bundled properties, anything else is taken as formula text.
inline std::string resolve_formula(const std::string& ref) {
  static const std::map<std::string, std::string> named = {{"P1", fixtures::kP1},
                                                            {"P2", fixtures::kP2},
                                                            {"P3", fixtures::kP3},
                                                            {"bike-route", fixtures::kBikeToMainSquare}};
  auto it = named.find(ref);
  return it == named.end() ? ref : it->second;
}

/// Replays a trace against a simulated deployment in virtual time.
inline sim::SimResult replay_sim(const WorkloadTrace& trace, double multiplier, const sim::Deployment& deployment,
                                 std::uint64_t seed = 0) {
  trace.validate();
  return sim::simulate(trace.arrivals(multiplier), deployment, seed);
}

struct HttpReplayOptions {
  std::size_t concurrency = 64;
  double timeout_s = 120;
  std::string presence_prop = "taxi";
};

/// Replays a trace against a running checker in real time. Each request is
/// sent at offset / multiplier seconds after the run starts (later when all
/// `concurrency` senders are busy) and carries a snapshot of the locations
/// replayed so far, the request's own entity included. Times in the records
/// are seconds from the run start; `start` is derived from the compute time
/// the service reports. Failed or timed-out calls yield error records.
inline std::vector<RequestRecord> replay_http(const WorkloadTrace& trace, double multiplier, const std::string& url,
                                              const HttpReplayOptions& opts = {}) {
  trace.validate();
  const auto schedule = trace.arrivals(multiplier);
  if (opts.concurrency == 0) throw std::invalid_argument("concurrency cap must be positive");
  std::vector<RequestRecord> records(trace.size());
  // Snapshots are prebuilt so each request sees exactly the trace prefix.
  std::vector<Snapshot> snapshots;
  snapshots.reserve(trace.size());
  {
    LocationStore store;
    for (const auto& e : trace.entries) {
      store.update({e.entity_id, e.poi_id, e.offset_s});
      snapshots.push_back(store.snapshot(e.offset_s));
    }
  }

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto since = [t0] { return std::chrono::duration<double>(Clock::now() - t0).count(); };
  std::atomic<std::size_t> next{0};

  auto sender = [&] {
    httplib::Client cli(url);
    const auto secs = static_cast<time_t>(opts.timeout_s);
    const auto usecs = static_cast<time_t>((opts.timeout_s - static_cast<double>(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= trace.size()) return;
      std::this_thread::sleep_until(t0 + std::chrono::duration_cast<Clock::duration>(
                                             std::chrono::duration<double>(schedule[i])));
      CheckRequest req;
      req.formula = resolve_formula(trace.entries[i].formula_ref);
      req.snapshot = snapshots[i];
      req.presence_prop = opts.presence_prop;
      const std::string body = request_to_json(req).dump();
      RequestRecord& r = records[i];
      r.backend = url;
      r.submit = since();
      auto res = cli.Post("/check", body, "application/json");
      r.end = since();
      r.start = r.end;
      if (!res) {
        r.timed_out = res.error() == httplib::Error::Read || r.end - r.submit >= opts.timeout_s;
        r.error = !r.timed_out;
        if (r.timed_out) r.start = r.end = r.submit + opts.timeout_s;
        continue;
      }
      if (res->status != 200) {
        r.error = true;
        continue;
      }
      try {
        const auto result = result_from_json(json::parse(res->body));
        r.start = std::max(r.submit, r.end - result.compute_ms / 1000.0);
      } catch (const std::exception&) {
        r.error = true;
      }
    }
  };

  const std::size_t n = std::min(opts.concurrency, trace.size());
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t k = 0; k < n; ++k) pool.emplace_back(sender);
  for (auto& t : pool) t.join();
  return records;
}

}  // namespace spatialrt

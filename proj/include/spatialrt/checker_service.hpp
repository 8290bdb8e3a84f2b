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
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "spatialrt/checker.hpp"
#include "spatialrt/formula.hpp"
#include "spatialrt/location_store.hpp"
#include "spatialrt/lru.hpp"
#include "spatialrt/wire.hpp"

namespace spatialrt {

/// Request failure carrying the HTTP status the checker endpoint reports.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what, std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(what), status_(status), position_(position) {}
  int status() const noexcept { return status_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  int status_;
  std::optional<std::size_t> position_;
};

struct CheckerOptions {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::size_t queue_capacity = 1024;
  std::size_t formula_cache = 256;
};

/// Produces the current global state when a request carries no snapshot.
/// Throws on failure.
using SnapshotSource = std::function<Snapshot()>;

/// The model-checker service: a fixed worker pool behind a bounded FIFO queue
/// evaluating requests against one immutable model.
///
/// wait_ms runs from enqueue to worker pickup, compute_ms from pickup to the
/// end of evaluation. Snapshots are frozen when the request arrives.
class CheckerService {
 public:
  CheckerService(ClosureModel model, CheckerOptions opts = {}, SnapshotSource source = {})
      : model_(std::move(model)),
        opts_(opts),
        source_(std::move(source)),
        formulas_(opts.formula_cache),
        sat_cache_(256) {
    if (opts_.workers == 0) throw std::invalid_argument("checker needs at least one worker");
    if (opts_.queue_capacity == 0) throw std::invalid_argument("checker queue capacity must be positive");
    for (std::size_t i = 0; i < opts_.workers; ++i) workers_.emplace_back([this] { work(); });
  }

  CheckerService(const CheckerService&) = delete;
  CheckerService& operator=(const CheckerService&) = delete;

  ~CheckerService() {
    {
      std::lock_guard lock(mu_);
      stopping_ = true;
    }
    cv_.notify_all();
    for (auto& w : workers_) w.join();
  }

  const ClosureModel& model() const noexcept { return model_; }
  std::string model_version() const { return model_.version_string(); }

  /// Admits a request. Parse, snapshot and admission failures throw
  /// ServiceError right away; evaluation completes on the returned future.
  std::future<CheckResult> submit(const CheckRequest& req) {
    count_request();
    try {
      Formula f = parse_cached(req.formula);
      Snapshot snap = freeze_snapshot(req);
      Job job{std::move(f), std::move(snap), req.mode, req.presence_prop, Clock::now(), {}};
      auto fut = job.done.get_future();
      {
        std::lock_guard lock(mu_);
        if (queue_.size() >= opts_.queue_capacity) throw ServiceError(503, "checker queue is full");
        queue_.push_back(std::move(job));
      }
      cv_.notify_one();
      return fut;
    } catch (...) {
      count_error();
      throw;
    }
  }

  CheckResult handle_check(const CheckRequest& req) { return submit(req).get(); }

  json metrics() const {
    std::lock_guard lock(metrics_mu_);
    std::vector<double> sorted(compute_samples_.begin(), compute_samples_.end());
    std::sort(sorted.begin(), sorted.end());
    auto pct = [&](double q) -> double {
      if (sorted.empty()) return 0;
      const auto idx = static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1));
      return sorted[idx];
    };
    return {{"requests", requests_},
            {"errors", errors_},
            {"compute_ms", {{"p50", pct(0.5)}, {"p95", pct(0.95)}}},
            {"model_version", model_version()}};
  }

 private:
  using Clock = std::chrono::steady_clock;

  struct Job {
    Formula formula;
    Snapshot snapshot;
    CheckMode mode;
    std::string presence_prop;
    Clock::time_point enqueued;
    std::promise<CheckResult> done;
  };

  Formula parse_cached(const std::string& text) {
    if (auto f = formulas_.find(text)) return *f;
    try {
      Formula f = parse_formula(text);
      formulas_.store(text, f);
      return f;
    } catch (const FormulaSyntaxError& e) {
      throw ServiceError(400, e.what(), e.position());
    }
  }

  Snapshot freeze_snapshot(const CheckRequest& req) {
    if (req.snapshot) return *req.snapshot;
    if (!source_) throw ServiceError(400, "request has no snapshot and no location cache is configured");
    try {
      return source_();
    } catch (const std::exception& e) {
      throw ServiceError(502, std::string("snapshot fetch failed: ") + e.what());
    }
  }

  void work() {
    for (;;) {
      std::optional<Job> next;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
        if (queue_.empty()) return;
        next.emplace(std::move(queue_.front()));
        queue_.pop_front();
      }
      Job& job = *next;
      const auto picked = Clock::now();
      try {
        auto refreshed = to_valuation(job.snapshot, model_, job.presence_prop);
        PointSet points = sat(refreshed.model, job.formula, &sat_cache_);
        const auto finished = Clock::now();
        CheckResult r;
        r.satisfied = !points.empty();
        if (job.mode == CheckMode::points) r.points = model_.space().names_of(points);
        r.wait_ms = std::chrono::duration<double, std::milli>(picked - job.enqueued).count();
        r.compute_ms = std::chrono::duration<double, std::milli>(finished - picked).count();
        r.model_version = model_version();
        record_compute(r.compute_ms);
        job.done.set_value(std::move(r));
      } catch (...) {
        count_error();
        job.done.set_exception(std::current_exception());
      }
    }
  }

  void count_request() {
    std::lock_guard lock(metrics_mu_);
    ++requests_;
  }
  void count_error() {
    std::lock_guard lock(metrics_mu_);
    ++errors_;
  }
  void record_compute(double ms) {
    std::lock_guard lock(metrics_mu_);
    compute_samples_.push_back(ms);
    if (compute_samples_.size() > 4096) compute_samples_.pop_front();
  }

  const ClosureModel model_;
  const CheckerOptions opts_;
  SnapshotSource source_;
  LruCache<std::string, Formula> formulas_;
  SatCache sat_cache_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Job> queue_;
  bool stopping_ = false;
  std::vector<std::thread> workers_;

  mutable std::mutex metrics_mu_;
  std::size_t requests_ = 0;
  std::size_t errors_ = 0;
  std::deque<double> compute_samples_;
};

}  // namespace spatialrt

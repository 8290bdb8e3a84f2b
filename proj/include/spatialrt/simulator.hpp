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

// Discrete-event model of the deployment alternatives: a fixed server pool
// (monolith VM, container cluster), an elastic function backend, a device
// that serves one request at a time, and a hybrid that overflows from a
// baseline pool to an elastic backend.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "spatialrt/records.hpp"

namespace spatialrt::sim {

struct Constant {
  double seconds = 0;
};
struct Uniform {
  double lo = 0;
  double hi = 0;
};
struct LogNormal {
  double mu = 0;
  double sigma = 0;
};
using ServiceTime = std::variant<Constant, Uniform, LogNormal>;

inline double mean(const ServiceTime& st) {
  return std::visit(
      [](const auto& d) -> double {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, Constant>) return d.seconds;
        if constexpr (std::is_same_v<D, Uniform>) return (d.lo + d.hi) / 2;
        if constexpr (std::is_same_v<D, LogNormal>) return std::exp(d.mu + d.sigma * d.sigma / 2);
      },
      st);
}

inline double draw(const ServiceTime& st, std::mt19937_64& rng) {
  // Draws from raw 53-bit uniforms so results only depend on the engine.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  return std::visit(
      [&](const auto& d) -> double {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, Constant>) {
          return d.seconds;
        } else if constexpr (std::is_same_v<D, Uniform>) {
          return d.lo + (d.hi - d.lo) * unit();
        } else {
          // Box-Muller on two uniforms in (0, 1].
          const double u1 = 1.0 - unit();
          const double u2 = unit();
          const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * 3.14159265358979323846 * u2);
          return std::exp(d.mu + d.sigma * z);
        }
      },
      st);
}

enum class BackendKind { fixed_pool, elastic, sequential_device };

struct BackendModel {
  std::string label = "backend";
  BackendKind kind = BackendKind::fixed_pool;
  /// Servers at time zero (fixed_pool).
  std::size_t capacity = 1;
  ServiceTime service_time = Constant{1.0};
  /// Delay before an elastic instance starts computing.
  double cold_start = 0;
  /// fixed_pool autoscale: one `scale_step` of servers is added per
  /// `scale_up_delay` seconds while requests are queued. 0 disables.
  double scale_up_delay = 0;
  std::size_t scale_step = 1;
  std::size_t max_capacity = 0;
  /// elastic: optional bound on simultaneous instances; 0 is unbounded.
  std::size_t concurrency_limit = 0;
  /// Requests not answered within this many seconds are recorded as timed
  /// out, with end = submit + timeout.
  std::optional<double> timeout;

  void validate() const {
    if (kind == BackendKind::fixed_pool && capacity < 1) throw std::invalid_argument(label + ": capacity must be >= 1");
    if (cold_start < 0 || scale_up_delay < 0) throw std::invalid_argument(label + ": times must be >= 0");
    if (timeout && !(*timeout > 0)) throw std::invalid_argument(label + ": timeout must be positive");
    const bool bad = std::visit(
        [](const auto& d) {
          using D = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<D, Constant>) return d.seconds < 0;
          if constexpr (std::is_same_v<D, Uniform>) return d.lo < 0 || d.hi < d.lo;
          if constexpr (std::is_same_v<D, LogNormal>) return d.sigma < 0;
        },
        service_time);
    if (bad) throw std::invalid_argument(label + ": invalid service time distribution");
  }
};

struct HybridPolicy {
  /// Requests go to the elastic backend when (in_flight + 1) / capacity of
  /// the baseline pool, counted at arrival and including the arriving
  /// request, exceeds this value.
  double threshold = 0.9;
  /// Relay latency the dispatcher adds to every request it routes. It is
  /// charged to the client-visible wait; backends see the request at its
  /// arrival instant.
  double dispatch_overhead = 0.3;
};

struct Hybrid {
  BackendModel baseline;
  BackendModel elastic;
  HybridPolicy policy;
};

using Deployment = std::variant<BackendModel, Hybrid>;

struct SimResult {
  std::vector<RequestRecord> records;
  std::size_t routed_baseline = 0;
  std::size_t routed_elastic = 0;
  bool hybrid = false;
};

/// Share of requests the hybrid dispatcher sent to the elastic backend.
inline double routing_fraction(const SimResult& r) {
  if (!r.hybrid) throw std::invalid_argument("routing fraction is only defined for hybrid runs");
  const std::size_t n = r.routed_baseline + r.routed_elastic;
  return n == 0 ? 0.0 : static_cast<double>(r.routed_elastic) / static_cast<double>(n);
}

namespace detail {

using MinHeap = std::priority_queue<double, std::vector<double>, std::greater<>>;

// One service station driven by its own event clock. Internal events are
// service completions and autoscale steps; arrivals are injected in time
// order by the caller, which first advances the station to the arrival
// instant. Queued requests are served FIFO. A queued request whose timeout
// has expired when a server frees up leaves without occupying it.
class Station {
 public:
  Station(const BackendModel& m, std::vector<RequestRecord>& sink) : m_(m), sink_(sink) {
    m_.validate();
    switch (m_.kind) {
      case BackendKind::fixed_pool:
        servers_ = m_.capacity;
        break;
      case BackendKind::sequential_device:
        servers_ = 1;
        break;
      case BackendKind::elastic:
        servers_ = m_.concurrency_limit;
        break;
    }
    unbounded_ = servers_ == 0;
    ceiling_ = m_.max_capacity == 0 ? std::numeric_limits<std::size_t>::max() : std::max(m_.max_capacity, servers_);
  }

  double capacity() const noexcept {
    return unbounded_ ? std::numeric_limits<double>::infinity() : static_cast<double>(servers_);
  }

  /// Requests admitted and not yet finished (queued or in service) at t.
  std::size_t in_flight(double t) {
    advance(t);
    std::size_t queued = 0;
    for (const auto& p : queue_)
      if (!m_.timeout || p.submit + *m_.timeout > t) ++queued;
    return busy_.size() + queued;
  }

  void arrive(std::size_t idx, double submit, double at, double service) {
    advance(at);
    if (unbounded_) {
      start(Pending{idx, submit, service}, at);
      return;
    }
    queue_.push_back(Pending{idx, submit, service});
    dispatch(at);
    if (!queue_.empty() && m_.kind == BackendKind::fixed_pool && m_.scale_up_delay > 0 && !scaling_ &&
        servers_ < ceiling_) {
      scaling_ = true;
      scale_ready_ = at + m_.scale_up_delay;
    }
  }

  void drain() { advance(std::numeric_limits<double>::infinity()); }

 private:
  struct Pending {
    std::size_t idx;
    double submit;
    double service;
  };

  void advance(double t) {
    for (;;) {
      const double completion = busy_.empty() ? std::numeric_limits<double>::infinity() : busy_.top();
      const double scale = scaling_ ? scale_ready_ : std::numeric_limits<double>::infinity();
      const double next = std::min(completion, scale);
      if (next > t || next == std::numeric_limits<double>::infinity()) return;
      if (completion <= scale) {
        busy_.pop();
      } else {
        scaling_ = false;
        for (std::size_t i = 0; i < m_.scale_step && servers_ < ceiling_; ++i) ++servers_;
        if (queue_.size() > servers_ - busy_.size() && servers_ < ceiling_) {
          scaling_ = true;
          scale_ready_ = next + m_.scale_up_delay;
        }
      }
      dispatch(next);
    }
  }

  void dispatch(double now) {
    while (!queue_.empty() && busy_.size() < servers_) {
      Pending p = queue_.front();
      queue_.pop_front();
      if (m_.timeout && now + m_.cold_start > p.submit + *m_.timeout) {
        RequestRecord& r = record(p);
        r.start = r.end = p.submit + *m_.timeout;
        r.timed_out = true;
        continue;
      }
      start(p, now);
    }
  }

  void start(const Pending& p, double now) {
    RequestRecord& r = record(p);
    r.start = now + m_.cold_start;
    r.end = r.start + p.service;
    busy_.push(r.end);
    if (m_.timeout && r.end > p.submit + *m_.timeout) {
      r.end = p.submit + *m_.timeout;
      r.start = std::min(r.start, r.end);
      r.timed_out = true;
    }
  }

  RequestRecord& record(const Pending& p) {
    RequestRecord& r = sink_[p.idx];
    r.submit = p.submit;
    r.backend = m_.label;
    return r;
  }

  BackendModel m_;
  std::vector<RequestRecord>& sink_;
  bool unbounded_ = false;
  std::size_t servers_ = 0;
  std::size_t ceiling_ = 0;
  std::deque<Pending> queue_;
  MinHeap busy_;
  bool scaling_ = false;
  double scale_ready_ = 0;
};

}  // namespace detail

/// Runs a deployment against arrival instants (seconds, nondecreasing).
/// Deterministic for a given seed.
inline SimResult simulate(const std::vector<double>& arrivals, const Deployment& deployment, std::uint64_t seed = 0) {
  if (arrivals.empty()) throw std::invalid_argument("simulation needs at least one arrival");
  if (!std::is_sorted(arrivals.begin(), arrivals.end())) throw std::invalid_argument("arrivals must be nondecreasing");
  SimResult out;
  out.records.resize(arrivals.size());
  std::mt19937_64 base_rng(seed);
  std::mt19937_64 elastic_rng(seed ^ 0x5bd1e9955bd1e995ULL);

  if (const auto* single = std::get_if<BackendModel>(&deployment)) {
    detail::Station st(*single, out.records);
    for (std::size_t i = 0; i < arrivals.size(); ++i)
      st.arrive(i, arrivals[i], arrivals[i], draw(single->service_time, base_rng));
    st.drain();
    return out;
  }

  const auto& h = std::get<Hybrid>(deployment);
  if (!(h.policy.threshold >= 0 && h.policy.threshold <= 1)) throw std::invalid_argument("threshold must be in [0,1]");
  if (h.policy.dispatch_overhead < 0) throw std::invalid_argument("dispatch overhead must be >= 0");
  out.hybrid = true;
  detail::Station base(h.baseline, out.records);
  detail::Station elastic(h.elastic, out.records);
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    const double a = arrivals[i];
    // Both draws happen for every request so routing never shifts the streams.
    const double s_base = draw(h.baseline.service_time, base_rng);
    const double s_elastic = draw(h.elastic.service_time, elastic_rng);
    const double util = static_cast<double>(base.in_flight(a) + 1) / base.capacity();
    if (util > h.policy.threshold) {
      ++out.routed_elastic;
      elastic.arrive(i, a, a, s_elastic);
    } else {
      ++out.routed_baseline;
      base.arrive(i, a, a, s_base);
    }
  }
  base.drain();
  elastic.drain();
  for (auto& r : out.records) {
    if (r.timed_out) continue;
    r.start += h.policy.dispatch_overhead;
    r.end += h.policy.dispatch_overhead;
  }
  return out;
}

}  // namespace spatialrt::sim

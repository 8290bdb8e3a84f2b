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

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "spatialrt/csv.hpp"

namespace spatialrt {

struct TraceEntry {
  double offset_s = 0;
  std::string entity_id;
  std::string poi_id;
  std::string formula_ref;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Property-evaluation requests in submission order; offsets are seconds from
/// the trace start.
struct WorkloadTrace {
  std::vector<TraceEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }

  void validate() const {
    for (std::size_t i = 1; i < entries.size(); ++i)
      if (entries[i].offset_s < entries[i - 1].offset_s) throw std::invalid_argument("trace offsets must be nondecreasing");
  }

  /// Submission instants when the trace is replayed `multiplier` times faster.
  std::vector<double> arrivals(double multiplier) const {
    if (!(multiplier > 0)) throw std::invalid_argument("rate multiplier must be positive");
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.offset_s / multiplier);
    return out;
  }

  friend bool operator==(const WorkloadTrace&, const WorkloadTrace&) = default;
};

/// Daily arrival profile: calls per three-hour bucket follow
/// trough + (peak - trough) * (1 + cos(2 pi (h - peak_hour) / 24)) / 2.
struct SineProfile {
  double peak_calls_per_3h = 0;
  double trough_calls_per_3h = 0;
  double peak_hour = 15;

  /// Expected calls per second at hour-of-day h.
  double rate_at_hour(double h) const {
    constexpr double two_pi = 2 * 3.14159265358979323846;
    const double level = trough_calls_per_3h + (peak_calls_per_3h - trough_calls_per_3h) *
                                                   (1 + std::cos(two_pi * (h - peak_hour) / 24.0)) / 2;
    return level / 10800.0;
  }
};

/// Least-squares sine fit to eight consecutive three-hour bucket counts, the
/// first bucket starting at `first_hour`.
inline SineProfile fit_sine_profile(const std::array<double, 8>& counts, double first_hour = 6) {
  constexpr double two_pi = 2 * 3.14159265358979323846;
  // Eight equally spaced samples over one period: the sinusoid basis is
  // orthogonal, so the fit reduces to discrete Fourier coefficients.
  double mean = 0, a = 0, b = 0;
  for (std::size_t k = 0; k < 8; ++k) {
    const double h = first_hour + 3.0 * static_cast<double>(k) + 1.5;
    mean += counts[k] / 8;
    a += counts[k] * std::cos(two_pi * h / 24) / 4;
    b += counts[k] * std::sin(two_pi * h / 24) / 4;
  }
  const double amp = std::hypot(a, b);
  double peak_hour = std::atan2(b, a) * 24 / two_pi;
  if (peak_hour < 0) peak_hour += 24;
  return {mean + amp, std::max(0.0, mean - amp), peak_hour};
}

struct TraceOptions {
  std::uint64_t seed = 0;
  std::size_t entities = 100;
  std::vector<std::string> pois = {"poi0"};
  std::vector<std::string> formula_refs = {"P1", "P2", "P3"};
  /// Hour of day at offset 0.
  double start_hour = 6;
};

namespace detail {

inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(n)) % n;
}

inline TraceEntry make_entry(double offset, std::mt19937_64& rng, const TraceOptions& o) {
  if (o.pois.empty() || o.formula_refs.empty() || o.entities == 0)
    throw std::invalid_argument("trace options need entities, POIs and formula refs");
  return {offset, "taxi" + std::to_string(pick(rng, o.entities)), o.pois[pick(rng, o.pois.size())],
          o.formula_refs[pick(rng, o.formula_refs.size())]};
}

}  // namespace detail

/// Non-homogeneous Poisson arrivals over `duration_s`, generated by thinning
/// a homogeneous process at the profile's peak rate.
inline WorkloadTrace synth_trace(const SineProfile& profile, double duration_s, const TraceOptions& opts = {}) {
  if (profile.peak_calls_per_3h < profile.trough_calls_per_3h || profile.trough_calls_per_3h < 0)
    throw std::invalid_argument("profile needs peak >= trough >= 0");
  WorkloadTrace trace;
  const double max_rate = profile.peak_calls_per_3h / 10800.0;
  if (max_rate <= 0 || duration_s <= 0) return trace;
  std::mt19937_64 rng(opts.seed);
  double t = 0;
  for (;;) {
    t += -std::log(1.0 - detail::unit_draw(rng)) / max_rate;
    if (t >= duration_s) break;
    const double accept = profile.rate_at_hour(opts.start_hour + t / 3600.0) / max_rate;
    if (detail::unit_draw(rng) < accept) trace.entries.push_back(detail::make_entry(t, rng, opts));
  }
  return trace;
}

/// `count` requests spread over `duration_s`: one per equal slot with a
/// uniform jitter of half a slot, the first at 0 and the last at duration_s.
inline WorkloadTrace steady_trace(std::size_t count, double duration_s, const TraceOptions& opts = {}) {
  WorkloadTrace trace;
  if (count == 0) return trace;
  std::mt19937_64 rng(opts.seed);
  const double slot = count > 1 ? duration_s / static_cast<double>(count - 1) : 0;
  for (std::size_t i = 0; i < count; ++i) {
    double off = slot * static_cast<double>(i);
    if (i > 0 && i + 1 < count) off += slot * (detail::unit_draw(rng) - 0.5);
    trace.entries.push_back(detail::make_entry(off, rng, opts));
  }
  return trace;
}

/// Trace CSV `offset_s,entity_id,poi_id,formula_ref`.
inline WorkloadTrace read_trace(std::istream& in) {
  WorkloadTrace t;
  auto rows = csv::read_rows(in);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (i == 0 && !f.empty() && f[0] == "offset_s") continue;
    if (f.size() != 4) throw csv::CsvError(rows[i].line, "expected offset_s,entity_id,poi_id,formula_ref");
    t.entries.push_back({csv::to_double(f[0], rows[i].line, "offset"), f[1], f[2], f[3]});
  }
  t.validate();
  return t;
}

inline void write_trace(std::ostream& out, const WorkloadTrace& t) {
  out << "offset_s,entity_id,poi_id,formula_ref\n";
  char buf[64];
  for (const auto& e : t.entries) {
    std::snprintf(buf, sizeof buf, "%.6f", e.offset_s);
    out << buf << ',' << csv::quote(e.entity_id) << ',' << csv::quote(e.poi_id) << ',' << csv::quote(e.formula_ref)
        << '\n';
  }
}

}  // namespace spatialrt

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
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spatialrt/csv.hpp"

namespace spatialrt {

/// One request as seen by the client: times in seconds from run start.
struct RequestRecord {
  double submit = 0;
  double start = 0;
  double end = 0;
  std::string backend;
  bool sla_violated = false;
  bool timed_out = false;
  bool error = false;

  double wait() const noexcept { return start - submit; }
  double compute() const noexcept { return end - start; }
  double total() const noexcept { return end - submit; }
};

struct SlaConfig {
  double threshold = 30.0;

  explicit SlaConfig(double t = 30.0) : threshold(t) {
    if (!(t > 0)) throw std::invalid_argument("SLA threshold must be positive");
  }
  /// Strict: a total exactly at the threshold meets the SLA.
  bool violated(double total) const noexcept { return total > threshold; }
};

inline void mark_sla(std::vector<RequestRecord>& records, const SlaConfig& sla) {
  for (auto& r : records) r.sla_violated = r.timed_out || r.error || sla.violated(r.total());
}

struct OrderStats {
  double max = 0;
  double min = 0;
  double median = 0;
};

struct StatSummary {
  std::size_t count = 0;
  OrderStats total, wait, compute;
  std::size_t violations_total = 0;
  bool violations_median = false;
  std::size_t timeouts = 0;
  std::size_t errors = 0;
};

namespace detail {

// Median is the lower middle element for even counts.
inline OrderStats order_stats(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return {v.back(), v.front(), v[(v.size() - 1) / 2]};
}

}  // namespace detail

inline StatSummary summarize(const std::vector<RequestRecord>& records, const SlaConfig& sla) {
  if (records.empty()) throw std::invalid_argument("cannot summarize an empty record set");
  std::vector<double> total, wait, compute;
  StatSummary s;
  s.count = records.size();
  for (const auto& r : records) {
    total.push_back(r.total());
    wait.push_back(r.wait());
    compute.push_back(r.compute());
    if (r.timed_out || r.error || sla.violated(r.total())) ++s.violations_total;
    s.timeouts += r.timed_out ? 1 : 0;
    s.errors += r.error ? 1 : 0;
  }
  s.total = detail::order_stats(std::move(total));
  s.wait = detail::order_stats(std::move(wait));
  s.compute = detail::order_stats(std::move(compute));
  s.violations_median = sla.violated(s.total.median);
  return s;
}

inline constexpr const char* kRecordCsvHeader = "submit,start,end,wait,compute,total,backend,timed_out,error,sla_violated";

inline void write_records(std::ostream& out, const std::vector<RequestRecord>& records) {
  out << kRecordCsvHeader << '\n';
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,", r.submit, r.start, r.end, r.wait(), r.compute(),
                  r.total());
    out << buf << csv::quote(r.backend) << ',' << int(r.timed_out) << ',' << int(r.error) << ','
        << int(r.sla_violated) << '\n';
  }
}

inline std::vector<RequestRecord> read_records(std::istream& in) {
  std::vector<RequestRecord> out;
  auto rows = csv::read_rows(in);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (i == 0 && !f.empty() && f[0] == "submit") continue;
    if (f.size() != 10) throw csv::CsvError(rows[i].line, "expected 10 record fields");
    RequestRecord r;
    r.submit = csv::to_double(f[0], rows[i].line, "submit");
    r.start = csv::to_double(f[1], rows[i].line, "start");
    r.end = csv::to_double(f[2], rows[i].line, "end");
    r.backend = f[6];
    r.timed_out = f[7] == "1";
    r.error = f[8] == "1";
    r.sla_violated = f[9] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace spatialrt

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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spatialrt/csv.hpp"
#include "spatialrt/space.hpp"

namespace spatialrt {

inline constexpr double kEarthRadiusMeters = 6371000.0;
inline constexpr double kDefaultMatchRadiusMeters = 10.0;

struct LatLon {
  double lat = 0;
  double lon = 0;
};

/// Great-circle distance in meters.
inline double haversine(LatLon a, LatLon b) {
  constexpr double deg = 3.14159265358979323846 / 180.0;
  const double dlat = (b.lat - a.lat) * deg;
  const double dlon = (b.lon - a.lon) * deg;
  const double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.lat * deg) * std::cos(b.lat * deg) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(s)));
}

struct Poi {
  std::string id;
  std::string name;
  std::string category;
  double lat = 0;
  double lon = 0;

  LatLon position() const { return {lat, lon}; }
};

struct TrajectorySample {
  std::string entity_id;
  std::int64_t timestamp = 0;
  double lat = 0;
  double lon = 0;
};

struct PresenceEvent {
  std::string entity_id;
  std::int64_t timestamp = 0;
  std::string poi_id;

  friend bool operator==(const PresenceEvent&, const PresenceEvent&) = default;
};

inline void validate_coordinates(double lat, double lon) {
  if (!(lat >= -90 && lat <= 90) || !(lon >= -180 && lon <= 180))
    throw std::invalid_argument("coordinates out of range: " + std::to_string(lat) + "," + std::to_string(lon));
}

/// Epoch seconds, or "YYYY-MM-DD HH:MM:SS" read as UTC.
inline std::int64_t parse_timestamp(const std::string& text) {
  if (csv::looks_numeric(text)) return static_cast<std::int64_t>(std::llround(std::stod(text)));
  std::tm tm{};
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tail = 0;
  const int n = std::sscanf(text.c_str(), "%d-%d-%d%*[ T]%d:%d:%d%c", &y, &mo, &d, &h, &mi, &s, &tail);
  if (n != 6 || mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60)
    throw std::invalid_argument("unrecognized timestamp '" + text + "'");
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = s;
  return static_cast<std::int64_t>(timegm(&tm));
}

namespace detail {

// Buckets POIs on a lat/lon grid whose cells are at least `radius` wide, so a
// sample only needs to look at neighbouring cells.
class PoiGrid {
 public:
  PoiGrid(const std::vector<Poi>& pois, double radius) : pois_(pois) {
    cell_ = std::max(radius / (kEarthRadiusMeters * 3.14159265358979323846 / 180.0), 1e-6);
    cols_ = static_cast<std::int64_t>(std::ceil(360.0 / cell_));
    for (std::size_t i = 0; i < pois.size(); ++i) cells_[key(row(pois[i].lat), col(pois[i].lon))].push_back(i);
  }

  template <typename Fn>
  void candidates(LatLon p, Fn&& fn) const {
    const double c = std::cos(p.lat * 3.14159265358979323846 / 180.0);
    const std::int64_t span = c < 1e-3 ? cols_ : static_cast<std::int64_t>(std::ceil(1.0 / c)) + 1;
    const std::int64_t r0 = row(p.lat);
    const std::int64_t c0 = col(p.lon);
    std::set<std::int64_t> seen;
    for (std::int64_t dr = -1; dr <= 1; ++dr) {
      for (std::int64_t dc = -std::min(span, cols_); dc <= std::min(span, cols_); ++dc) {
        const std::int64_t cc = ((c0 + dc) % cols_ + cols_) % cols_;
        const std::int64_t k = key(r0 + dr, cc);
        if (!seen.insert(k).second) continue;
        if (auto it = cells_.find(k); it != cells_.end())
          for (std::size_t i : it->second) fn(i);
      }
    }
  }

 private:
  std::int64_t row(double lat) const { return static_cast<std::int64_t>(std::floor((lat + 90.0) / cell_)); }
  std::int64_t col(double lon) const {
    return ((static_cast<std::int64_t>(std::floor((lon + 180.0) / cell_)) % cols_) + cols_) % cols_;
  }
  std::int64_t key(std::int64_t r, std::int64_t c) const { return r * cols_ + c; }

  const std::vector<Poi>& pois_;
  double cell_;
  std::int64_t cols_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

}  // namespace detail

/// Emits a presence for every (sample, POI) pair closer than `radius` meters.
///
/// Samples are sorted by (entity, timestamp) first. A POI matched by a sample
/// is not emitted again while the entity's immediately preceding sample
/// also matched it. Output is sorted by (entity, timestamp, POI catalog order).
inline std::vector<PresenceEvent> match_presences(const std::vector<Poi>& pois,
                                                  std::vector<TrajectorySample> samples,
                                                  double radius = kDefaultMatchRadiusMeters) {
  if (pois.empty()) throw std::invalid_argument("empty POI catalog");
  if (!(radius > 0)) throw std::invalid_argument("match radius must be positive");
  std::sort(samples.begin(), samples.end(), [](const TrajectorySample& a, const TrajectorySample& b) {
    return std::tie(a.entity_id, a.timestamp, a.lat, a.lon) < std::tie(b.entity_id, b.timestamp, b.lat, b.lon);
  });
  detail::PoiGrid grid(pois, radius);
  std::vector<PresenceEvent> out;
  std::vector<std::size_t> previous, current;
  const std::string* last_entity = nullptr;
  for (const auto& s : samples) {
    if (!last_entity || *last_entity != s.entity_id) previous.clear();
    last_entity = &s.entity_id;
    current.clear();
    grid.candidates({s.lat, s.lon}, [&](std::size_t i) {
      if (haversine({s.lat, s.lon}, pois[i].position()) < radius) current.push_back(i);
    });
    std::sort(current.begin(), current.end());
    for (std::size_t i : current) {
      if (!std::binary_search(previous.begin(), previous.end(), i)) out.push_back({s.entity_id, s.timestamp, pois[i].id});
    }
    std::swap(previous, current);
  }
  return out;
}

namespace detail {

inline void add_transitions(SpaceGraph::Builder& b, std::vector<PresenceEvent> presences) {
  std::stable_sort(presences.begin(), presences.end(), [](const PresenceEvent& x, const PresenceEvent& y) {
    return std::tie(x.entity_id, x.timestamp) < std::tie(y.entity_id, y.timestamp);
  });
  for (std::size_t i = 0; i < presences.size(); ++i) {
    const PointIndex here = b.ensure_point(presences[i].poi_id);
    if (i == 0 || presences[i - 1].entity_id != presences[i].entity_id) continue;
    const PointIndex before = b.ensure_point(presences[i - 1].poi_id);
    if (before != here) b.add_edge(before, here);
  }
}

}  // namespace detail

/// Accessibility graph: an undirected edge joins POIs visited one after the
/// other by some entity.
inline SpaceGraph build_accessibility(const std::vector<PresenceEvent>& presences) {
  SpaceGraph::Builder b(true);
  detail::add_transitions(b, presences);
  return b.build();
}

/// As above, but every catalog POI becomes a point even if never visited.
inline SpaceGraph build_accessibility(const std::vector<PresenceEvent>& presences, const std::vector<Poi>& catalog) {
  SpaceGraph::Builder b(true);
  for (const auto& p : catalog) b.ensure_point(p.id);
  for (const auto& e : presences) {
    if (!b.has_point(e.poi_id)) throw std::invalid_argument("presence references unknown POI '" + e.poi_id + "'");
  }
  detail::add_transitions(b, presences);
  return b.build();
}

/// Closure model over an accessibility graph whose static layer maps each POI
/// category to the POIs carrying it.
inline ClosureModel model_from_catalog(SpaceGraph graph, const std::vector<Poi>& catalog) {
  Valuation val;
  for (const auto& p : catalog) {
    if (p.category.empty()) continue;
    auto idx = graph.find(p.id);
    if (!idx) continue;
    val.try_emplace(p.category, graph.size()).first->second.insert(*idx);
  }
  return ClosureModel(std::move(graph), std::move(val));
}

/// Categories used by the synthetic generator; includes every category the
/// bundled P1-P3 properties mention.
inline const std::vector<std::string>& synthetic_categories() {
  static const std::vector<std::string> cats = {
      "HEALTHHOSPITAL",    "TRANSPORTSUBWAY", "TRANSPORTBUSSTOP", "DEPARTMENTSTORE", "ACCOMMOHOTEL",
      "FOODRESTAURANT",    "TOURISTATTRACTION", "TOURISTZOO",     "EDUCATIONSCHOOL", "FOODCAFE",
      "SHOPSUPERMARKET",   "LEISUREPARK",     "FINANCEBANK",      "PUBLICLIBRARY",   "TRANSPORTPARKING",
      "ACCOMMOHOSTEL",     "WORSHIPTEMPLE",   "HEALTHPHARMACY",   "SPORTSTADIUM",    "GOVERNMENTOFFICE"};
  return cats;
}

namespace detail {

inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection sampling keeps the draw uniform and platform independent.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

}  // namespace detail

/// Seeded connected random symmetric model with exactly `edges` undirected
/// edges and `assignments` (point, category) proposition assignments.
inline ClosureModel synth_model(std::size_t nodes, std::size_t edges, std::size_t assignments, std::uint64_t seed) {
  if (nodes == 0) throw std::invalid_argument("synthetic model needs at least one node");
  const std::size_t max_edges = nodes * (nodes - 1) / 2;
  if (edges + 1 < nodes) throw std::invalid_argument("too few edges to connect the graph");
  if (edges > max_edges) throw std::invalid_argument("more edges than a simple graph admits");
  const auto& cats = synthetic_categories();
  if (assignments > nodes * cats.size()) throw std::invalid_argument("more assignments than (node, category) pairs");

  std::mt19937_64 rng(seed);
  SpaceGraph::Builder b(true);
  for (std::size_t i = 0; i < nodes; ++i) b.add_point("poi" + std::to_string(i));

  std::vector<PointIndex> order(nodes);
  for (std::size_t i = 0; i < nodes; ++i) order[i] = static_cast<PointIndex>(i);
  for (std::size_t i = nodes; i > 1; --i) std::swap(order[i - 1], order[detail::draw_below(rng, i)]);

  std::unordered_set<std::uint64_t> present;
  auto add = [&](PointIndex a, PointIndex c) {
    const std::uint64_t k = (std::uint64_t{std::min(a, c)} << 32) | std::max(a, c);
    if (a == c || !present.insert(k).second) return false;
    b.add_edge(a, c);
    return true;
  };
  for (std::size_t k = 1; k < nodes; ++k) add(order[k], order[detail::draw_below(rng, k)]);
  if (edges > max_edges / 2) {
    // Dense request: enumerate the missing pairs and pick among them.
    std::vector<std::uint64_t> missing;
    for (PointIndex a = 0; a < nodes; ++a)
      for (PointIndex c = a + 1; c < nodes; ++c)
        if (!present.count((std::uint64_t{a} << 32) | c)) missing.push_back((std::uint64_t{a} << 32) | c);
    for (std::size_t i = missing.size(); i > 1; --i) std::swap(missing[i - 1], missing[detail::draw_below(rng, i)]);
    for (std::size_t i = 0; present.size() < edges; ++i)
      add(static_cast<PointIndex>(missing[i] >> 32), static_cast<PointIndex>(missing[i] & 0xffffffffu));
  } else {
    while (present.size() < edges)
      add(static_cast<PointIndex>(detail::draw_below(rng, nodes)), static_cast<PointIndex>(detail::draw_below(rng, nodes)));
  }
  SpaceGraph graph = b.build();

  Valuation val;
  const std::size_t base = assignments / nodes;
  const std::size_t extra = assignments % nodes;
  std::vector<std::size_t> cat_order(cats.size());
  for (std::size_t k = 0; k < nodes; ++k) {
    const PointIndex p = order[k];
    const std::size_t want = base + (k < extra ? 1 : 0);
    for (std::size_t i = 0; i < cats.size(); ++i) cat_order[i] = i;
    for (std::size_t i = 0; i < want; ++i) {
      std::swap(cat_order[i], cat_order[i + detail::draw_below(rng, cats.size() - i)]);
      val.try_emplace(cats[cat_order[i]], nodes).first->second.insert(p);
    }
  }
  return ClosureModel(std::move(graph), std::move(val));
}

/// Total number of (point, proposition) pairs in the static layer.
inline std::size_t assignment_count(const ClosureModel& m) {
  std::size_t n = 0;
  for (const auto& [_, set] : m.static_layer()) n += set.count();
  return n;
}

// ---- file formats ----

/// POI CSV with header `id,name,category,lat,lon`.
inline std::vector<Poi> read_pois(std::istream& in) {
  auto rows = csv::read_rows(in);
  std::vector<Poi> out;
  std::unordered_set<std::string> ids;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (r == 0 && !row.fields.empty() && row.fields[0] == "id") continue;
    if (row.fields.size() != 5) throw csv::CsvError(row.line, "expected id,name,category,lat,lon");
    Poi p{row.fields[0], row.fields[1], row.fields[2], csv::to_double(row.fields[3], row.line, "latitude"),
          csv::to_double(row.fields[4], row.line, "longitude")};
    try {
      validate_coordinates(p.lat, p.lon);
    } catch (const std::invalid_argument& e) {
      throw csv::CsvError(row.line, e.what());
    }
    if (!ids.insert(p.id).second) throw csv::CsvError(row.line, "duplicate POI id '" + p.id + "'");
    out.push_back(std::move(p));
  }
  return out;
}

/// Trajectory CSV with four columns: entity, timestamp and two coordinates.
///
/// A header row naming `lat` and `lon` fixes the coordinate order; without a
/// header the order is lat,lon unless `lon_first` (T-Drive files) is set.
inline std::vector<TrajectorySample> read_trajectories(std::istream& in, bool lon_first = false) {
  auto rows = csv::read_rows(in);
  std::vector<TrajectorySample> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 4) throw csv::CsvError(row.line, "expected entity_id,timestamp,<coord>,<coord>");
    if (r == 0 && !csv::looks_numeric(row.fields[2])) {
      if (row.fields[2] == "lon" && row.fields[3] == "lat") {
        lon_first = true;
      } else if (row.fields[2] == "lat" && row.fields[3] == "lon") {
        lon_first = false;
      } else {
        throw csv::CsvError(row.line, "header must name lat and lon columns");
      }
      continue;
    }
    TrajectorySample s;
    s.entity_id = row.fields[0];
    try {
      s.timestamp = parse_timestamp(row.fields[1]);
    } catch (const std::invalid_argument& e) {
      throw csv::CsvError(row.line, e.what());
    }
    const double a = csv::to_double(row.fields[2], row.line, "coordinate");
    const double b = csv::to_double(row.fields[3], row.line, "coordinate");
    s.lat = lon_first ? b : a;
    s.lon = lon_first ? a : b;
    try {
      validate_coordinates(s.lat, s.lon);
    } catch (const std::invalid_argument& e) {
      throw csv::CsvError(row.line, e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Presence CSV `entity_id,timestamp,poi_id`.
inline std::vector<PresenceEvent> read_presences(std::istream& in) {
  auto rows = csv::read_rows(in);
  std::vector<PresenceEvent> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (r == 0 && !row.fields.empty() && row.fields[0] == "entity_id") continue;
    if (row.fields.size() != 3) throw csv::CsvError(row.line, "expected entity_id,timestamp,poi_id");
    try {
      out.push_back({row.fields[0], parse_timestamp(row.fields[1]), row.fields[2]});
    } catch (const std::invalid_argument& e) {
      throw csv::CsvError(row.line, e.what());
    }
  }
  return out;
}

inline void write_presences(std::ostream& out, const std::vector<PresenceEvent>& events) {
  out << "entity_id,timestamp,poi_id\n";
  for (const auto& e : events) out << csv::quote(e.entity_id) << ',' << e.timestamp << ',' << csv::quote(e.poi_id) << '\n';
}

}  // namespace spatialrt

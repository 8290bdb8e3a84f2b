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

// JSON shapes exchanged with the location-cache and model-checker services.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spatialrt/location_store.hpp"

namespace spatialrt {

using json = nlohmann::json;

enum class CheckMode { boolean, points };

struct CheckRequest {
  std::string formula;
  std::optional<Snapshot> snapshot;
  CheckMode mode = CheckMode::boolean;
  std::string presence_prop = "taxi";
};

struct CheckResult {
  bool satisfied = false;
  std::optional<std::vector<std::string>> points;
  double compute_ms = 0;
  double wait_ms = 0;
  std::string model_version;
};

class WireError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// {"snapshot_ts": t, "entities": {"<id>": {"poi": "<poi>", "ts": t}, ...}}
inline json snapshot_to_json(const Snapshot& s) {
  json entities = json::object();
  for (const auto& [id, loc] : s.entities) entities[id] = {{"poi", loc.poi_id}, {"ts", loc.timestamp}};
  return {{"snapshot_ts", s.snapshot_ts}, {"entities", entities}};
}

inline Snapshot snapshot_from_json(const json& j) {
  if (!j.is_object()) throw WireError("snapshot must be an object");
  Snapshot s;
  if (j.contains("snapshot_ts")) {
    if (!j["snapshot_ts"].is_number()) throw WireError("snapshot_ts must be a number");
    s.snapshot_ts = j["snapshot_ts"].get<double>();
  }
  if (!j.contains("entities")) return s;
  const json& ents = j["entities"];
  if (!ents.is_object()) throw WireError("entities must be an object");
  for (const auto& [id, rec] : ents.items()) {
    if (!rec.is_object() || !rec.contains("poi") || !rec["poi"].is_string())
      throw WireError("entity '" + id + "' needs a string 'poi'");
    EntityLocation loc{id, rec["poi"].get<std::string>(), 0};
    if (rec.contains("ts")) {
      if (!rec["ts"].is_number()) throw WireError("entity '" + id + "' has a non-numeric 'ts'");
      loc.timestamp = rec["ts"].get<double>();
    }
    s.entities.emplace(id, std::move(loc));
  }
  return s;
}

inline json location_to_json(const EntityLocation& loc) { return {{"poi", loc.poi_id}, {"ts", loc.timestamp}}; }

/// Body of `PUT /locations/{entity_id}`: {"poi": "<id>", "ts": <epoch>}.
inline EntityLocation location_from_json(const std::string& entity, const json& j) {
  if (!j.is_object() || !j.contains("poi") || !j["poi"].is_string() || j["poi"].get<std::string>().empty())
    throw WireError("body needs a non-empty string 'poi'");
  if (!j.contains("ts") || !j["ts"].is_number()) throw WireError("body needs a numeric 'ts'");
  return {entity, j["poi"].get<std::string>(), j["ts"].get<double>()};
}

inline json request_to_json(const CheckRequest& r) {
  json j = {{"formula", r.formula},
            {"mode", r.mode == CheckMode::points ? "points" : "boolean"},
            {"presence_prop", r.presence_prop}};
  if (r.snapshot) j["snapshot"] = snapshot_to_json(*r.snapshot);
  return j;
}

inline CheckRequest request_from_json(const json& j) {
  if (!j.is_object()) throw WireError("request must be an object");
  CheckRequest r;
  if (!j.contains("formula") || !j["formula"].is_string()) throw WireError("request needs a string 'formula'");
  r.formula = j["formula"].get<std::string>();
  if (j.contains("mode")) {
    const auto m = j["mode"].is_string() ? j["mode"].get<std::string>() : std::string();
    if (m == "boolean") {
      r.mode = CheckMode::boolean;
    } else if (m == "points") {
      r.mode = CheckMode::points;
    } else {
      throw WireError("mode must be 'boolean' or 'points'");
    }
  }
  if (j.contains("presence_prop")) {
    if (!j["presence_prop"].is_string()) throw WireError("presence_prop must be a string");
    r.presence_prop = j["presence_prop"].get<std::string>();
  }
  if (j.contains("snapshot") && !j["snapshot"].is_null()) r.snapshot = snapshot_from_json(j["snapshot"]);
  return r;
}

inline json result_to_json(const CheckResult& r) {
  json j = {{"satisfied", r.satisfied},
            {"compute_ms", r.compute_ms},
            {"wait_ms", r.wait_ms},
            {"model_version", r.model_version}};
  if (r.points) j["points"] = *r.points;
  return j;
}

inline CheckResult result_from_json(const json& j) {
  CheckResult r;
  r.satisfied = j.at("satisfied").get<bool>();
  r.compute_ms = j.at("compute_ms").get<double>();
  r.wait_ms = j.at("wait_ms").get<double>();
  r.model_version = j.at("model_version").get<std::string>();
  if (j.contains("points")) r.points = j["points"].get<std::vector<std::string>>();
  return r;
}

}  // namespace spatialrt

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

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "spatialrt/space.hpp"

namespace spatialrt {

struct EntityLocation {
  std::string entity_id;
  std::string poi_id;
  double timestamp = 0;

  friend bool operator==(const EntityLocation&, const EntityLocation&) = default;
};

/// Immutable copy of the entity -> location map at one instant.
struct Snapshot {
  std::map<std::string, EntityLocation> entities;
  double snapshot_ts = 0;

  std::size_t size() const noexcept { return entities.size(); }
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

enum class UpdateStatus { applied, stale };

inline const char* to_string(UpdateStatus s) { return s == UpdateStatus::applied ? "applied" : "stale"; }

/// Current global entity -> POI map. Updates are last-writer-wins by the
/// device timestamp; an update with a timestamp equal to the stored one wins.
class LocationStore {
 public:
  /// `horizon`: when set, snapshots omit entities whose last update is older
  /// than `snapshot_ts - horizon` seconds.
  explicit LocationStore(std::optional<double> horizon = std::nullopt) : horizon_(horizon) {}

  UpdateStatus update(const EntityLocation& loc) {
    if (loc.entity_id.empty()) throw std::invalid_argument("entity id must be non-empty");
    if (loc.poi_id.empty()) throw std::invalid_argument("poi id must be non-empty");
    std::lock_guard lock(mu_);
    auto it = map_.find(loc.entity_id);
    if (it != map_.end() && it->second.timestamp > loc.timestamp) return UpdateStatus::stale;
    map_.insert_or_assign(loc.entity_id, loc);
    return UpdateStatus::applied;
  }

  std::optional<EntityLocation> get(const std::string& entity) const {
    std::lock_guard lock(mu_);
    if (auto it = map_.find(entity); it != map_.end()) return it->second;
    return std::nullopt;
  }

  Snapshot snapshot(double now) const {
    Snapshot s;
    s.snapshot_ts = now;
    {
      std::lock_guard lock(mu_);
      s.entities = map_;
    }
    if (horizon_) std::erase_if(s.entities, [&](const auto& kv) { return kv.second.timestamp < now - *horizon_; });
    return s;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return map_.size();
  }

 private:
  std::optional<double> horizon_;
  mutable std::mutex mu_;
  std::map<std::string, EntityLocation> map_;
};

struct ValuationRefresh {
  ClosureModel model;
  std::size_t unknown_pois = 0;
};

/// Model whose `presence_prop` holds exactly at the POIs occupied in `snap`.
/// Entities at POIs the model does not know are counted and skipped.
inline ValuationRefresh to_valuation(const Snapshot& snap, const ClosureModel& model, const std::string& presence_prop) {
  PointSet occupied(model.space().size());
  std::size_t unknown = 0;
  for (const auto& [_, loc] : snap.entities) {
    if (auto idx = model.space().find(loc.poi_id)) {
      occupied.insert(*idx);
    } else {
      ++unknown;
    }
  }
  Valuation dyn = model.dynamic_layer();
  dyn.insert_or_assign(presence_prop, std::move(occupied));
  return {model.with_dynamic(std::move(dyn)), unknown};
}

}  // namespace spatialrt

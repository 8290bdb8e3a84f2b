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
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spatialrt/point_set.hpp"

namespace spatialrt {

/// Quasi-discrete closure space induced by a binary relation over named points.
///
/// Points have a stable string id and a dense index; the index is what point
/// sets are built over. Instances are immutable once built and may be shared
/// between threads.
class SpaceGraph {
 public:
  class Builder;

  std::size_t size() const noexcept { return ids_.size(); }
  bool symmetric() const noexcept { return symmetric_; }

  const std::string& id(PointIndex i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  std::optional<PointIndex> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  PointIndex index(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw std::invalid_argument("unknown point '" + std::string(id) + "'");
  }

  /// Points y with i -> y.
  std::span<const PointIndex> successors(PointIndex i) const { return succ_.at(i); }
  /// Points x with x -> i.
  std::span<const PointIndex> predecessors(PointIndex i) const { return pred_.at(i); }

  /// Number of relation pairs; each undirected edge counts once when symmetric.
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Canonical edge list: (a, b) with a < b when symmetric, sorted.
  const std::vector<std::pair<PointIndex, PointIndex>>& edges() const noexcept { return edges_; }

  PointSet empty_set() const { return PointSet(size()); }
  PointSet full_set() const { return PointSet::full(size()); }

  PointSet set_of(std::initializer_list<std::string_view> names) const {
    PointSet s(size());
    for (auto n : names) s.insert(index(n));
    return s;
  }

  std::vector<std::string> names_of(const PointSet& s) const {
    std::vector<std::string> out;
    s.for_each([&](PointIndex i) { out.push_back(ids_[i]); });
    return out;
  }

 private:
  bool symmetric_ = true;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, PointIndex> index_;
  std::vector<std::vector<PointIndex>> succ_;
  std::vector<std::vector<PointIndex>> pred_;
  std::vector<std::pair<PointIndex, PointIndex>> edges_;
};

class SpaceGraph::Builder {
 public:
  explicit Builder(bool symmetric = true) : symmetric_(symmetric) {}

  void set_symmetric(bool s) { symmetric_ = s; }

  PointIndex add_point(std::string id) {
    if (id.empty()) throw std::invalid_argument("point id must be non-empty");
    auto [it, inserted] = index_.emplace(id, static_cast<PointIndex>(ids_.size()));
    if (!inserted) throw std::invalid_argument("duplicate point id '" + id + "'");
    ids_.push_back(std::move(id));
    return it->second;
  }

  /// Returns the index of id, registering it if new.
  PointIndex ensure_point(const std::string& id) {
    auto it = index_.find(id);
    if (it != index_.end()) return it->second;
    return add_point(id);
  }

  bool has_point(const std::string& id) const { return index_.count(id) != 0; }

  void add_edge(PointIndex a, PointIndex b) {
    if (a >= ids_.size() || b >= ids_.size()) throw std::invalid_argument("edge endpoint is not a registered point");
    if (a == b) throw std::invalid_argument("self-loop on point '" + ids_[a] + "'");
    edges_.emplace_back(a, b);
  }

  void add_edge(const std::string& a, const std::string& b) {
    auto ia = index_.find(a);
    auto ib = index_.find(b);
    if (ia == index_.end() || ib == index_.end())
      throw std::invalid_argument("dangling edge endpoint in edge " + a + " " + b);
    add_edge(ia->second, ib->second);
  }

  SpaceGraph build() const {
    SpaceGraph g;
    g.symmetric_ = symmetric_;
    g.ids_ = ids_;
    g.index_ = index_;
    std::vector<std::pair<PointIndex, PointIndex>> rel;
    rel.reserve(edges_.size() * 2);
    for (auto [a, b] : edges_) {
      if (symmetric_) {
        rel.emplace_back(std::min(a, b), std::max(a, b));
      } else {
        rel.emplace_back(a, b);
      }
    }
    std::sort(rel.begin(), rel.end());
    rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
    g.edges_ = rel;
    g.succ_.assign(ids_.size(), {});
    g.pred_.assign(ids_.size(), {});
    for (auto [a, b] : rel) {
      g.succ_[a].push_back(b);
      g.pred_[b].push_back(a);
      if (symmetric_) {
        g.succ_[b].push_back(a);
        g.pred_[a].push_back(b);
      }
    }
    for (auto& v : g.succ_) std::sort(v.begin(), v.end());
    for (auto& v : g.pred_) std::sort(v.begin(), v.end());
    return g;
  }

 private:
  bool symmetric_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, PointIndex> index_;
  std::vector<std::pair<PointIndex, PointIndex>> edges_;
};

namespace detail {

inline void require_in_space(const SpaceGraph& space, const PointSet& a) {
  if (a.universe() != space.size()) throw std::invalid_argument("point set contains points foreign to the space");
}

}  // namespace detail

/// C(A): A together with every relation-successor of a member of A.
inline PointSet closure(const SpaceGraph& space, const PointSet& a) {
  detail::require_in_space(space, a);
  PointSet out = a;
  a.for_each([&](PointIndex x) {
    for (PointIndex y : space.successors(x)) out.insert(y);
  });
  return out;
}

/// I(A) = complement of C(complement of A).
inline PointSet interior(const SpaceGraph& space, const PointSet& a) {
  detail::require_in_space(space, a);
  return ~closure(space, ~a);
}

enum class BoundaryKind {
  full,        // C(A) \ I(A)
  interior_b,  // A \ I(A)
  closure_b,   // C(A) \ A
};

inline PointSet boundary(const SpaceGraph& space, const PointSet& a, BoundaryKind kind = BoundaryKind::full) {
  switch (kind) {
    case BoundaryKind::full:
      return closure(space, a) - interior(space, a);
    case BoundaryKind::interior_b:
      return a - interior(space, a);
    case BoundaryKind::closure_b:
      return closure(space, a) - a;
  }
  throw std::invalid_argument("unknown boundary kind");
}

/// Streaming 64-bit FNV-1a, used for model version hashes.
class Fnv1a {
 public:
  void update(std::string_view s) noexcept {
    for (unsigned char c : s) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const noexcept { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

using Valuation = std::map<std::string, PointSet, std::less<>>;

/// A closure space plus a valuation of propositions.
///
/// The valuation has two layers: a static layer loaded with the space (point
/// names, categories) and a dynamic layer of presence propositions that is
/// replaced wholesale on every state refresh. A dynamic entry hides a static
/// entry with the same name. Unknown propositions evaluate to the empty set.
class ClosureModel {
 public:
  ClosureModel(SpaceGraph space, Valuation static_layer)
      : ClosureModel(std::make_shared<const SpaceGraph>(std::move(space)),
                     std::make_shared<const Valuation>(std::move(static_layer))) {}

  ClosureModel(std::shared_ptr<const SpaceGraph> space, std::shared_ptr<const Valuation> static_layer)
      : space_(std::move(space)), static_(std::move(static_layer)), dynamic_(std::make_shared<const Valuation>()) {
    if (!space_ || !static_) throw std::invalid_argument("model requires a space and a valuation");
    for (const auto& [name, set] : *static_) {
      if (set.universe() != space_->size())
        throw std::invalid_argument("valuation of '" + name + "' is not over the model's points");
    }
    empty_ = PointSet(space_->size());
    Fnv1a h;
    h.update(canonical_text(*space_, *static_));
    static_hash_ = h;
    version_ = h.value();
  }

  const SpaceGraph& space() const noexcept { return *space_; }
  std::shared_ptr<const SpaceGraph> space_ptr() const noexcept { return space_; }
  const Valuation& static_layer() const noexcept { return *static_; }
  const Valuation& dynamic_layer() const noexcept { return *dynamic_; }

  const PointSet& valuation(std::string_view prop) const {
    if (auto it = dynamic_->find(prop); it != dynamic_->end()) return it->second;
    if (auto it = static_->find(prop); it != static_->end()) return it->second;
    return empty_;
  }

  std::uint64_t version() const noexcept { return version_; }
  std::string version_string() const { return hex64(version_); }

  /// Returns a model sharing this space and static layer, with the dynamic
  /// layer replaced by the given one.
  ClosureModel with_dynamic(Valuation dynamic) const {
    for (const auto& [name, set] : dynamic) {
      if (set.universe() != space_->size())
        throw std::invalid_argument("valuation of '" + name + "' is not over the model's points");
    }
    ClosureModel m(*this);
    Fnv1a h = static_hash_;
    for (const auto& [name, set] : dynamic) h.update(prop_line(name, set));
    m.dynamic_ = std::make_shared<const Valuation>(std::move(dynamic));
    m.version_ = dynamic_empty(*m.dynamic_) ? static_hash_.value() : h.value();
    return m;
  }

  /// Canonical serialization of the space and the static layer; this is the
  /// model file format and the input to the version hash.
  static std::string canonical_text(const SpaceGraph& space, const Valuation& val) {
    std::string out;
    out += "symmetric ";
    out += space.symmetric() ? "true\n" : "false\n";
    out += "points " + std::to_string(space.size()) + "\n";
    for (const auto& id : space.ids()) out += "point " + id + "\n";
    for (auto [a, b] : space.edges()) out += "edge " + space.id(a) + " " + space.id(b) + "\n";
    for (const auto& [name, set] : val) {
      std::string line = "prop " + name;
      set.for_each([&](PointIndex i) { line += " " + space.id(i); });
      out += line + "\n";
    }
    return out;
  }

  std::string serialize() const { return canonical_text(*space_, *static_); }

 private:
  static bool dynamic_empty(const Valuation& v) { return v.empty(); }
  std::string prop_line(const std::string& name, const PointSet& set) const {
    std::string line = "layer " + name;
    set.for_each([&](PointIndex i) { line += " " + std::to_string(i); });
    return line + "\n";
  }

  std::shared_ptr<const SpaceGraph> space_;
  std::shared_ptr<const Valuation> static_;
  std::shared_ptr<const Valuation> dynamic_;
  PointSet empty_;
  Fnv1a static_hash_;
  std::uint64_t version_ = 0;
};

}  // namespace spatialrt

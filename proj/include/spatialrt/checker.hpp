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
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spatialrt/formula.hpp"
#include "spatialrt/lru.hpp"
#include "spatialrt/point_set.hpp"
#include "spatialrt/space.hpp"

namespace spatialrt {

/// Points of `space` satisfying `left S right`, given the satisfaction sets of
/// both operands.
///
/// A point is bad when it can escape to a point satisfying neither operand
/// along a path whose points all falsify `right`. Bad is the least fixpoint of
/// B = B0 | (pre(B) & !right) with B0 = !left & !right, computed by flooding
/// backwards along the relation from B0.
inline PointSet surround_set(const SpaceGraph& space, const PointSet& left, const PointSet& right) {
  const PointSet not_right = ~right;
  PointSet bad = ~left & not_right;
  std::vector<PointIndex> frontier = bad.members();
  while (!frontier.empty()) {
    const PointIndex b = frontier.back();
    frontier.pop_back();
    for (PointIndex x : space.predecessors(b)) {
      if (not_right.contains(x) && !bad.contains(x)) {
        bad.insert(x);
        frontier.push_back(x);
      }
    }
  }
  return left - bad;
}

namespace detail {

class Evaluator {
 public:
  explicit Evaluator(const ClosureModel& model) : model_(model) {}

  const PointSet& eval(const Formula& f) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    PointSet r = compute(f);
    return memo_.emplace(f, std::move(r)).first->second;
  }

 private:
  PointSet compute(const Formula& f) {
    using K = Formula::Kind;
    const SpaceGraph& space = model_.space();
    switch (f.kind()) {
      case K::prop:
        return model_.valuation(f.name());
      case K::top:
        return space.full_set();
      case K::negation:
        return ~eval(f[0]);
      case K::conjunction: {
        PointSet a = eval(f[0]);
        return a &= eval(f[1]);
      }
      case K::close:
        return closure(space, eval(f[0]));
      case K::surround: {
        PointSet a = eval(f[0]);
        return surround_set(space, a, eval(f[1]));
      }
      default:
        throw std::logic_error("evaluator expects core-form formulas");
    }
  }

  const ClosureModel& model_;
  std::unordered_map<Formula, PointSet, FormulaHash> memo_;
};

}  // namespace detail

/// Memoizes satisfaction sets by (model version, core formula). Safe to share
/// between threads.
class SatCache {
 public:
  explicit SatCache(std::size_t capacity = 1024) : lru_(capacity) {}

  std::optional<PointSet> find(std::uint64_t version, const Formula& core) { return lru_.find(Key{version, core}); }
  void store(std::uint64_t version, const Formula& core, PointSet result) {
    lru_.store(Key{version, core}, std::move(result));
  }

  std::size_t hits() const { return lru_.hits(); }
  std::size_t misses() const { return lru_.misses(); }

 private:
  struct Key {
    std::uint64_t version;
    Formula core;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept { return k.core.hash() ^ (k.version * 0x9e3779b97f4a7c15ULL); }
  };

  LruCache<Key, PointSet, KeyHash> lru_;
};

/// Set of points of `model` where `f` holds.
inline PointSet sat(const ClosureModel& model, const Formula& f, SatCache* cache = nullptr) {
  const Formula core = f.is_core() ? f : desugar(f);
  if (cache) {
    if (auto hit = cache->find(model.version(), core)) return *std::move(hit);
  }
  detail::Evaluator ev(model);
  PointSet result = ev.eval(core);
  if (cache) cache->store(model.version(), core, result);
  return result;
}

/// True iff some point satisfies `f`.
inline bool check(const ClosureModel& model, const Formula& f, SatCache* cache = nullptr) {
  return !sat(model, f, cache).empty();
}

class OracleRefused : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Reference evaluator for small models. Works pointwise over an adjacency
/// matrix and decides surround by searching escape walks forward from each
/// point, sharing no code with sat() beyond the formula type and desugar().
inline PointSet oracle_sat(const ClosureModel& model, const Formula& f, std::size_t max_points = 12) {
  const SpaceGraph& space = model.space();
  const std::size_t n = space.size();
  if (n > max_points)
    throw OracleRefused("oracle refuses models with more than " + std::to_string(max_points) + " points");

  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (auto [a, b] : space.edges()) {
    adj[a][b] = true;
    if (space.symmetric()) adj[b][a] = true;
  }

  using Truth = std::vector<bool>;
  std::function<Truth(const Formula&)> holds = [&](const Formula& g) -> Truth {
    using K = Formula::Kind;
    Truth t(n, false);
    switch (g.kind()) {
      case K::prop: {
        const PointSet& v = model.valuation(g.name());
        for (std::size_t x = 0; x < n; ++x) t[x] = v.contains(static_cast<PointIndex>(x));
        return t;
      }
      case K::top:
        return Truth(n, true);
      case K::negation: {
        Truth a = holds(g[0]);
        for (std::size_t x = 0; x < n; ++x) t[x] = !a[x];
        return t;
      }
      case K::conjunction: {
        Truth a = holds(g[0]);
        Truth b = holds(g[1]);
        for (std::size_t x = 0; x < n; ++x) t[x] = a[x] && b[x];
        return t;
      }
      case K::close: {
        Truth a = holds(g[0]);
        for (std::size_t x = 0; x < n; ++x) {
          bool in = a[x];
          for (std::size_t y = 0; y < n && !in; ++y) in = a[y] && adj[y][x];
          t[x] = in;
        }
        return t;
      }
      case K::surround: {
        Truth a = holds(g[0]);
        Truth b = holds(g[1]);
        for (std::size_t x = 0; x < n; ++x) {
          if (!a[x]) continue;
          // Depth-first search for a walk x = x0, ..., xk with every xi
          // falsifying b and xk falsifying both a and b.
          bool escaped = false;
          std::vector<bool> visited(n, false);
          std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t at, std::size_t len) {
            if (escaped || visited[at] || b[at] || len > n) return;
            visited[at] = true;
            if (!a[at]) {
              escaped = true;
              return;
            }
            for (std::size_t y = 0; y < n; ++y)
              if (adj[at][y]) walk(y, len + 1);
          };
          walk(x, 0);
          t[x] = !escaped;
        }
        return t;
      }
      default:
        throw std::logic_error("oracle expects core-form formulas");
    }
  };

  Truth t = holds(desugar(f));
  PointSet out(n);
  for (std::size_t x = 0; x < n; ++x)
    if (t[x]) out.insert(static_cast<PointIndex>(x));
  return out;
}

}  // namespace spatialrt

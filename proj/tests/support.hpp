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

// Random models and formulas shared by the property tests.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "spatialrt/formula.hpp"
#include "spatialrt/space.hpp"

namespace spatialrt::testing {

inline SpaceGraph random_graph(std::mt19937_64& rng, std::size_t n, double p, bool symmetric = true) {
  SpaceGraph::Builder b(symmetric);
  for (std::size_t i = 0; i < n; ++i) b.add_point("p" + std::to_string(i));
  std::bernoulli_distribution coin(p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && (symmetric ? i < j : true) && coin(rng))
        b.add_edge(static_cast<PointIndex>(i), static_cast<PointIndex>(j));
  return b.build();
}

inline PointSet random_subset(std::mt19937_64& rng, std::size_t n, double p = 0.3) {
  PointSet s(n);
  std::bernoulli_distribution coin(p);
  for (std::size_t i = 0; i < n; ++i)
    if (coin(rng)) s.insert(static_cast<PointIndex>(i));
  return s;
}

inline ClosureModel random_model(std::mt19937_64& rng, std::size_t max_points, std::size_t props, bool symmetric = true) {
  std::uniform_int_distribution<std::size_t> size(1, max_points);
  std::uniform_real_distribution<double> density(0.1, 0.6);
  const std::size_t n = size(rng);
  SpaceGraph g = random_graph(rng, n, density(rng), symmetric);
  Valuation v;
  for (std::size_t k = 0; k < props; ++k) v.emplace(std::string(1, static_cast<char>('a' + k)), random_subset(rng, n, 0.35));
  return ClosureModel(std::move(g), std::move(v));
}

/// Formula over props a, b, c of at most `depth` levels. With `derived`, the
/// sugared operators are drawn too.
inline Formula random_formula(std::mt19937_64& rng, std::size_t depth, std::size_t props = 3, bool derived = false) {
  std::uniform_int_distribution<int> leaf(0, static_cast<int>(props));
  if (depth <= 1) {
    const int k = leaf(rng);
    return k == static_cast<int>(props) ? Formula::top() : Formula::prop(std::string(1, static_cast<char>('a' + k)));
  }
  std::uniform_int_distribution<int> op(0, derived ? 9 : 5);
  auto sub = [&] { return random_formula(rng, depth - 1, props, derived); };
  switch (op(rng)) {
    case 0:
      return sub();
    case 1:
      return Formula::negate(sub());
    case 2:
      return Formula::conj(sub(), sub());
    case 3:
      return Formula::close(sub());
    case 4:
    case 5:
      return Formula::surround(sub(), sub());
    case 6:
      return Formula::disj(sub(), sub());
    case 7:
      return Formula::near(1 + static_cast<unsigned>(rng() % 3), sub());
    case 8:
      return Formula::reach(sub(), sub());
    default:
      return Formula::reach_through(sub(), sub(), sub());
  }
}

/// Line a-b-c-... with the given names, symmetric.
inline SpaceGraph line(std::initializer_list<const char*> names) {
  SpaceGraph::Builder b(true);
  const char* prev = nullptr;
  for (const char* n : names) {
    b.add_point(n);
    if (prev) b.add_edge(prev, n);
    prev = n;
  }
  return b.build();
}

}  // namespace spatialrt::testing

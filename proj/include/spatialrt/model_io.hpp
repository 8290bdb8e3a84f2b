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

// Line-oriented model files:
//
//   symmetric true
//   points 3
//   point a
//   point b
//   point c
//   edge a b
//   prop red a c
//
// '#' starts a comment. Space and valuation directives may live in one file
// or in two (see read_valuation).

#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spatialrt/space.hpp"

namespace spatialrt {

class ModelFormatError : public std::runtime_error {
 public:
  ModelFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

struct RawLine {
  std::size_t number;
  std::vector<std::string> words;
};

inline std::vector<RawLine> tokenize_lines(std::istream& in) {
  std::vector<RawLine> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    RawLine raw{n, {}};
    for (std::string w; ss >> w;) raw.words.push_back(std::move(w));
    if (!raw.words.empty()) out.push_back(std::move(raw));
  }
  return out;
}

inline void add_props(const RawLine& l, const SpaceGraph& space, Valuation& val) {
  if (l.words.size() < 2) throw ModelFormatError(l.number, "prop needs a name");
  auto [it, _] = val.try_emplace(l.words[1], space.size());
  for (std::size_t k = 2; k < l.words.size(); ++k) {
    auto idx = space.find(l.words[k]);
    if (!idx) throw ModelFormatError(l.number, "prop '" + l.words[1] + "' names unknown point '" + l.words[k] + "'");
    it->second.insert(*idx);
  }
}

}  // namespace detail

/// Parses a complete model (space and valuation). Throws ModelFormatError.
inline ClosureModel read_model(std::istream& in) {
  auto lines = detail::tokenize_lines(in);
  SpaceGraph::Builder b;
  std::optional<std::size_t> declared;
  std::vector<const detail::RawLine*> edges, props;
  for (const auto& l : lines) {
    const auto& kw = l.words[0];
    if (kw == "symmetric") {
      if (l.words.size() != 2 || (l.words[1] != "true" && l.words[1] != "false"))
        throw ModelFormatError(l.number, "expected 'symmetric true|false'");
      b.set_symmetric(l.words[1] == "true");
    } else if (kw == "points") {
      if (l.words.size() != 2) throw ModelFormatError(l.number, "expected 'points N'");
      try {
        declared = std::stoul(l.words[1]);
      } catch (const std::exception&) {
        throw ModelFormatError(l.number, "bad point count '" + l.words[1] + "'");
      }
    } else if (kw == "point") {
      if (l.words.size() != 2) throw ModelFormatError(l.number, "expected 'point <id>'");
      try {
        b.add_point(l.words[1]);
      } catch (const std::invalid_argument& e) {
        throw ModelFormatError(l.number, e.what());
      }
    } else if (kw == "edge") {
      if (l.words.size() != 3) throw ModelFormatError(l.number, "expected 'edge <id> <id>'");
      edges.push_back(&l);
    } else if (kw == "prop") {
      props.push_back(&l);
    } else {
      throw ModelFormatError(l.number, "unknown directive '" + kw + "'");
    }
  }
  for (const auto* l : edges) {
    try {
      b.add_edge(l->words[1], l->words[2]);
    } catch (const std::invalid_argument& e) {
      throw ModelFormatError(l->number, e.what());
    }
  }
  SpaceGraph space = b.build();
  if (declared && *declared != space.size())
    throw ModelFormatError(0, "declared " + std::to_string(*declared) + " points but found " +
                                  std::to_string(space.size()));
  Valuation val;
  for (const auto* l : props) detail::add_props(*l, space, val);
  return ClosureModel(std::move(space), std::move(val));
}

/// Adds `prop` lines from a separate valuation file to a model's static layer.
inline ClosureModel read_valuation(std::istream& in, const ClosureModel& base) {
  Valuation val = base.static_layer();
  for (const auto& l : detail::tokenize_lines(in)) {
    if (l.words[0] != "prop") throw ModelFormatError(l.number, "valuation files may only contain 'prop' lines");
    detail::add_props(l, base.space(), val);
  }
  return ClosureModel(base.space_ptr(), std::make_shared<const Valuation>(std::move(val)));
}

inline ClosureModel read_model_string(const std::string& text) {
  std::istringstream in(text);
  return read_model(in);
}

inline ClosureModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  return read_model(in);
}

inline void write_model(std::ostream& out, const ClosureModel& model) { out << model.serialize(); }

}  // namespace spatialrt

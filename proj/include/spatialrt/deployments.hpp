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

// Named deployment sets for the simulator, as JSON documents:
//
//   {"name": "beijing-2008",
//    "deployments": {
//      "monolith": {"kind": "fixed_pool", "capacity": 40,
//                   "service_time": {"uniform": [9, 12]}, "timeout": 120},
//      "faas":     {"kind": "elastic", "service_time": {"constant": 12}},
//      "hybrid":   {"baseline": "monolith", "elastic": "faas",
//                   "threshold": 0.9, "dispatch_overhead": 0.3}}}
//
// A hybrid may name other entries of the same set or embed backend objects.

#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "spatialrt/simulator.hpp"

namespace spatialrt::sim {

using DeploymentSet = std::map<std::string, Deployment>;

inline const char* to_string(BackendKind k) {
  switch (k) {
    case BackendKind::fixed_pool:
      return "fixed_pool";
    case BackendKind::elastic:
      return "elastic";
    case BackendKind::sequential_device:
      return "sequential_device";
  }
  return "?";
}

inline BackendKind backend_kind_from_string(const std::string& s) {
  if (s == "fixed_pool") return BackendKind::fixed_pool;
  if (s == "elastic") return BackendKind::elastic;
  if (s == "sequential_device") return BackendKind::sequential_device;
  throw std::invalid_argument("unknown backend kind '" + s + "'");
}

inline ServiceTime service_time_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Constant{j.get<double>()};
  if (j.contains("constant")) return Constant{j["constant"].get<double>()};
  if (j.contains("uniform")) return Uniform{j["uniform"].at(0).get<double>(), j["uniform"].at(1).get<double>()};
  if (j.contains("lognormal")) return LogNormal{j["lognormal"].at(0).get<double>(), j["lognormal"].at(1).get<double>()};
  throw std::invalid_argument("service_time needs constant, uniform or lognormal");
}

inline nlohmann::json service_time_to_json(const ServiceTime& st) {
  return std::visit(
      [](const auto& d) -> nlohmann::json {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, Constant>) return {{"constant", d.seconds}};
        if constexpr (std::is_same_v<D, Uniform>) return {{"uniform", {d.lo, d.hi}}};
        if constexpr (std::is_same_v<D, LogNormal>) return {{"lognormal", {d.mu, d.sigma}}};
      },
      st);
}

inline BackendModel backend_from_json(const std::string& label, const nlohmann::json& j) {
  BackendModel m;
  m.label = j.value("label", label);
  m.kind = backend_kind_from_string(j.at("kind").get<std::string>());
  m.capacity = j.value("capacity", std::size_t{1});
  m.service_time = service_time_from_json(j.at("service_time"));
  m.cold_start = j.value("cold_start", 0.0);
  m.scale_up_delay = j.value("scale_up_delay", 0.0);
  m.scale_step = j.value("scale_step", std::size_t{1});
  m.max_capacity = j.value("max_capacity", std::size_t{0});
  m.concurrency_limit = j.value("concurrency_limit", std::size_t{0});
  if (j.contains("timeout") && !j["timeout"].is_null()) m.timeout = j["timeout"].get<double>();
  m.validate();
  return m;
}

inline nlohmann::json backend_to_json(const BackendModel& m) {
  nlohmann::json j = {{"label", m.label},
                      {"kind", to_string(m.kind)},
                      {"capacity", m.capacity},
                      {"service_time", service_time_to_json(m.service_time)},
                      {"cold_start", m.cold_start},
                      {"scale_up_delay", m.scale_up_delay},
                      {"scale_step", m.scale_step},
                      {"max_capacity", m.max_capacity},
                      {"concurrency_limit", m.concurrency_limit}};
  if (m.timeout) j["timeout"] = *m.timeout;
  return j;
}

inline DeploymentSet deployments_from_json(const nlohmann::json& doc) {
  DeploymentSet out;
  const auto& all = doc.at("deployments");
  for (const auto& [name, j] : all.items())
    if (!j.contains("baseline")) out.emplace(name, backend_from_json(name, j));
  auto side = [&](const nlohmann::json& ref, const std::string& owner) -> BackendModel {
    if (!ref.is_string()) return backend_from_json(owner, ref);
    auto it = out.find(ref.get<std::string>());
    if (it == out.end() || !std::holds_alternative<BackendModel>(it->second))
      throw std::invalid_argument(owner + ": unknown backend '" + ref.get<std::string>() + "'");
    return std::get<BackendModel>(it->second);
  };
  for (const auto& [name, j] : all.items()) {
    if (!j.contains("baseline")) continue;
    Hybrid h{side(j["baseline"], name + ".baseline"), side(j.at("elastic"), name + ".elastic"), {}};
    h.policy.threshold = j.value("threshold", h.policy.threshold);
    h.policy.dispatch_overhead = j.value("dispatch_overhead", h.policy.dispatch_overhead);
    if (!(h.policy.threshold >= 0 && h.policy.threshold <= 1))
      throw std::invalid_argument(name + ": threshold must be in [0,1]");
    out.emplace(name, std::move(h));
  }
  return out;
}

inline nlohmann::json deployments_to_json(const std::string& name, const DeploymentSet& set) {
  nlohmann::json deps = nlohmann::json::object();
  for (const auto& [key, d] : set) {
    if (const auto* b = std::get_if<BackendModel>(&d)) {
      deps[key] = backend_to_json(*b);
    } else {
      const auto& h = std::get<Hybrid>(d);
      deps[key] = {{"baseline", backend_to_json(h.baseline)},
                   {"elastic", backend_to_json(h.elastic)},
                   {"threshold", h.policy.threshold},
                   {"dispatch_overhead", h.policy.dispatch_overhead}};
    }
  }
  return {{"name", name}, {"deployments", deps}};
}

/// Calibration for the busiest hour of the Beijing taxi day: the monolith
/// pool matches the 40 cores estimated for that period, functions run a
/// constant 12 s, the handset 99 s per call, containers start at 20 servers
/// and grow two at a time each minute while requests queue.
inline DeploymentSet beijing_2008() {
  BackendModel monolith;
  monolith.label = "monolith";
  monolith.kind = BackendKind::fixed_pool;
  monolith.capacity = 40;
  monolith.service_time = Uniform{9, 12};
  monolith.timeout = 120;

  BackendModel containers = monolith;
  containers.label = "containers";
  containers.capacity = 20;
  containers.scale_up_delay = 60;
  containers.scale_step = 2;
  containers.max_capacity = 50;

  BackendModel faas;
  faas.label = "faas";
  faas.kind = BackendKind::elastic;
  faas.service_time = Constant{12};
  faas.timeout = 120;

  BackendModel device;
  device.label = "device";
  device.kind = BackendKind::sequential_device;
  device.service_time = Constant{99};

  return {{"monolith", monolith},
          {"containers", containers},
          {"faas", faas},
          {"device", device},
          {"hybrid", Hybrid{monolith, faas, HybridPolicy{0.9, 0.3}}}};
}

/// Built-in sets by name.
inline DeploymentSet builtin_deployments(const std::string& name) {
  if (name == "beijing-2008") return beijing_2008();
  throw std::invalid_argument("unknown deployment set '" + name + "'");
}

}  // namespace spatialrt::sim

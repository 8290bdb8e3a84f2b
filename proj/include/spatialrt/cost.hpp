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

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace spatialrt {

struct VmPricing {
  double units = 0;
  double unit_price_per_hr = 0;
};

struct FaasPricing {
  double sec_per_call = 0;
  double gb = 0;
  double price_per_gb_s = 0;
  double price_per_request = 0;
};

struct CostPeriod {
  std::string label;
  double hours = 0;
  double calls = 0;
  std::variant<VmPricing, FaasPricing> deployment;
};

struct CostPlan {
  std::vector<CostPeriod> periods;
  double working_days = 21.73;

  void validate() const {
    if (!(working_days >= 0)) throw std::invalid_argument("working_days must be >= 0");
    for (const auto& p : periods) {
      if (!(p.hours > 0)) throw std::invalid_argument("period " + p.label + ": hours must be positive");
      if (p.calls < 0) throw std::invalid_argument("period " + p.label + ": calls must be >= 0");
      if (const auto* vm = std::get_if<VmPricing>(&p.deployment)) {
        if (vm->units < 0 || vm->unit_price_per_hr < 0) throw std::invalid_argument("period " + p.label + ": negative price");
      } else {
        const auto& f = std::get<FaasPricing>(p.deployment);
        if (f.sec_per_call < 0 || f.gb < 0 || f.price_per_gb_s < 0 || f.price_per_request < 0)
          throw std::invalid_argument("period " + p.label + ": negative price");
      }
    }
  }
};

struct CostEstimate {
  std::vector<double> per_period;
  double daily = 0;
  double monthly = 0;
};

inline double period_cost(const CostPeriod& p) {
  if (const auto* vm = std::get_if<VmPricing>(&p.deployment)) return vm->units * p.hours * vm->unit_price_per_hr;
  const auto& f = std::get<FaasPricing>(p.deployment);
  return p.calls * f.sec_per_call * f.gb * f.price_per_gb_s + p.calls * f.price_per_request;
}

inline CostEstimate estimate_cost(const CostPlan& plan) {
  plan.validate();
  CostEstimate e;
  for (const auto& p : plan.periods) {
    e.per_period.push_back(period_cost(p));
    e.daily += e.per_period.back();
  }
  e.monthly = e.daily * plan.working_days;
  return e;
}

// Plan documents:
//   {"working_days": 21.73,
//    "periods": [{"label": "6-9", "hours": 3, "calls": 312,
//                 "vm": {"units": 10, "unit_price_per_hr": 0.0467}}, ...]}
// A faas period carries "faas": {"sec_per_call", "gb", "price_per_gb_s",
// "price_per_request"} instead. A file may hold several named plans under
// "plans"; top-level "working_days" then applies to each unless overridden.

inline CostPlan cost_plan_from_json(const nlohmann::json& j, double default_working_days = 21.73) {
  CostPlan plan;
  plan.working_days = j.value("working_days", default_working_days);
  for (const auto& pj : j.at("periods")) {
    CostPeriod p;
    p.label = pj.value("label", std::string{});
    p.hours = pj.at("hours").get<double>();
    p.calls = pj.value("calls", 0.0);
    if (pj.contains("vm")) {
      const auto& v = pj["vm"];
      p.deployment = VmPricing{v.at("units").get<double>(), v.at("unit_price_per_hr").get<double>()};
    } else if (pj.contains("faas")) {
      const auto& f = pj["faas"];
      p.deployment = FaasPricing{f.at("sec_per_call").get<double>(), f.at("gb").get<double>(),
                                 f.at("price_per_gb_s").get<double>(), f.value("price_per_request", 0.0)};
    } else {
      throw std::invalid_argument("period " + p.label + " needs a vm or faas block");
    }
    plan.periods.push_back(std::move(p));
  }
  plan.validate();
  return plan;
}

inline std::map<std::string, CostPlan> cost_plans_from_json(const nlohmann::json& j) {
  std::map<std::string, CostPlan> out;
  if (!j.contains("plans")) {
    out.emplace(j.value("name", std::string("plan")), cost_plan_from_json(j));
    return out;
  }
  const double wd = j.value("working_days", 21.73);
  for (const auto& [name, pj] : j["plans"].items()) out.emplace(name, cost_plan_from_json(pj, wd));
  return out;
}

}  // namespace spatialrt

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

#include <string>

#include "spatialrt/model_io.hpp"

namespace spatialrt::fixtures {

/// Eight-point city: a park, a museum, two bridges, a metro station, two bus
/// stops and the main square. Presence proposition: `bike`.
inline constexpr const char* kMiniCityModel = R"(# mini-city
symmetric true
points 8
point park
point museum
point bridge1
point metro1
point bus_stop1
point main_square
point bridge2
point bus_stop2
edge park museum
edge museum bridge1
edge bridge1 metro1
edge metro1 bus_stop1
edge bus_stop1 main_square
edge museum bus_stop2
edge bus_stop2 bridge2
edge bridge2 main_square
prop park park
prop museum museum
prop bridge1 bridge1
prop metro1 metro1
prop bus_stop1 bus_stop1
prop main_square main_square
prop bridge2 bridge2
prop bus_stop2 bus_stop2
prop bridge bridge1 bridge2
prop bus_stop bus_stop1 bus_stop2
)";

inline ClosureModel mini_city() { return read_model_string(kMiniCityModel); }

/// A bike can reach the main square through points that are not bridges, or
/// that are bus stops holding a bike.
inline constexpr const char* kBikeToMainSquare = "bike R(!bridge | (bus_stop & bike)) main_square";

/// Taxi reaches a department store through subway/bus stops with taxis,
/// avoiding hospitals.
inline constexpr const char* kP1 =
    "taxi R(!HEALTHHOSPITAL | ((TRANSPORTSUBWAY | TRANSPORTBUSSTOP) & taxi)) DEPARTMENTSTORE";
/// Taxi within two steps of a hotel or hospital and next to a restaurant.
inline constexpr const char* kP2 = "taxi & N2 (ACCOMMOHOTEL | HEALTHHOSPITAL) & N (FOODRESTAURANT)";
/// Taxi near tourist attractions with subway, reaching a zoo.
inline constexpr const char* kP3 = "taxi & N2 (TOURISTATTRACTION & TRANSPORTSUBWAY) T TOURISTZOO";

}  // namespace spatialrt::fixtures

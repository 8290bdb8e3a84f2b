#!/usr/bin/env python3
# Copyright 2026 The spatialrt Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates mini_city.json by brute force over simple paths.

Standalone on purpose: no code is shared with the C++ checker. Surround is
decided by enumerating every simple path from a point, which is exhaustive on
an eight-point graph.
"""

import json
import pathlib

POINTS = ["park", "museum", "bridge1", "metro1", "bus_stop1", "main_square", "bridge2", "bus_stop2"]
EDGES = [("park", "museum"), ("museum", "bridge1"), ("bridge1", "metro1"), ("metro1", "bus_stop1"),
         ("bus_stop1", "main_square"), ("museum", "bus_stop2"), ("bus_stop2", "bridge2"),
         ("bridge2", "main_square")]
ADJ = {p: set() for p in POINTS}
for a, b in EDGES:
    ADJ[a].add(b)
    ADJ[b].add(a)

STATIC = {p: {p} for p in POINTS}
STATIC["bridge"] = {"bridge1", "bridge2"}
STATIC["bus_stop"] = {"bus_stop1", "bus_stop2"}

X = set(POINTS)


def simple_paths(start):
    stack = [[start]]
    while stack:
        path = stack.pop()
        yield path
        for y in ADJ[path[-1]]:
            if y not in path:
                stack.append(path + [y])


def surround(a, b):
    # x in a S b iff x in a and no path from x through !b points ends in !a & !b
    out = set()
    for x in a:
        escape = False
        for path in simple_paths(x):
            if all(p not in b for p in path) and path[-1] not in a and path[-1] not in b:
                escape = True
                break
        if not escape:
            out.add(x)
    return out


def reach(a, b):
    # a T b = a & !((!b) S !(a | b))
    return a & (X - surround(X - b, X - (a | b)))


def reach_through(a, b, c):
    return reach(a, reach(b, c) & reach(b, a))


def formula2(val):
    bike = val.get("bike", set())
    via = (X - val["bridge"]) | (val["bus_stop"] & bike)
    return reach_through(bike, via, val["main_square"])


SCENARIOS = [
    ("lone_bike_museum", ["museum"]),
    ("lone_bike_bus_stop1", ["bus_stop1"]),
    ("lone_bike_bridge2", ["bridge2"]),
    ("three_bikes", ["museum", "bus_stop1", "bridge2"]),
    ("no_bikes", []),
]


def main():
    rows = []
    for name, bikes in SCENARIOS:
        val = dict(STATIC)
        val["bike"] = set(bikes)
        pts = formula2(val)
        rows.append({"name": name, "bikes": bikes, "satisfied": bool(pts),
                     "points": [p for p in POINTS if p in pts]})
    out = pathlib.Path(__file__).with_name("mini_city.json")
    out.write_text(json.dumps({"formula": "bike R(!bridge | (bus_stop & bike)) main_square",
                               "scenarios": rows}, indent=2) + "\n")


if __name__ == "__main__":
    main()

// Copyright 2026 The hvtsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hvtsim/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hvtsim {

namespace {

bool present(const std::vector<Direction>& pts, const Direction& d) {
  for (const auto& p : pts) {
    if (p.matches(d) || p.is_antipode_of(d)) return true;
  }
  return false;
}

}  // namespace

DirectionGrid DirectionGrid::build(std::size_t size, std::span<const Direction> registered) {
  if (size % 2 != 0) {
    throw Error(ErrorCode::kGrid, "grid size must be even (antipodal pairs), got " +
                                      std::to_string(size));
  }
  std::vector<Direction> upper;  // one representative per antipodal pair
  for (const auto& axis : {Direction::plus_x(), Direction::plus_y(), Direction::plus_z()}) {
    upper.push_back(axis);
  }
  for (const auto& d : registered) {
    if (!present(upper, d)) upper.push_back(d);
  }
  if (2 * upper.size() > size) {
    throw Error(ErrorCode::kGrid, "grid size " + std::to_string(size) + " cannot hold " +
                                      std::to_string(2 * upper.size()) +
                                      " axis and device directions");
  }

  const std::size_t spiral = size / 2 - upper.size();
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < spiral; ++i) {
    const double z = 1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(spiral);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * static_cast<double>(i);
    Direction cand = Direction::normalized(Vec3(r * std::cos(phi), r * std::sin(phi), z));
    while (present(upper, cand)) {
      phi += 1e-3;
      cand = Direction::normalized(Vec3(r * std::cos(phi), r * std::sin(phi), z));
    }
    upper.push_back(cand);
  }

  DirectionGrid grid;
  grid.points_.reserve(size);
  grid.antipode_.resize(size);
  for (std::size_t k = 0; k < upper.size(); ++k) {
    grid.points_.push_back(upper[k]);
    grid.points_.push_back(-upper[k]);
    grid.antipode_[2 * k] = 2 * k + 1;
    grid.antipode_[2 * k + 1] = 2 * k;
  }
  return grid;
}

std::optional<std::size_t> DirectionGrid::find(const Direction& d) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].matches(d)) return i;
  }
  return std::nullopt;
}

std::size_t DirectionGrid::index_of(const Direction& d) const {
  if (auto i = find(d)) return *i;
  throw Error(ErrorCode::kGrid, "direction " + d.to_string() + " is not registered in the grid");
}

std::vector<Direction> cube_probe_directions() {
  std::vector<Direction> out;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      for (int z = -1; z <= 1; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        out.push_back(Direction::normalized(Vec3(x, y, z)));
      }
  return out;
}

}  // namespace hvtsim

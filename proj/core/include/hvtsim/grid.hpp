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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hvtsim/qcore.hpp"

namespace hvtsim {

inline constexpr std::size_t kDefaultGridSize = 362;

// Finite stand-in for "every direction on the sphere". The grid always holds
// exactly `size()` points, closed under antipodes, containing +-x, +-y, +-z
// and every registered device direction. The remaining slots are filled with
// a Fibonacci spiral over the upper hemisphere and its mirror image. Each
// point carries weight 1/size().
class DirectionGrid {
 public:
  // Throws kGrid when `size` is odd or too small to hold the axes and the
  // registered directions.
  static DirectionGrid build(std::size_t size, std::span<const Direction> registered = {});

  std::size_t size() const { return points_.size(); }
  double weight() const { return 1.0 / static_cast<double>(points_.size()); }
  const Direction& at(std::size_t i) const { return points_[i]; }
  std::span<const Direction> points() const { return points_; }
  std::size_t antipode(std::size_t i) const { return antipode_[i]; }

  std::optional<std::size_t> find(const Direction& d) const;
  // Throws kGrid when `d` is not a grid point.
  std::size_t index_of(const Direction& d) const;
  bool contains(const Direction& d) const { return find(d).has_value(); }

 private:
  std::vector<Direction> points_;
  std::vector<std::size_t> antipode_;
};

// The six axes, twelve edge midpoints and eight corners of the cube,
// normalized: a 26-direction probe set.
std::vector<Direction> cube_probe_directions();

}  // namespace hvtsim

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

#include "hvtsim/naive.hpp"

#include <algorithm>
#include <cmath>

namespace hvtsim {

QubitState naive_z_state(const Vec3& v) {
  return bloch_state(Vec3(0.0, 0.0, v.z()));
}

NaiveSxCheck naive_hvt_sx_check() {
  const QubitState naive = naive_z_state(Direction::plus_x().vec());
  return {born(naive, Direction::plus_x()), born(up_projector(Direction::plus_x()), Direction::plus_x()),
          born(naive, Direction::plus_z())};
}

NaiveSpectrum naive_spectrum_check(double theta, double phi) {
  const double sx = std::sin(theta) * std::cos(phi);
  const double sy = std::sin(theta) * std::sin(phi);
  const double sz = std::cos(theta);
  NaiveSpectrum out;
  out.values = {0.5 * (sx + sy + sz), 0.5 * (sx + sy - sz), 0.5 * (sx - sy + sz),
                0.5 * (sx - sy - sz)};
  std::vector<double> sorted(out.values.begin(), out.values.end());
  std::sort(sorted.begin(), sorted.end());
  for (double v : sorted) {
    if (out.distinct.empty() || v - out.distinct.back() > kExactTol) out.distinct.push_back(v);
  }
  out.respects_qs1 = std::all_of(out.values.begin(), out.values.end(), [](double v) {
    return std::abs(std::abs(v) - 0.5) <= kExactTol;
  });
  return out;
}

}  // namespace hvtsim

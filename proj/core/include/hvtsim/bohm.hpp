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

// Bohm-style collapse during a measurement along one direction. The weights
// J1 = |<up|psi>|^2 and J2 = |<down|psi>|^2 flow according to
//
//   dJ1/dt = 2 gamma (R1 - R2) J1 J2,   dJ2/dt = -dJ1/dt,
//   Ri = (Ji)^2 / |xi_i|^2,
//
// where xi_1, xi_2 are hidden variables. The branch whose weight survives is
// the recorded outcome.

#include <cstdint>
#include <utility>
#include <vector>

#include "hvtsim/rng.hpp"

namespace hvtsim {

struct BohmState {
  double j1 = 0.5;
  double j2 = 0.5;
  double xi1_sq = 0.5;
  double xi2_sq = 0.5;
  double gamma = 1.0;
};

struct BohmRates {
  double r1 = 0.0;
  double r2 = 0.0;
};

BohmRates bohm_rates(double j1, double j2, double xi1_sq, double xi2_sq);

struct BohmConfig {
  double gamma_dt = 0.01;  // step length in units of 1/gamma
  double eps = 1e-6;       // a branch is gone once its weight drops below eps
  std::uint64_t max_steps = 10'000'000;
};

struct XiSquared {
  double first = 0.5;
  double second = 0.5;
};

// Hidden-variable magnitudes for amplitudes proportional to (u, 1 - u),
// normalized: |xi_1|^2 = u^2 / (u^2 + (1-u)^2). With Ri = Ji^2 / |xi_i|^2 the
// branch-1 condition R1 > R2 reduces to J1 / u > J2 / (1 - u), i.e. u < J1.
XiSquared bohm_xi_from_uniform(double u);
// Draws u uniformly on (0, 1).
XiSquared bohm_draw_xi(Rng& rng);

enum class BohmWinner { kFirst, kSecond, kTie };

struct BohmTrajectory {
  BohmWinner winner = BohmWinner::kTie;
  std::vector<std::pair<double, double>> points;  // (J1, J2), start included
  std::uint64_t steps = 0;
  double max_sum_drift = 0.0;  // max |J1 + J2 - (J1 + J2)(0)|
  bool monotone = true;        // J1 moved in one direction only
};

// Fixed-step classical RK4 until min(J1, J2) < eps. The flow is integrated
// on the clock s with ds = (R1 + R2) dt, which has the same orbits as the
// physical clock but keeps the step stable when a |xi|^2 is tiny. At an
// exact tie (R1 == R2) the state is stationary and kTie is returned without
// stepping. Throws kIntegration after max_steps.
BohmTrajectory bohm_evolve(const BohmState& state, const BohmConfig& config = {},
                           bool record = true);

}  // namespace hvtsim

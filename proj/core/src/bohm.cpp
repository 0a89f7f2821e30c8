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

#include "hvtsim/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hvtsim/error.hpp"

namespace hvtsim {

BohmRates bohm_rates(double j1, double j2, double xi1_sq, double xi2_sq) {
  return {j1 * j1 / xi1_sq, j2 * j2 / xi2_sq};
}

XiSquared bohm_xi_from_uniform(double u) {
  const double a = u * u;
  const double b = (1.0 - u) * (1.0 - u);
  return {a / (a + b), b / (a + b)};
}

XiSquared bohm_draw_xi(Rng& rng) { return bohm_xi_from_uniform(rng.uniform_open()); }

BohmTrajectory bohm_evolve(const BohmState& state, const BohmConfig& config, bool record) {
  if (!(state.j1 > 0.0 && state.j2 > 0.0)) {
    throw Error(ErrorCode::kIntegration, "Bohm weights must both be positive");
  }
  if (!(state.xi1_sq > 0.0 && state.xi2_sq > 0.0)) {
    throw Error(ErrorCode::kIntegration, "Bohm hidden variables must have |xi|^2 > 0");
  }
  if (!(config.eps > 0.0 && config.eps < 0.5) || !(config.gamma_dt > 0.0)) {
    throw Error(ErrorCode::kIntegration, "Bohm integrator needs eps in (0, 1/2) and dt > 0");
  }

  const double a = state.xi1_sq;
  const double b = state.xi2_sq;
  const double two_gamma = 2.0 * state.gamma;
  const double h = config.gamma_dt / state.gamma;

  // Right-hand side on the rescaled clock; f2 = -f1. (R1 - R2) / (R1 + R2)
  // is evaluated with the common factor a * b cleared.
  auto rhs = [&](double j1, double j2) {
    const double u = j1 * j1 * b;
    const double v = j2 * j2 * a;
    return two_gamma * (u - v) / (u + v) * j1 * j2;
  };

  BohmTrajectory out;
  double j1 = state.j1;
  double j2 = state.j2;
  const double total = j1 + j2;
  if (record) out.points.emplace_back(j1, j2);

  const BohmRates r0 = bohm_rates(j1, j2, a, b);
  if (r0.r1 == r0.r2) {
    out.winner = BohmWinner::kTie;
    return out;
  }
  const int direction = r0.r1 > r0.r2 ? 1 : -1;

  while (std::min(j1, j2) >= config.eps) {
    if (out.steps >= config.max_steps) {
      throw Error(ErrorCode::kIntegration,
                  "Bohm flow did not collapse within " + std::to_string(config.max_steps) +
                      " steps (dt too large or eps too small)");
    }
    const double k1 = rhs(j1, j2);
    const double k2 = rhs(j1 + 0.5 * h * k1, j2 - 0.5 * h * k1);
    const double k3 = rhs(j1 + 0.5 * h * k2, j2 - 0.5 * h * k2);
    const double k4 = rhs(j1 + h * k3, j2 - h * k3);
    const double delta = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (delta * direction < 0.0) out.monotone = false;
    j1 += delta;
    j2 -= delta;
    ++out.steps;
    out.max_sum_drift = std::max(out.max_sum_drift, std::abs(j1 + j2 - total));
    if (record) out.points.emplace_back(j1, j2);
  }
  out.winner = j1 > j2 ? BohmWinner::kFirst : BohmWinner::kSecond;
  return out;
}

}  // namespace hvtsim

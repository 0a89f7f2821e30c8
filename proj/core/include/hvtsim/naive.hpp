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

// The naive single-hidden-variable state: one random variable per spin that
// is read out along z only. Kept to exhibit its two failures.

#include <array>
#include <vector>

#include "hvtsim/qcore.hpp"

namespace hvtsim {

// z-diagonal state diag(p_up_z, p_down_z) carrying only the z statistics of
// a preparation with Bloch vector v.
QubitState naive_z_state(const Vec3& v);

struct NaiveSxCheck {
  BornProbabilities x_basis;    // naive state read along x
  BornProbabilities reference;  // quantum prediction for the same device
  BornProbabilities z_basis;    // naive state read along z
};

// x-up preparation, measured along x.
NaiveSxCheck naive_hvt_sx_check();

struct NaiveSpectrum {
  // 1/2 (sx +/- sy +/- sz) for the four sign choices, in the order
  // (+,+), (+,-), (-,+), (-,-).
  std::array<double, 4> values{};
  // Sorted distinct values (merged within kExactTol).
  std::vector<double> distinct;
  // True iff every value is +1/2 or -1/2.
  bool respects_qs1 = false;
};

// Spin component along (theta, phi) [radians] built from independent +/-1/2
// components along x, y and z.
NaiveSpectrum naive_spectrum_check(double theta, double phi);

}  // namespace hvtsim

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

#include "hvtsim/qcore.hpp"

namespace hvtsim {

// Bell's single-spin hidden-variable construction. A uniformly distributed
// lambda in [-1/2, 1/2] plus a reference axis ("anchor") determine every
// outcome deterministically.

inline constexpr double kLambdaMin = -0.5;
inline constexpr double kLambdaMax = 0.5;

// sign() with sign(0) = +1; the zero set has measure zero under a uniform
// lambda.
inline int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

// Component of `beta` used when beta is orthogonal to the anchor: the first
// non-zero component in the cyclic order that starts at the anchor's
// dominant axis (x -> x,y,z; y -> y,z,x; z -> z,x,y).
double tie_break_component(const Vec3& beta, const Vec3& anchor);

// Outcome (+1 / -1) for measuring sigma . beta.
//   c = anchor_sign * (beta . anchor)
//   c != 0: sign(lambda + |c|/2) * sign(c)
//   c == 0: sign(lambda) * sign(tie_break_component(beta, anchor))
// Averaged over lambda this gives <sigma . beta> = c, the Born value for the
// state with Bloch vector anchor_sign * anchor.
int bell_outcome(double lambda, const Vec3& beta, const Vec3& anchor, int anchor_sign);

// Sub-interval of [lo, hi] on which bell_outcome is +1. The outcome is a
// step function of lambda, so the up-set is always an interval.
struct LambdaInterval {
  double lo = kLambdaMin;
  double hi = kLambdaMax;
  double length() const { return hi > lo ? hi - lo : 0.0; }
  bool is_point() const { return lo == hi; }
};

struct LambdaSplit {
  LambdaInterval up;
  LambdaInterval down;
};

LambdaSplit bell_split(const LambdaInterval& range, const Vec3& beta, const Vec3& anchor,
                       int anchor_sign);

}  // namespace hvtsim

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

#include "hvtsim/bell.hpp"

#include <algorithm>
#include <cmath>

namespace hvtsim {

namespace {

int dominant_axis(const Vec3& v) {
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(v(k)) > std::abs(v(best)) + 1e-15) best = k;
  }
  return best;
}

// Orthogonality threshold for beta . anchor.
constexpr double kOrthogonal = 1e-14;

}  // namespace

double tie_break_component(const Vec3& beta, const Vec3& anchor) {
  const int start = dominant_axis(anchor);
  for (int k = 0; k < 3; ++k) {
    const double comp = beta((start + k) % 3);
    if (std::abs(comp) > kOrthogonal) return comp;
  }
  return 1.0;
}

int bell_outcome(double lambda, const Vec3& beta, const Vec3& anchor, int anchor_sign) {
  const double c = anchor_sign * beta.dot(anchor);
  if (std::abs(c) > kOrthogonal) return sign_of(lambda + std::abs(c) / 2) * sign_of(c);
  return sign_of(lambda) * sign_of(tie_break_component(beta, anchor));
}

LambdaSplit bell_split(const LambdaInterval& range, const Vec3& beta, const Vec3& anchor,
                       int anchor_sign) {
  // Up-set is [t, 1/2] when `upper` holds, otherwise [-1/2, t).
  const double c = anchor_sign * beta.dot(anchor);
  double t = 0.0;
  bool upper = true;
  if (std::abs(c) > kOrthogonal) {
    t = -std::abs(c) / 2;
    upper = c > 0;
  } else {
    upper = tie_break_component(beta, anchor) > 0;
  }
  auto clip = [&](double lo, double hi) {
    return LambdaInterval{std::max(lo, range.lo), std::min(hi, range.hi)};
  };
  LambdaSplit s;
  if (upper) {
    s.up = clip(t, kLambdaMax);
    s.down = clip(kLambdaMin, t);
  } else {
    s.up = clip(kLambdaMin, t);
    s.down = clip(t, kLambdaMax);
  }
  return s;
}

}  // namespace hvtsim

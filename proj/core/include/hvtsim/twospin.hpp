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

// Two spins in the singlet state: the 4x4 quantum reference and the
// independent-event hidden-variable pair state, whose pair marginals are
// given in closed form.

#include <optional>
#include <string>
#include <variant>

#include "hvtsim/qcore.hpp"
#include "hvtsim/rng.hpp"

namespace hvtsim {

// Joint outcome probabilities, first index spin 1.
struct JointProbabilities {
  double uu = 0.0;
  double dd = 0.0;
  double ud = 0.0;
  double du = 0.0;

  double sum() const { return uu + dd + ud + du; }
};

// Quantum reference. A fresh state is the singlet projector; measurements
// collapse it.
struct SingletQm {
  PairDensity rho = singlet_density();

  static PairDensity singlet_density();
};

// Outcome axes recorded by the last measurement: each spin is then a
// single-component state along s * axis.
struct PostAnchors {
  Vec3 first = Vec3::UnitZ();
  Vec3 second = -Vec3::UnitZ();
};

// Hidden-variable pair state. Unmeasured, the pair marginal for (r1, r2) has
// weights ((1-c)/4, (1-c)/4, (1+c)/4, (1+c)/4), c = r1.r2.
struct IhvtPair {
  std::optional<PostAnchors> post_anchors;
};

using PairState = std::variant<SingletQm, IhvtPair>;

enum class Spin { kFirst, kSecond };

JointProbabilities joint_probs(const PairState& state, const Direction& r1, const Direction& r2);

// sum s1 s2 p(s1, s2); -r1.r2 for the unmeasured singlet.
double correlation(const PairState& state, const Direction& r1, const Direction& r2);

BornProbabilities single_marginal(const PairState& state, Spin spin, const Direction& r);

struct JointMeasurement {
  Outcome first = Outcome::kUp;
  Outcome second = Outcome::kDown;
  PairState state;
};
JointMeasurement measure_joint(const PairState& state, const Direction& a, const Direction& b,
                               Rng& rng);

struct SingleMeasurement {
  Outcome outcome = Outcome::kUp;
  PairState state;
};
SingleMeasurement measure_single(const PairState& state, Spin spin, const Direction& r, Rng& rng);

// E(a,b) + E(a,b') + E(a',b) - E(a',b').
double chsh(const PairState& state, const Direction& a, const Direction& a_prime,
            const Direction& b, const Direction& b_prime);

// Label of the pair marginal (hidden variable lambda_ab) consulted by a joint
// measurement with settings (a, b).
struct PairMarginalId {
  Direction a = Direction::plus_z();
  Direction b = Direction::plus_z();

  bool operator==(const PairMarginalId& other) const;
  std::string to_string() const;
};
PairMarginalId nonlocality_witness(const PairState& state, const Direction& a,
                                   const Direction& b);

// Checks, for settings a, b, b', that the outcome product factorizes as
// s1(a, lambda) s2(b, lambda) within each pair marginal, that spin 1's
// marginal does not depend on b, and that the hidden variable consulted does.
struct FactorizationAudit {
  PairMarginalId with_b;
  PairMarginalId with_b_prime;
  bool outcome_product_factorizes = false;
  bool spin1_marginal_independent_of_b = false;
  bool selection_depends_on_b = false;
};
FactorizationAudit factorization_audit(const PairState& state, const Direction& a,
                                       const Direction& b, const Direction& b_prime);

}  // namespace hvtsim

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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "hvtsim/bell.hpp"
#include "hvtsim/bohm.hpp"
#include "hvtsim/grid.hpp"
#include "hvtsim/models.hpp"
#include "hvtsim/naive.hpp"
#include "test_util.hpp"

namespace hvtsim {
namespace {

using std::numbers::pi;
const double kS3 = std::sqrt(3.0) / 2.0;

double four_sigma(double p, double n) { return 4.0 * std::sqrt(std::max(p * (1 - p), 1e-12) / n); }

struct Fixture {
  std::vector<Direction> devices{Direction::plus_z(), Direction::plus_x(),
                                 Direction::from_angles(pi / 3, 0)};
  DirectionGrid grid = DirectionGrid::build(kDefaultGridSize, devices);

  ModelState model(ModelKind kind, RepeatRule rule = RepeatRule::kAdapted,
                   const Preparation& prep = Preparation::x_up()) const {
    ModelOptions o;
    o.grid = &grid;
    o.rule = rule;
    return make_model(kind, prep, o);
  }
  Device device(const Direction& d) const { return make_device(d, &grid); }
};

// --- grid -------------------------------------------------------------------

TEST(Grid, SizeAntipodesAndAxes) {
  const Direction odd = Direction::from_angles(0.123, 4.56);
  const std::vector<Direction> reg{odd};
  const DirectionGrid g = DirectionGrid::build(362, reg);
  EXPECT_EQ(g.size(), 362u);
  EXPECT_DOUBLE_EQ(g.weight(), 1.0 / 362.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(g.at(i).vec().norm(), 1.0, kExactTol);
    EXPECT_TRUE(g.at(g.antipode(i)).is_antipode_of(g.at(i)));
  }
  for (const Vec3& v : {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()}) {
    EXPECT_TRUE(g.contains(Direction::normalized(v)));
    EXPECT_TRUE(g.contains(Direction::normalized(-v)));
  }
  EXPECT_TRUE(g.contains(odd));
  EXPECT_TRUE(g.contains(-odd));
  EXPECT_THROW_CODE(g.index_of(Direction::from_angles(0.3, 0.3)), ErrorCode::kGrid);
  EXPECT_THROW_CODE(DirectionGrid::build(361), ErrorCode::kGrid);
}

TEST(Grid, Distinct) {
  const DirectionGrid g = DirectionGrid::build(362);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) ASSERT_FALSE(g.at(i).matches(g.at(j)));
  }
}

TEST(Grid, CubeProbes) {
  const auto probes = cube_probe_directions();
  EXPECT_EQ(probes.size(), 26u);
  for (const auto& p : probes) {
    EXPECT_NE(std::find_if(probes.begin(), probes.end(),
                           [&](const Direction& q) { return q.is_antipode_of(p); }),
              probes.end());
  }
}

// --- make_model ---------------------------------------------------------------

TEST(MakeModel, Examples) {
  const Fixture f;
  const auto a = f.model(ModelKind::kQuantum);
  EXPECT_LT(std::get<QuantumModel>(a.body).rho.max_abs_diff(up_projector(Direction::plus_x())),
            kExactTol);
  const auto d = f.model(ModelKind::kIndependent);
  const auto& comps = std::get<IndependentModel>(d.body).state.components;
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_DOUBLE_EQ(comps[0].weight, 1.0);
  expect_vec(comps[0].orientation, Vec3::UnitX());
  const auto b = f.model(ModelKind::kDice);
  const auto& faces = std::get<DiceModel>(b.body).dice.faces;
  ASSERT_EQ(faces.size(), 2u);
  EXPECT_DOUBLE_EQ(faces[0].probability, 0.5);
  EXPECT_DOUBLE_EQ(faces[1].probability, 0.5);
  EXPECT_EQ(a.kind(), ModelKind::kQuantum);
  EXPECT_EQ(b.kind(), ModelKind::kDice);
}

TEST(MakeModel, NeedsGridAndKnownKind) {
  EXPECT_THROW_CODE(make_model(ModelKind::kExclusive, Preparation::x_up(), ModelOptions{}),
                    ErrorCode::kGrid);
  EXPECT_THROW_CODE(parse_model_kind("Z"), ErrorCode::kUsage);
  EXPECT_EQ(parse_model_kind("d"), ModelKind::kIndependent);
  EXPECT_EQ(parse_rule("strict"), RepeatRule::kStrict);
  EXPECT_THROW_CODE(parse_rule("loose"), ErrorCode::kUsage);
}

// --- EHVT ---------------------------------------------------------------------

TEST(Ehvt, WeightsFollowTheXUpMarginal) {
  const Fixture f;
  const ModelState c = f.model(ModelKind::kExclusive);
  const auto& s = std::get<ExclusiveModel>(c.body).state;
  double total = 0.0;
  const double m = static_cast<double>(f.grid.size());
  for (const auto& w : ehvt_weights(s)) {
    EXPECT_GE(w.weight, 0.0);
    total += w.weight;
    const double dx = f.grid.at(w.index).x();
    const double expect = (w.spin == Outcome::kUp ? (1 + dx) / 2 : (1 - dx) / 2) / m;
    EXPECT_NEAR(w.weight, expect, kExactTol);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Ehvt, SampleConditionals) {
  const Fixture f;
  const ModelState c = f.model(ModelKind::kExclusive);
  const auto& s = std::get<ExclusiveModel>(c.body).state;
  const std::size_t ix = f.grid.index_of(Direction::plus_x());
  const std::size_t iz = f.grid.index_of(Direction::plus_z());
  const std::size_t imz = f.grid.antipode(iz);
  const int n = 2'000'000;
  int on_x = 0, on_x_up = 0, on_z = 0, on_z_up = 0, on_pm_z = 0;
  for (int k = 0; k < n; ++k) {
    Rng rng = Rng::for_trial(3, 0, k);
    const EhvtEvent e = ehvt_sample(s, rng);
    if (e.index == ix) {
      ++on_x;
      on_x_up += e.spin == Outcome::kUp;
    }
    if (e.index == iz) {
      ++on_z;
      on_z_up += e.spin == Outcome::kUp;
    }
    on_pm_z += e.index == iz || e.index == imz;
  }
  EXPECT_EQ(on_x_up, on_x);
  EXPECT_NEAR(static_cast<double>(on_z_up) / on_z, 0.5, four_sigma(0.5, on_z));
  const double q = 2.0 / 362.0;
  EXPECT_NEAR(static_cast<double>(on_pm_z) / n, q, four_sigma(q, n));
}

TEST(Ehvt, UnregisteredDeviceIsAGridError) {
  const Fixture f;
  Rng rng(1);
  const auto c = f.model(ModelKind::kExclusive);
  EXPECT_THROW_CODE(measure(c, Direction::from_angles(0.7, 0.7), rng), ErrorCode::kGrid);
}

// --- IHVT ---------------------------------------------------------------------

TEST(Ihvt, ReducedExamples) {
  const DirectionGrid g = DirectionGrid::build(362);
  const IhvtState x = ihvt_state(Preparation::x_up(), &g);
  EXPECT_NEAR(ihvt_reduced(x, Direction::plus_x()).p_up, 1.0, kExactTol);
  EXPECT_NEAR(ihvt_reduced(x, Direction::plus_x()).p_down, 0.0, kExactTol);
  const IhvtState one = ihvt_state(Preparation::mixture(MixtureId::kI), &g);
  const IhvtState two = ihvt_state(Preparation::mixture(MixtureId::kII), &g);
  const IhvtState three = ihvt_state(Preparation::mixture(MixtureId::kIII), &g);
  ASSERT_EQ(one.components.size(), 2u);
  ASSERT_EQ(two.components.size(), 2u);
  expect_vec(two.components[0].orientation + two.components[1].orientation, Vec3(0, 0, -1));
  EXPECT_NEAR(std::abs(two.components[0].orientation.y()), kS3, kExactTol);
  for (const Direction& r : g.points()) {
    const double expect = (2.0 - r.z()) / 4.0;
    EXPECT_NEAR(ihvt_reduced(one, r).p_up, expect, kExactTol);
    EXPECT_NEAR(ihvt_reduced(two, r).p_up, expect, kExactTol);
    EXPECT_NEAR(ihvt_reduced(three, r).p_up, expect, kExactTol);
  }
  EXPECT_TRUE(ihvt_equivalent(one, two, g.points()));
  EXPECT_TRUE(ihvt_equivalent(two, three, g.points()));
  EXPECT_FALSE(ihvt_equivalent(one, x, g.points()));
}

TEST(Ihvt, ReducedStateIsConvexCombination) {
  Rng rng(21);
  const DirectionGrid g = DirectionGrid::build(64);
  for (int k = 0; k < 100; ++k) {
    IhvtState s;
    s.grid = &g;
    const double w = rng.uniform();
    s.components = {{w, random_direction(rng).vec()}, {1 - w, random_direction(rng).vec() * 0.5}};
    const Direction r = random_direction(rng);
    const double expect = w * (1 + r.dot(s.components[0].orientation)) / 2 +
                          (1 - w) * (1 + r.dot(s.components[1].orientation)) / 2;
    const auto p = ihvt_reduced(s, r);
    EXPECT_NEAR(p.p_up, expect, kExactTol);
    EXPECT_GE(p.p_up, 0.0);
    EXPECT_LE(p.p_up, 1.0);
  }
}

TEST(Ihvt, FrozenOverlayOverrides) {
  const DirectionGrid g = DirectionGrid::build(362);
  IhvtState s = ihvt_state(Preparation::x_up(), &g);
  s.frozen.push_back({Direction::plus_z(), Outcome::kDown});
  EXPECT_DOUBLE_EQ(ihvt_reduced(s, Direction::plus_z()).p_up, 0.0);
  EXPECT_DOUBLE_EQ(ihvt_reduced(s, -Direction::plus_z()).p_up, 1.0);
  EXPECT_NEAR(ihvt_reduced(s, Direction::plus_x()).p_up, 1.0, kExactTol);
}

// --- measure ------------------------------------------------------------------

TEST(Measure, Examples) {
  const Fixture f;
  const auto a = f.model(ModelKind::kQuantum);
  const auto b = f.model(ModelKind::kDice);
  const auto d = f.model(ModelKind::kIndependent);
  int d_up = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    Rng rng = Rng::for_trial(9, 0, k);
    ASSERT_EQ(measure(a, f.device(Direction::plus_x()), rng).outcome, Outcome::kUp);
    ASSERT_EQ(measure(b, f.device(Direction::plus_x()), rng).outcome, Outcome::kNotActivated);
    const Outcome o = measure(d, f.device(Direction::plus_z()), rng).outcome;
    ASSERT_TRUE(is_activated(o));
    d_up += o == Outcome::kUp;
  }
  EXPECT_NEAR(static_cast<double>(d_up) / n, 0.5, four_sigma(0.5, n));
}

TEST(Measure, DiceFlipsOnTheAntipode) {
  const Fixture f;
  const auto b = f.model(ModelKind::kDice);
  for (int k = 0; k < 1000; ++k) {
    Rng r1 = Rng::for_trial(2, 0, k);
    Rng r2 = Rng::for_trial(2, 0, k);
    const Outcome up = measure(b, Direction::plus_z(), r1).outcome;
    const Outcome down = measure(b, -Direction::plus_z(), r2).outcome;
    ASSERT_EQ(down, flip(up));
  }
}

TEST(Measure, IntoMatchesMeasureAndAllowsAliasing) {
  const Fixture f;
  for (ModelKind kind : {ModelKind::kQuantum, ModelKind::kExclusive, ModelKind::kIndependent,
                         ModelKind::kBellLambda}) {
    for (int k = 0; k < 500; ++k) {
      Rng r1 = Rng::for_trial(4, 0, k);
      Rng r2 = Rng::for_trial(4, 0, k);
      const ModelState m = f.model(kind);
      const Measurement a = measure(m, f.device(Direction::plus_z()), r1);
      ModelState post = m;
      const Outcome o = measure_into(post, f.device(Direction::plus_z()), r2, post);
      ASSERT_EQ(a.outcome, o);
      if (!is_activated(o)) continue;
      Rng r3 = Rng::for_trial(4, 1, k);
      Rng r4 = Rng::for_trial(4, 1, k);
      EXPECT_EQ(measure(a.state, f.device(Direction::plus_x()), r3).outcome,
                measure(post, f.device(Direction::plus_x()), r4).outcome);
    }
  }
}

// Born agreement for the models that reproduce quantum statistics.
TEST(Measure, BornAgreementOnFirstMeasurement) {
  Rng pick(31);
  for (int k = 0; k < 6; ++k) {
    const Direction prep = random_direction(pick);
    const Direction dev = random_direction(pick);
    const std::vector<Direction> reg{dev, prep};
    const DirectionGrid g = DirectionGrid::build(362, reg);
    ModelOptions o;
    o.grid = &g;
    const double exact = (1 + dev.dot(prep)) / 2;
    for (ModelKind kind : {ModelKind::kQuantum, ModelKind::kIndependent, ModelKind::kBellLambda}) {
      const ModelState m = make_model(kind, Preparation::pure(prep), o);
      const Device d = make_device(dev, &g);
      const int n = 20000;
      int up = 0;
      for (int t = 0; t < n; ++t) {
        Rng rng = Rng::for_trial(77, k, t);
        up += measure(m, d, rng).outcome == Outcome::kUp;
      }
      EXPECT_NEAR(static_cast<double>(up) / n, exact, four_sigma(exact, n))
          << model_label(kind) << " " << dev.to_string();
    }
  }
}

// QS-III: a repeat along the same device reproduces the first outcome.
TEST(Measure, RepeatSameDirectionAllModelsAndRules) {
  const Fixture f;
  for (ModelKind kind : {ModelKind::kQuantum, ModelKind::kDice, ModelKind::kExclusive,
                         ModelKind::kIndependent, ModelKind::kBellLambda, ModelKind::kBohm}) {
    for (RepeatRule rule : {RepeatRule::kStrict, RepeatRule::kAdapted}) {
      const ModelState m = f.model(kind, rule);
      const int n = kind == ModelKind::kBohm ? 3000 : 20000;
      for (const Direction& dir : f.devices) {
        const Device dev = f.device(dir);
        int counter = 0;
        for (int t = 0; t < n; ++t) {
          Rng rng = Rng::for_trial(8, 0, t);
          const Measurement first = measure(m, dev, rng);
          if (!is_activated(first.outcome)) continue;
          const Outcome again = measure(first.state, dev, rng).outcome;
          counter += is_activated(again) && again != first.outcome;
        }
        EXPECT_EQ(counter, 0) << model_label(kind) << " " << rule_name(rule) << " "
                              << dir.to_string();
      }
    }
  }
}

// Same property over the exact branch tree, which also covers the rarely
// activated exclusive-event model.
TEST(Branches, RepeatSameDirectionNeverChanges) {
  const Fixture f;
  for (ModelKind kind : {ModelKind::kQuantum, ModelKind::kDice, ModelKind::kExclusive,
                         ModelKind::kIndependent, ModelKind::kBellLambda}) {
    for (RepeatRule rule : {RepeatRule::kStrict, RepeatRule::kAdapted}) {
      for (const Direction& dir : f.devices) {
        const Device dev = f.device(dir);
        double activated_repeat = 0.0;
        for (const Branch& b1 : branches(f.model(kind, rule), dev)) {
          if (!is_activated(b1.outcome) || b1.probability == 0.0) continue;
          for (const Branch& b2 : branches(b1.state, dev)) {
            if (!is_activated(b2.outcome) || b2.probability == 0.0) continue;
            EXPECT_EQ(b2.outcome, b1.outcome) << model_label(kind) << " " << rule_name(rule);
            activated_repeat += b1.probability * b2.probability;
          }
        }
        if (kind != ModelKind::kDice || dir.matches(Direction::plus_z())) {
          EXPECT_GT(activated_repeat, 0.0) << model_label(kind) << " " << rule_name(rule);
        }
      }
    }
  }
}

// QS-IV with the adapted rule: the second measurement sees (1 + s r.r0)/2.
TEST(Measure, RepeatDifferentDirectionAdapted) {
  const Fixture f;
  const Direction r0 = Direction::plus_z();
  const Direction r = Direction::from_angles(pi / 3, 0);
  for (ModelKind kind : {ModelKind::kQuantum, ModelKind::kIndependent, ModelKind::kBellLambda}) {
    const ModelState m = f.model(kind);
    std::array<int, 2> seen{}, up{};
    const int n = 40000;
    for (int t = 0; t < n; ++t) {
      Rng rng = Rng::for_trial(10, 0, t);
      const Measurement first = measure(m, f.device(r0), rng);
      const int s = first.outcome == Outcome::kUp ? 0 : 1;
      ++seen[s];
      up[s] += measure(first.state, f.device(r), rng).outcome == Outcome::kUp;
    }
    for (int s = 0; s < 2; ++s) {
      const double exact = (1 + (s == 0 ? 1 : -1) * r.dot(r0)) / 2;
      EXPECT_NEAR(static_cast<double>(up[s]) / seen[s], exact, four_sigma(exact, seen[s]))
          << model_label(kind);
    }
  }
}

// QS-IV with the strict rule: p(z up, then x down) vanishes for D.
TEST(Measure, StrictIndependentModelNeverFlipsX) {
  const Fixture f;
  const ModelState d = f.model(ModelKind::kIndependent, RepeatRule::kStrict);
  double p_up_down = 0.0;
  double p_up = 0.0;
  for (const Branch& b1 : branches(d, f.device(Direction::plus_z()))) {
    if (b1.outcome != Outcome::kUp) continue;
    p_up += b1.probability;
    for (const Branch& b2 : branches(b1.state, f.device(Direction::plus_x()))) {
      if (b2.outcome == Outcome::kDown) p_up_down += b1.probability * b2.probability;
    }
  }
  EXPECT_NEAR(p_up, 0.5, kExactTol);
  EXPECT_EQ(p_up_down, 0.0);
}

TEST(Branches, ProbabilitiesSumToOne) {
  const Fixture f;
  for (ModelKind kind : {ModelKind::kQuantum, ModelKind::kDice, ModelKind::kExclusive,
                         ModelKind::kIndependent, ModelKind::kBellLambda, ModelKind::kNaive}) {
    for (const Direction& dir : f.devices) {
      double total = 0.0;
      for (const Branch& b : branches(f.model(kind), f.device(dir))) {
        EXPECT_GE(b.probability, 0.0);
        total += b.probability;
      }
      EXPECT_NEAR(total, 1.0, 1e-12) << model_label(kind);
    }
  }
}

// --- Bell ---------------------------------------------------------------------

TEST(Bell, OutcomeExamples) {
  const Vec3 x = Vec3::UnitX();
  for (double lambda = -0.5; lambda <= 0.5; lambda += 0.01) {
    EXPECT_EQ(bell_outcome(lambda, x, x, 1), 1);
    EXPECT_EQ(bell_outcome(lambda, -x, x, 1), -1);
    if (lambda != 0.0) EXPECT_EQ(bell_outcome(lambda, Vec3::UnitZ(), x, 1), lambda > 0 ? 1 : -1);
  }
}

// Mean outcome over a fine lambda grid equals beta . anchor * sign.
TEST(Bell, ExpectationIsBornRule) {
  Rng rng(41);
  const int cells = 200000;
  for (int k = 0; k < 50; ++k) {
    const Vec3 beta = random_direction(rng).vec();
    const Vec3 anchor = random_direction(rng).vec();
    const int sign = rng.uniform() < 0.5 ? 1 : -1;
    double mean = 0.0;
    for (int i = 0; i < cells; ++i) {
      const double lambda = -0.5 + (i + 0.5) / cells;
      mean += bell_outcome(lambda, beta, anchor, sign);
    }
    mean /= cells;
    EXPECT_NEAR(mean, sign * beta.dot(anchor), 2.0 / cells);
  }
}

TEST(Bell, SplitLengthsAreBornProbabilities) {
  Rng rng(42);
  for (int k = 0; k < 100; ++k) {
    const Vec3 beta = random_direction(rng).vec();
    const Vec3 anchor = random_direction(rng).vec();
    const LambdaSplit s = bell_split(LambdaInterval{}, beta, anchor, 1);
    EXPECT_NEAR(s.up.length(), (1 + beta.dot(anchor)) / 2, kExactTol);
    EXPECT_NEAR(s.up.length() + s.down.length(), 1.0, kExactTol);
  }
}

TEST(Bell, PostRules) {
  const Fixture f;
  const Device z = f.device(Direction::plus_z());
  const Device x = f.device(Direction::plus_x());
  const int n = 20000;
  for (RepeatRule rule : {RepeatRule::kStrict, RepeatRule::kAdapted}) {
    const ModelState e = f.model(ModelKind::kBellLambda, rule);
    int after_up = 0, x_up = 0, z_again = 0;
    for (int t = 0; t < n; ++t) {
      Rng rng = Rng::for_trial(12, 0, t);
      const Measurement first = measure(e, z, rng);
      if (first.outcome != Outcome::kUp) continue;
      ++after_up;
      Rng copy = rng;
      x_up += measure(first.state, x, rng).outcome == Outcome::kUp;
      z_again += measure(first.state, z, copy).outcome == Outcome::kUp;
    }
    EXPECT_EQ(z_again, after_up);
    if (rule == RepeatRule::kStrict) {
      EXPECT_EQ(x_up, after_up);
    } else {
      EXPECT_NEAR(static_cast<double>(x_up) / after_up, 0.5, four_sigma(0.5, after_up));
    }
  }
}

TEST(Bell, PostStateFields) {
  BellLambdaState s;
  Rng rng(3);
  const BellLambdaState strict =
      bell_post(s, Direction::plus_z(), 1, RepeatRule::kStrict, &rng);
  expect_vec(strict.anchor, Vec3::UnitX());
  EXPECT_EQ(strict.anchor_sign, 1);
  const BellLambdaState adapted =
      bell_post(s, Direction::plus_z(), -1, RepeatRule::kAdapted, &rng);
  expect_vec(adapted.anchor, Vec3::UnitZ());
  EXPECT_EQ(adapted.anchor_sign, -1);
  EXPECT_GE(adapted.lambda.lo, kLambdaMin);
  EXPECT_LE(adapted.lambda.hi, kLambdaMax);
}

// --- Bohm ---------------------------------------------------------------------

TEST(Bohm, XiDistribution) {
  const XiSquared half = bohm_xi_from_uniform(0.5);
  EXPECT_DOUBLE_EQ(half.first, 0.5);
  EXPECT_DOUBLE_EQ(half.second, 0.5);
  Rng rng(51);
  const int n = 1'000'000;
  for (double j1 : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    int wins = 0;
    for (int k = 0; k < n; ++k) {
      const XiSquared xi = bohm_draw_xi(rng);
      ASSERT_GT(xi.first, 0.0);
      ASSERT_GT(xi.second, 0.0);
      ASSERT_NEAR(xi.first + xi.second, 1.0, 1e-15);
      wins += j1 * j1 / xi.first > (1 - j1) * (1 - j1) / xi.second;
    }
    EXPECT_NEAR(static_cast<double>(wins) / n, j1, four_sigma(j1, n));
  }
}

TEST(Bohm, EvolveExamples) {
  const BohmTrajectory t = bohm_evolve(BohmState{0.5, 0.5, 0.25, 0.75, 1.0});
  EXPECT_EQ(t.winner, BohmWinner::kFirst);
  EXPECT_TRUE(t.monotone);
  for (std::size_t i = 1; i < t.points.size(); ++i) {
    ASSERT_GE(t.points[i].first, t.points[i - 1].first);
  }
  EXPECT_LT(t.points.back().second, 1e-6);
  EXPECT_LT(t.max_sum_drift, 1e-9);

  const BohmTrajectory tie = bohm_evolve(BohmState{0.5, 0.5, 0.5, 0.5, 1.0});
  EXPECT_EQ(tie.winner, BohmWinner::kTie);
}

TEST(Bohm, EvolveErrors) {
  BohmConfig tight;
  tight.max_steps = 10;
  EXPECT_THROW_CODE(bohm_evolve(BohmState{0.5, 0.5, 0.3, 0.7, 1.0}, tight),
                    ErrorCode::kIntegration);
  EXPECT_THROW_CODE(bohm_evolve(BohmState{0.0, 1.0, 0.3, 0.7, 1.0}), ErrorCode::kIntegration);
  EXPECT_THROW_CODE(bohm_evolve(BohmState{0.5, 0.5, 0.0, 1.0, 1.0}), ErrorCode::kIntegration);
  BohmConfig eps;
  eps.eps = 0.6;
  EXPECT_THROW_CODE(bohm_evolve(BohmState{0.5, 0.5, 0.3, 0.7, 1.0}, eps),
                    ErrorCode::kIntegration);
}

// The winner is branch 1 exactly when R1 > R2 at the start.
TEST(Bohm, WinnerFollowsInitialRates) {
  Rng rng(52);
  for (int k = 0; k < 300; ++k) {
    const double j1 = 0.05 + 0.9 * rng.uniform();
    const XiSquared xi = bohm_draw_xi(rng);
    const BohmTrajectory t = bohm_evolve(BohmState{j1, 1 - j1, xi.first, xi.second, 1.0}, {}, false);
    const bool first = j1 * j1 / xi.first > (1 - j1) * (1 - j1) / xi.second;
    EXPECT_EQ(t.winner, first ? BohmWinner::kFirst : BohmWinner::kSecond);
    EXPECT_LT(t.max_sum_drift, 1e-9);
    EXPECT_TRUE(t.monotone);
  }
}

TEST(Bohm, ModelFrequencyMatchesWeight) {
  // Preparation along z measured along 60 deg: J1 = (1 + cos 60)/2 = 0.75.
  const std::vector<Direction> reg{Direction::from_angles(pi / 3, 0)};
  const DirectionGrid g = DirectionGrid::build(362, reg);
  ModelOptions o;
  o.grid = &g;
  const ModelState f = make_model(ModelKind::kBohm, Preparation::pure(Direction::plus_z()), o);
  const Device dev = make_device(reg[0], &g);
  const int n = 20000;
  int up = 0;
  for (int t = 0; t < n; ++t) {
    Rng rng = Rng::for_trial(13, 0, t);
    up += measure(f, dev, rng).outcome == Outcome::kUp;
  }
  EXPECT_NEAR(static_cast<double>(up) / n, 0.75, four_sigma(0.75, n));
}

// --- naive --------------------------------------------------------------------

TEST(Naive, SxCheck) {
  const NaiveSxCheck c = naive_hvt_sx_check();
  EXPECT_NEAR(c.x_basis.p_up, 0.5, kExactTol);
  EXPECT_NEAR(c.x_basis.p_down, 0.5, kExactTol);
  EXPECT_NEAR(c.reference.p_up, 1.0, kExactTol);
  EXPECT_NEAR(c.reference.p_down, 0.0, kExactTol);
  EXPECT_NEAR(c.z_basis.p_up, 0.5, kExactTol);
  EXPECT_NEAR(c.z_basis.p_down, 0.5, kExactTol);
}

TEST(Naive, Spectrum) {
  const NaiveSpectrum off = naive_spectrum_check(pi / 2, pi / 4);
  ASSERT_EQ(off.distinct.size(), 2u);
  EXPECT_NEAR(off.distinct[0], 0.0, kExactTol);
  EXPECT_NEAR(off.distinct[1], std::sqrt(2.0) / 2, kExactTol);
  EXPECT_FALSE(off.respects_qs1);
  const NaiveSpectrum on = naive_spectrum_check(0, 0);
  ASSERT_EQ(on.distinct.size(), 2u);
  EXPECT_NEAR(on.distinct[0], -0.5, kExactTol);
  EXPECT_NEAR(on.distinct[1], 0.5, kExactTol);
  EXPECT_TRUE(on.respects_qs1);
}

TEST(Naive, StateIsZDiagonal) {
  const QubitState rho = naive_z_state(Vec3::UnitX());
  Matrix2 half;
  half << 0.5, 0, 0, 0.5;
  expect_mat(rho.matrix(), half);
}

}  // namespace
}  // namespace hvtsim

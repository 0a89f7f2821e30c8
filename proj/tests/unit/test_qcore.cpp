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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "hvtsim/error.hpp"
#include "hvtsim/qcore.hpp"
#include "hvtsim/rng.hpp"
#include "test_util.hpp"

namespace hvtsim {
namespace {

using std::numbers::pi;
const double kS3 = std::sqrt(3.0) / 2.0;
const Complex kI{0.0, 1.0};

TEST(Direction, FromAngles) {
  expect_vec(Direction::from_angles(0, 0).vec(), {0, 0, 1});
  expect_vec(Direction::from_angles(pi / 2, 0).vec(), {1, 0, 0});
  expect_vec(Direction::from_angles(2 * pi / 3, pi / 2).vec(), {0, kS3, -0.5});
  expect_vec(direction_from_angles(pi / 2, pi / 2).vec(), {0, 1, 0});
}

TEST(Direction, AnglesArePeriodic) {
  const Direction a = Direction::from_angles(1.1, 0.3);
  const Direction b = Direction::from_angles(1.1 + 2 * pi, 0.3 - 2 * pi);
  EXPECT_TRUE(a.matches(b));
}

TEST(Direction, RejectsNonUnit) {
  EXPECT_THROW_CODE(Direction::from_components(0, 0, 2), ErrorCode::kInvalidDirection);
  EXPECT_THROW_CODE(Direction::normalized(Vec3::Zero()), ErrorCode::kInvalidDirection);
}

TEST(Direction, MatchingIsDotProximity) {
  const Direction z = Direction::plus_z();
  EXPECT_TRUE(z.matches(Direction::from_angles(1e-6, 0)));
  EXPECT_FALSE(z.matches(Direction::from_angles(1e-3, 0)));
  EXPECT_TRUE((-z).is_antipode_of(z));
}

TEST(Outcome, Values) {
  EXPECT_EQ(outcome_value(Outcome::kUp), 1);
  EXPECT_EQ(outcome_value(Outcome::kDown), -1);
  EXPECT_FALSE(outcome_value(Outcome::kNotActivated).has_value());
  EXPECT_EQ(outcome_from_sign(-1), Outcome::kDown);
  EXPECT_EQ(flip(Outcome::kUp), Outcome::kDown);
}

TEST(SpinOperator, Examples) {
  Matrix2 sz;
  sz << 1, 0, 0, -1;
  expect_mat(spin_operator(Direction::plus_z()), sz);
  Matrix2 sx;
  sx << 0, 1, 1, 0;
  expect_mat(spin_operator(Direction::plus_x()), sx);
  Matrix2 s;
  s << -0.5, -kI * kS3, kI * kS3, 0.5;
  expect_mat(spin_operator(Direction::from_components(0, kS3, -0.5)), s);
}

TEST(SpinOperator, EigenvaluesAndTrace) {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const Matrix2 s = spin_operator(random_direction(rng));
    EXPECT_NEAR(std::abs(s.trace()), 0.0, kExactTol);
    // s^2 = I is equivalent to eigenvalues +-1 for a Hermitian matrix.
    EXPECT_LT((s * s - Matrix2::Identity()).cwiseAbs().maxCoeff(), kExactTol);
    EXPECT_LT((s - s.adjoint()).cwiseAbs().maxCoeff(), kExactTol);
  }
}

TEST(UpProjector, Examples) {
  Matrix2 up_z;
  up_z << 1, 0, 0, 0;
  expect_mat(up_projector(Direction::plus_z()).matrix(), up_z);
  Matrix2 r1;
  r1 << 0.25, -kI * kS3 / 2.0, kI * kS3 / 2.0, 0.75;
  expect_mat(up_projector(Direction::from_components(0, kS3, -0.5)).matrix(), r1);
  Matrix2 up_x;
  up_x << 0.5, 0.5, 0.5, 0.5;
  expect_mat(up_projector(Direction::plus_x()).matrix(), up_x);
}

TEST(UpProjector, ComplementAndIdempotence) {
  Rng rng(12);
  for (int k = 0; k < 200; ++k) {
    const Direction d = random_direction(rng);
    const Matrix2 p = up_projector(d).matrix();
    expect_mat(p + up_projector(-d).matrix(), Matrix2::Identity());
    expect_mat(p * p, p);
    EXPECT_NEAR(p.trace().real(), 1.0, kExactTol);
  }
}

TEST(Born, Examples) {
  const QubitState x_up = up_projector(Direction::plus_x());
  EXPECT_NEAR(born(x_up, Direction::plus_x()).p_up, 1.0, kExactTol);
  EXPECT_NEAR(born(x_up, Direction::plus_x()).p_down, 0.0, kExactTol);
  EXPECT_NEAR(born(x_up, Direction::plus_z()).p_up, 0.5, kExactTol);
  // Frozen: <up_d| rho |up_d> for d = (sqrt3/2, 0, 1/2), worked by hand.
  const auto p = born(x_up, Direction::from_angles(pi / 3, 0));
  EXPECT_NEAR(p.p_up, 0.9330127018922193, kExactTol);
  EXPECT_NEAR(p.p_down, 0.0669872981077807, kExactTol);
}

TEST(Born, AgreesWithSpinorAmplitude) {
  // Independent route: |<up_d|psi>|^2 with explicit spinors.
  Rng rng(13);
  for (int k = 0; k < 200; ++k) {
    const Direction m = random_direction(rng);
    const Direction d = random_direction(rng);
    const auto spinor = [](const Direction& r) {
      const double t = r.theta();
      const double f = r.phi();
      return Eigen::Vector2cd(std::cos(t / 2), std::polar(std::sin(t / 2), f));
    };
    const double amp = std::norm(spinor(d).dot(spinor(m)));
    EXPECT_NEAR(born(up_projector(m), d).p_up, amp, 1e-12);
  }
}

TEST(Born, SumsToOneAndMatchesSpinExpectation) {
  Rng rng(14);
  for (int k = 0; k < 200; ++k) {
    const QubitState rho = random_state(rng);
    const Direction d = random_direction(rng);
    const auto p = born(rho, d);
    EXPECT_NEAR(p.p_up + p.p_down, 1.0, kExactTol);
    EXPECT_GE(p.p_up, 0.0);
    EXPECT_GE(p.p_down, 0.0);
    const double expectation = (rho.matrix() * spin_operator(d)).trace().real();
    EXPECT_NEAR(expectation, p.p_up - p.p_down, kExactTol);
  }
}

TEST(Born, IsLinearInMixtures) {
  Rng rng(15);
  for (int k = 0; k < 100; ++k) {
    const std::vector<WeightedState<2>> parts{{0.2, random_state(rng)}, {0.5, random_state(rng)},
                                              {0.3, random_state(rng)}};
    const Direction d = random_direction(rng);
    double expect = 0.0;
    for (const auto& c : parts) expect += c.weight * born(c.rho, d).p_up;
    EXPECT_NEAR(born(mixture<2>(parts), d).p_up, expect, kExactTol);
  }
}

TEST(Collapse, Examples) {
  const QubitState x_up = up_projector(Direction::plus_x());
  expect_mat(collapse(x_up, Direction::plus_x(), Outcome::kUp).matrix(), x_up.matrix());
  Matrix2 up_z;
  up_z << 1, 0, 0, 0;
  expect_mat(collapse(x_up, Direction::plus_z(), Outcome::kUp).matrix(), up_z);
  EXPECT_THROW_CODE(collapse(x_up, Direction::plus_x(), Outcome::kDown),
                    ErrorCode::kImpossibleOutcome);
  EXPECT_THROW_CODE(collapse(x_up, Direction::plus_x(), Outcome::kNotActivated),
                    ErrorCode::kImpossibleOutcome);
}

TEST(Mixture, QsvIdentity) {
  const std::vector<WeightedState<2>> one{{0.25, up_projector(Direction::plus_z())},
                                          {0.75, up_projector(-Direction::plus_z())}};
  const std::vector<WeightedState<2>> two{
      {0.5, up_projector(Direction::from_angles(2 * pi / 3, pi / 2))},
      {0.5, up_projector(Direction::from_angles(2 * pi / 3, 3 * pi / 2))}};
  Matrix2 diag;
  diag << 0.25, 0, 0, 0.75;
  expect_mat(mixture<2>(one).matrix(), diag);
  expect_mat(mixture<2>(two).matrix(), diag);
  EXPECT_LT(mixture<2>(one).max_abs_diff(mixture<2>(two)), kExactTol);
}

TEST(Mixture, IdentityAndNormalization) {
  const QubitState rho = up_projector(Direction::from_angles(0.4, 1.0));
  const std::vector<WeightedState<2>> single{{1.0, rho}};
  EXPECT_LT(mixture<2>(single).max_abs_diff(rho), kExactTol);
  const std::vector<WeightedState<2>> bad{{0.5, rho}, {0.6, rho}};
  EXPECT_THROW_CODE(mixture<2>(bad), ErrorCode::kNormalization);
  const std::vector<WeightedState<2>> negative{{1.5, rho}, {-0.5, rho}};
  EXPECT_THROW_CODE(mixture<2>(negative), ErrorCode::kNormalization);
}

TEST(DensityMatrix, Validation) {
  Matrix2 not_hermitian;
  not_hermitian << 0.5, 0.1, 0.0, 0.5;
  EXPECT_THROW_CODE(QubitState::from_matrix(not_hermitian), ErrorCode::kInvalidState);
  Matrix2 negative;
  negative << 1.5, 0, 0, -0.5;
  EXPECT_THROW_CODE(QubitState::from_matrix(negative), ErrorCode::kInvalidState);
  Matrix2 trace;
  trace << 0.5, 0, 0, 0.4;
  EXPECT_THROW_CODE(QubitState::from_matrix(trace), ErrorCode::kInvalidState);
  EXPECT_NO_THROW(QubitState::from_matrix(up_projector(Direction::plus_y()).matrix()));
}

TEST(PartialTrace, OfProductState) {
  Rng rng(16);
  const QubitState a = random_state(rng);
  const QubitState b = random_state(rng);
  const Matrix4 ab = kron(a.matrix(), b.matrix());
  expect_mat(trace_out_second(ab), a.matrix());
  expect_mat(trace_out_first(ab), b.matrix());
}

TEST(Broadcast, Examples) {
  Matrix2 half;
  half << 0.5, 0, 0, 0.5;
  const auto mixed = broadcast_demo(QubitState::from_matrix(half), Direction::plus_z());
  expect_mat(mixed.reduced_object.matrix(), half);
  expect_mat(mixed.reduced_meter.matrix(), half);

  const auto x = broadcast_demo(up_projector(Direction::plus_x()), Direction::plus_z());
  expect_mat(x.reduced_object.matrix(), half);
  expect_mat(x.reduced_meter.matrix(), half);
  EXPECT_NEAR(std::abs(x.reduced_object(0, 1) - Complex(0.5)), 0.5, kExactTol);

  const QubitState up_z = up_projector(Direction::plus_z());
  const auto z = broadcast_demo(up_z, Direction::plus_z());
  EXPECT_LT(z.reduced_object.max_abs_diff(up_z), kExactTol);
  EXPECT_LT(z.reduced_meter.max_abs_diff(up_z), kExactTol);
}

TEST(Broadcast, JointStateHasCopiedComponents) {
  const QubitState x_up = up_projector(Direction::plus_x());
  const auto r = broadcast_demo(x_up, Direction::plus_z());
  // |00><00|, |00><11|, |11><00|, |11><11| with the coefficients of rho.
  Matrix4 expect = Matrix4::Zero();
  expect(0, 0) = 0.5;
  expect(0, 3) = 0.5;
  expect(3, 0) = 0.5;
  expect(3, 3) = 0.5;
  expect_mat(r.joint.matrix(), expect);
}

TEST(Broadcast, DiagonalRoundTripAndDephasing) {
  Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    const Direction basis = random_direction(rng);
    const QubitState rho = random_state(rng);
    const auto r = broadcast_demo(rho, basis);
    EXPECT_NEAR(r.reduced_object.matrix().trace().real(), 1.0, kExactTol);
    EXPECT_NEAR(r.reduced_meter.matrix().trace().real(), 1.0, kExactTol);
    // Dephased state: rho averaged with its conjugation by sigma.basis.
    const Matrix2 s = spin_operator(basis);
    const Matrix2 dephased = 0.5 * (rho.matrix() + s * rho.matrix() * s);
    expect_mat(r.reduced_object.matrix(), dephased);
    expect_mat(r.reduced_meter.matrix(), dephased);

    const QubitState diag = QubitState::from_matrix(dephased);
    const auto again = broadcast_demo(diag, basis);
    EXPECT_LT(again.reduced_object.max_abs_diff(diag), kExactTol);
    EXPECT_LT(again.reduced_meter.max_abs_diff(diag), kExactTol);
  }
}

TEST(Bloch, RoundTrip) {
  Rng rng(18);
  for (int k = 0; k < 100; ++k) {
    const QubitState rho = random_state(rng);
    EXPECT_LT(bloch_state(bloch_vector(rho)).max_abs_diff(rho), kExactTol);
  }
  EXPECT_THROW_CODE(bloch_state(Vec3(1, 1, 0)), ErrorCode::kInvalidState);
}

}  // namespace
}  // namespace hvtsim

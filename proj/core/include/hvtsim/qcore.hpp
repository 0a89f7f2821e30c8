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

// Small dense complex linear algebra for one and two spin-1/2 systems:
// Bloch-sphere directions, Pauli spin operators, density matrices, the Born
// rule, projective collapse, convex mixtures, and the measurement-broadcast
// construction.
//
// Outcome values follow the Pauli convention (+1 / -1). The spin-1/2
// eigenvalues are recovered as S = sigma / 2.

#include <complex>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "hvtsim/error.hpp"

namespace hvtsim {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;

template <int N>
using CMatrix = Eigen::Matrix<Complex, N, N>;
using Matrix2 = CMatrix<2>;
using Matrix4 = CMatrix<4>;

inline constexpr double kExactTol = 1e-12;
inline constexpr double kPsdSlack = 1e-10;
inline constexpr double kDirectionMatchTol = 1e-9;

// A unit vector on the Bloch sphere. Instances are always normalized to
// within kExactTol.
class Direction {
 public:
  // x = sin(theta)cos(phi), y = sin(theta)sin(phi), z = cos(theta).
  static Direction from_angles(double theta, double phi);
  // Throws kInvalidDirection unless |(x, y, z)| = 1 within kExactTol.
  static Direction from_components(double x, double y, double z);
  // Rescales v to unit length. Throws kInvalidDirection for a zero vector.
  static Direction normalized(const Vec3& v);

  static Direction plus_x() { return Direction(Vec3::UnitX()); }
  static Direction plus_y() { return Direction(Vec3::UnitY()); }
  static Direction plus_z() { return Direction(Vec3::UnitZ()); }

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

  double dot(const Direction& other) const { return v_.dot(other.v_); }
  double dot(const Vec3& other) const { return v_.dot(other); }

  Direction operator-() const { return Direction(-v_); }

  // Dot-product proximity: |d1 . d2 - 1| < kDirectionMatchTol.
  bool matches(const Direction& other) const;
  bool is_antipode_of(const Direction& other) const;

  double theta() const;
  double phi() const;

  std::string to_string() const;

 private:
  explicit Direction(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

Direction direction_from_angles(double theta, double phi);

enum class Outcome { kUp, kDown, kNotActivated };

inline bool is_activated(Outcome o) { return o != Outcome::kNotActivated; }
// +1 for Up, -1 for Down, nullopt when the device did not fire.
std::optional<int> outcome_value(Outcome o);
// Throws kImpossibleOutcome for NotActivated.
int outcome_sign(Outcome o);
Outcome outcome_from_sign(int sign);
Outcome flip(Outcome o);
std::string_view outcome_name(Outcome o);

// Hermitian, positive semidefinite, unit-trace N x N matrix.
template <int N>
class DensityMatrix {
 public:
  static_assert(N == 2 || N == 4, "only one- and two-spin states are modelled");

  // Maximally mixed state I / N.
  DensityMatrix() : m_(CMatrix<N>::Identity() / static_cast<double>(N)) {}

  // Validates every invariant; throws kInvalidState on violation.
  static DensityMatrix from_matrix(const CMatrix<N>& m);
  // For callers that construct a state from a formula that is valid by
  // construction (projectors, convex combinations of valid states).
  static DensityMatrix unchecked(const CMatrix<N>& m) { return DensityMatrix(m); }

  const CMatrix<N>& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }
  double max_abs_diff(const DensityMatrix& other) const {
    return (m_ - other.m_).cwiseAbs().maxCoeff();
  }

 private:
  explicit DensityMatrix(const CMatrix<N>& m) : m_(m) {}
  CMatrix<N> m_;
};

using QubitState = DensityMatrix<2>;
using PairDensity = DensityMatrix<4>;

// Reasons a matrix is not a density matrix; empty when valid.
template <int N>
std::optional<std::string> density_violation(const CMatrix<N>& m);

struct BornProbabilities {
  double p_up = 0.0;
  double p_down = 0.0;
};

const Matrix2& pauli_x();
const Matrix2& pauli_y();
const Matrix2& pauli_z();

// d.x sigma_x + d.y sigma_y + d.z sigma_z; eigenvalues +1 and -1.
Matrix2 spin_operator(const Direction& d);

// (I + sigma . d) / 2.
QubitState up_projector(const Direction& d);

// (I + sigma . v) / 2 for a Bloch vector with |v| <= 1.
QubitState bloch_state(const Vec3& v);
Vec3 bloch_vector(const QubitState& rho);

// Eigenvectors of spin_operator(d) for +1 and -1, with a fixed phase
// convention (|up> = (cos t/2, e^{i phi} sin t/2)).
struct SpinBasis {
  Eigen::Vector2cd up;
  Eigen::Vector2cd down;
};
SpinBasis spin_basis(const Direction& d);

BornProbabilities born(const QubitState& rho, const Direction& d);

// Projects onto the recorded eigenstate. Throws kImpossibleOutcome when the
// outcome has zero Born probability or is NotActivated.
QubitState collapse(const QubitState& rho, const Direction& d, Outcome out);

template <int N>
struct WeightedState {
  double weight = 0.0;
  DensityMatrix<N> rho;
};

// Convex combination. Throws kNormalization when weights are negative or do
// not sum to one within kExactTol.
template <int N>
DensityMatrix<N> mixture(std::span<const WeightedState<N>> components);

Matrix4 kron(const Matrix2& a, const Matrix2& b);
// Trace over the second factor of a two-spin operator.
Matrix2 trace_out_second(const Matrix4& m);
// Trace over the first factor of a two-spin operator.
Matrix2 trace_out_first(const Matrix4& m);

struct BroadcastResult {
  PairDensity joint;
  QubitState reduced_object;
  QubitState reduced_meter;
};

// Correlates a meter with the object by copying the object's basis label:
//   sum_{mu,nu} rho_{mu nu} |mu (x) M(mu)><nu (x) M(nu)|,
// with pointer states M(mu) equal to the basis vectors of `basis`. Returns
// the joint state and both partial traces. A state diagonal in `basis` is
// reproduced on both sides; otherwise both sides lose the off-diagonal
// terms.
BroadcastResult broadcast_demo(const QubitState& rho, const Direction& basis);

// Matrix of rho in the spin basis of `basis` (row/column 0 = up).
Matrix2 in_basis(const QubitState& rho, const Direction& basis);

}  // namespace hvtsim

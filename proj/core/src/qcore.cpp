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

#include "hvtsim/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace hvtsim {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDirection: return "invalid_direction";
    case ErrorCode::kInvalidState: return "invalid_state";
    case ErrorCode::kImpossibleOutcome: return "impossible_outcome";
    case ErrorCode::kNormalization: return "normalization";
    case ErrorCode::kGrid: return "grid";
    case ErrorCode::kIntegration: return "integration";
    case ErrorCode::kUsage: return "usage";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Direction

Direction Direction::from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return Direction(Vec3(st * std::cos(phi), st * std::sin(phi), std::cos(theta)));
}

Direction Direction::from_components(double x, double y, double z) {
  const Vec3 v(x, y, z);
  if (!std::isfinite(v.squaredNorm()) || std::abs(v.squaredNorm() - 1.0) > kExactTol) {
    throw Error(ErrorCode::kInvalidDirection,
                "direction (" + std::to_string(x) + ", " + std::to_string(y) + ", " +
                    std::to_string(z) + ") is not a unit vector");
  }
  return Direction(v);
}

Direction Direction::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::kInvalidDirection, "cannot normalize a zero or non-finite vector");
  }
  return Direction(v / n);
}

bool Direction::matches(const Direction& other) const {
  return std::abs(dot(other) - 1.0) < kDirectionMatchTol;
}

bool Direction::is_antipode_of(const Direction& other) const {
  return std::abs(dot(other) + 1.0) < kDirectionMatchTol;
}

double Direction::theta() const { return std::acos(std::clamp(v_.z(), -1.0, 1.0)); }

double Direction::phi() const {
  if (v_.x() == 0.0 && v_.y() == 0.0) return 0.0;
  return std::atan2(v_.y(), v_.x());
}

std::string Direction::to_string() const {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(%.6f, %.6f, %.6f)", v_.x(), v_.y(), v_.z());
  return buf;
}

Direction direction_from_angles(double theta, double phi) {
  return Direction::from_angles(theta, phi);
}

// ---------------------------------------------------------------------------
// Outcome

std::optional<int> outcome_value(Outcome o) {
  switch (o) {
    case Outcome::kUp: return 1;
    case Outcome::kDown: return -1;
    case Outcome::kNotActivated: return std::nullopt;
  }
  return std::nullopt;
}

int outcome_sign(Outcome o) {
  const auto v = outcome_value(o);
  if (!v) throw Error(ErrorCode::kImpossibleOutcome, "a non-activated outcome carries no value");
  return *v;
}

Outcome outcome_from_sign(int sign) { return sign >= 0 ? Outcome::kUp : Outcome::kDown; }

Outcome flip(Outcome o) {
  switch (o) {
    case Outcome::kUp: return Outcome::kDown;
    case Outcome::kDown: return Outcome::kUp;
    case Outcome::kNotActivated: return Outcome::kNotActivated;
  }
  return o;
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kUp: return "up";
    case Outcome::kDown: return "down";
    case Outcome::kNotActivated: return "not_activated";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// DensityMatrix

template <int N>
std::optional<std::string> density_violation(const CMatrix<N>& m) {
  if (!m.allFinite()) return "matrix has non-finite entries";
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kExactTol) return "matrix is not Hermitian (deviation " + std::to_string(herm) + ")";
  const Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kExactTol) {
    return "trace is " + std::to_string(tr.real()) + " instead of 1";
  }
  const CMatrix<N> h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix<N>> solver(h, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -kPsdSlack) {
    return "matrix has negative eigenvalue " + std::to_string(min_eig);
  }
  return std::nullopt;
}

template std::optional<std::string> density_violation<2>(const CMatrix<2>&);
template std::optional<std::string> density_violation<4>(const CMatrix<4>&);

template <int N>
DensityMatrix<N> DensityMatrix<N>::from_matrix(const CMatrix<N>& m) {
  if (auto why = density_violation<N>(m)) throw Error(ErrorCode::kInvalidState, *why);
  return DensityMatrix(m);
}

template class DensityMatrix<2>;
template class DensityMatrix<4>;

// ---------------------------------------------------------------------------
// Spin operators

const Matrix2& pauli_x() {
  static const Matrix2 m = (Matrix2() << 0, 1, 1, 0).finished();
  return m;
}

const Matrix2& pauli_y() {
  static const Matrix2 m = (Matrix2() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  return m;
}

const Matrix2& pauli_z() {
  static const Matrix2 m = (Matrix2() << 1, 0, 0, -1).finished();
  return m;
}

namespace {

Matrix2 sigma_dot(const Vec3& v) {
  Matrix2 m;
  m << Complex(v.z(), 0.0), Complex(v.x(), -v.y()),
       Complex(v.x(), v.y()), Complex(-v.z(), 0.0);
  return m;
}

}  // namespace

Matrix2 spin_operator(const Direction& d) { return sigma_dot(d.vec()); }

QubitState up_projector(const Direction& d) {
  return QubitState::unchecked((Matrix2::Identity() + sigma_dot(d.vec())) * 0.5);
}

QubitState bloch_state(const Vec3& v) {
  if (!v.allFinite() || v.norm() > 1.0 + kExactTol) {
    throw Error(ErrorCode::kInvalidState, "Bloch vector lies outside the unit ball");
  }
  return QubitState::unchecked((Matrix2::Identity() + sigma_dot(v)) * 0.5);
}

Vec3 bloch_vector(const QubitState& rho) {
  const Matrix2& m = rho.matrix();
  return Vec3(2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real());
}

SpinBasis spin_basis(const Direction& d) {
  const double t = d.theta();
  const double p = d.phi();
  const Complex phase = std::polar(1.0, p);
  SpinBasis b;
  b.up << std::cos(t / 2), phase * std::sin(t / 2);
  b.down << -std::sin(t / 2), phase * std::cos(t / 2);
  return b;
}

BornProbabilities born(const QubitState& rho, const Direction& d) {
  const Matrix2 proj = up_projector(d).matrix();
  const double p_up = std::clamp((rho.matrix() * proj).trace().real(), 0.0, 1.0);
  return {p_up, 1.0 - p_up};
}

QubitState collapse(const QubitState& rho, const Direction& d, Outcome out) {
  if (!is_activated(out)) {
    throw Error(ErrorCode::kImpossibleOutcome, "cannot collapse onto a non-activated outcome");
  }
  const BornProbabilities p = born(rho, d);
  const double p_out = out == Outcome::kUp ? p.p_up : p.p_down;
  if (p_out <= kExactTol) {
    throw Error(ErrorCode::kImpossibleOutcome,
                std::string("outcome ") + std::string(outcome_name(out)) + " along " +
                    d.to_string() + " has zero probability");
  }
  return up_projector(out == Outcome::kUp ? d : -d);
}

template <int N>
DensityMatrix<N> mixture(std::span<const WeightedState<N>> components) {
  if (components.empty()) throw Error(ErrorCode::kNormalization, "empty mixture");
  double total = 0.0;
  CMatrix<N> acc = CMatrix<N>::Zero();
  for (const auto& c : components) {
    if (!(c.weight >= 0.0)) throw Error(ErrorCode::kNormalization, "negative mixture weight");
    total += c.weight;
    acc += c.weight * c.rho.matrix();
  }
  if (std::abs(total - 1.0) > kExactTol) {
    throw Error(ErrorCode::kNormalization,
                "mixture weights sum to " + std::to_string(total) + " instead of 1");
  }
  return DensityMatrix<N>::unchecked(acc);
}

template QubitState mixture<2>(std::span<const WeightedState<2>>);
template PairDensity mixture<4>(std::span<const WeightedState<4>>);

// ---------------------------------------------------------------------------
// Two-spin helpers

Matrix4 kron(const Matrix2& a, const Matrix2& b) {
  Matrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix2 trace_out_second(const Matrix4& m) {
  Matrix2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  return out;
}

Matrix2 trace_out_first(const Matrix4& m) {
  Matrix2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = m(i, j) + m(2 + i, 2 + j);
  return out;
}

Matrix2 in_basis(const QubitState& rho, const Direction& basis) {
  const SpinBasis b = spin_basis(basis);
  Matrix2 u;
  u.col(0) = b.up;
  u.col(1) = b.down;
  return u.adjoint() * rho.matrix() * u;
}

BroadcastResult broadcast_demo(const QubitState& rho, const Direction& basis) {
  const SpinBasis b = spin_basis(basis);
  const Eigen::Vector2cd kets[2] = {b.up, b.down};
  const Matrix2 coeff = in_basis(rho, basis);

  auto product_ket = [](const Eigen::Vector2cd& a, const Eigen::Vector2cd& m) {
    Eigen::Vector4cd v;
    v << a(0) * m(0), a(0) * m(1), a(1) * m(0), a(1) * m(1);
    return v;
  };

  Matrix4 joint = Matrix4::Zero();
  for (int mu = 0; mu < 2; ++mu) {
    const Eigen::Vector4cd left = product_ket(kets[mu], kets[mu]);
    for (int nu = 0; nu < 2; ++nu) {
      const Eigen::Vector4cd right = product_ket(kets[nu], kets[nu]);
      joint += coeff(mu, nu) * left * right.adjoint();
    }
  }
  return {PairDensity::unchecked(joint), QubitState::unchecked(trace_out_second(joint)),
          QubitState::unchecked(trace_out_first(joint))};
}

}  // namespace hvtsim

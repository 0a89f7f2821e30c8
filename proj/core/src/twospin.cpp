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

#include "hvtsim/twospin.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hvtsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Matrix2 projector(const Direction& r, Outcome o) {
  return up_projector(o == Outcome::kUp ? r : -r).matrix();
}

Matrix4 joint_projector(const Direction& a, Outcome s1, const Direction& b, Outcome s2) {
  return kron(projector(a, s1), projector(b, s2));
}

double born4(const PairDensity& rho, const Matrix4& p) {
  return std::max(0.0, (p * rho.matrix()).trace().real());
}

PairDensity project4(const PairDensity& rho, const Matrix4& p) {
  const Matrix4 m = p * rho.matrix() * p;
  const double t = m.trace().real();
  if (t <= kExactTol) throw Error(ErrorCode::kImpossibleOutcome, "pair outcome has zero probability");
  return PairDensity::unchecked(m / t);
}

double anchored_up(const Vec3& axis, const Direction& r) { return (1.0 + r.dot(axis)) / 2.0; }

Outcome sample_outcome(double p_up, Rng& rng) {
  return rng.bernoulli(p_up) ? Outcome::kUp : Outcome::kDown;
}

constexpr std::array<std::pair<Outcome, Outcome>, 4> kPairOutcomes{{
    {Outcome::kUp, Outcome::kUp},
    {Outcome::kDown, Outcome::kDown},
    {Outcome::kUp, Outcome::kDown},
    {Outcome::kDown, Outcome::kUp},
}};

std::array<double, 4> as_array(const JointProbabilities& p) { return {p.uu, p.dd, p.ud, p.du}; }

Vec3 signed_axis(const Direction& d, Outcome o) { return o == Outcome::kUp ? d.vec() : Vec3(-d.vec()); }

}  // namespace

PairDensity SingletQm::singlet_density() {
  Eigen::Matrix<Complex, 4, 1> psi = Eigen::Matrix<Complex, 4, 1>::Zero();
  // Basis order |uu>, |ud>, |du>, |dd>.
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return PairDensity::from_matrix(psi * psi.adjoint());
}

JointProbabilities joint_probs(const PairState& state, const Direction& r1, const Direction& r2) {
  return std::visit(
      overloaded{
          [&](const SingletQm& s) {
            JointProbabilities p;
            p.uu = born4(s.rho, joint_projector(r1, Outcome::kUp, r2, Outcome::kUp));
            p.dd = born4(s.rho, joint_projector(r1, Outcome::kDown, r2, Outcome::kDown));
            p.ud = born4(s.rho, joint_projector(r1, Outcome::kUp, r2, Outcome::kDown));
            p.du = born4(s.rho, joint_projector(r1, Outcome::kDown, r2, Outcome::kUp));
            return p;
          },
          [&](const IhvtPair& s) {
            if (s.post_anchors) {
              const double p1 = anchored_up(s.post_anchors->first, r1);
              const double p2 = anchored_up(s.post_anchors->second, r2);
              return JointProbabilities{p1 * p2, (1 - p1) * (1 - p2), p1 * (1 - p2),
                                        (1 - p1) * p2};
            }
            const double c = r1.dot(r2);
            return JointProbabilities{(1 - c) / 4, (1 - c) / 4, (1 + c) / 4, (1 + c) / 4};
          },
      },
      state);
}

double correlation(const PairState& state, const Direction& r1, const Direction& r2) {
  const JointProbabilities p = joint_probs(state, r1, r2);
  return p.uu + p.dd - p.ud - p.du;
}

BornProbabilities single_marginal(const PairState& state, Spin spin, const Direction& r) {
  return std::visit(
      overloaded{
          [&](const SingletQm& s) {
            const Matrix2 reduced = spin == Spin::kFirst ? trace_out_second(s.rho.matrix())
                                                         : trace_out_first(s.rho.matrix());
            return born(QubitState::unchecked(reduced), r);
          },
          [&](const IhvtPair& s) {
            if (!s.post_anchors) return BornProbabilities{0.5, 0.5};
            const Vec3& axis =
                spin == Spin::kFirst ? s.post_anchors->first : s.post_anchors->second;
            const double p = anchored_up(axis, r);
            return BornProbabilities{p, 1.0 - p};
          },
      },
      state);
}

JointMeasurement measure_joint(const PairState& state, const Direction& a, const Direction& b,
                               Rng& rng) {
  const std::array<double, 4> p = as_array(joint_probs(state, a, b));
  double u = rng.uniform() * (p[0] + p[1] + p[2] + p[3]);
  std::size_t k = 0;
  for (; k < 3; ++k) {
    if (u < p[k]) break;
    u -= p[k];
  }
  while (p[k] <= 0.0) k = (k + 3) % 4;  // only reachable through rounding
  const auto [s1, s2] = kPairOutcomes[k];

  JointMeasurement out{s1, s2, state};
  if (const auto* q = std::get_if<SingletQm>(&state)) {
    out.state = SingletQm{project4(q->rho, joint_projector(a, s1, b, s2))};
  } else {
    out.state = IhvtPair{PostAnchors{signed_axis(a, s1), signed_axis(b, s2)}};
  }
  return out;
}

SingleMeasurement measure_single(const PairState& state, Spin spin, const Direction& r, Rng& rng) {
  const Outcome o = sample_outcome(single_marginal(state, spin, r).p_up, rng);
  SingleMeasurement out{o, state};
  if (const auto* q = std::get_if<SingletQm>(&state)) {
    const Matrix2 id = Matrix2::Identity();
    const Matrix4 p = spin == Spin::kFirst ? kron(projector(r, o), id) : kron(id, projector(r, o));
    out.state = SingletQm{project4(q->rho, p)};
    return out;
  }
  const auto& pair = std::get<IhvtPair>(state);
  PostAnchors anchors;
  if (pair.post_anchors) {
    anchors = *pair.post_anchors;
    (spin == Spin::kFirst ? anchors.first : anchors.second) = signed_axis(r, o);
  } else {
    // Perfect anticorrelation fixes the partner along the same axis.
    const Vec3 mine = signed_axis(r, o);
    anchors = spin == Spin::kFirst ? PostAnchors{mine, -mine} : PostAnchors{-mine, mine};
  }
  out.state = IhvtPair{anchors};
  return out;
}

double chsh(const PairState& state, const Direction& a, const Direction& a_prime,
            const Direction& b, const Direction& b_prime) {
  return correlation(state, a, b) + correlation(state, a, b_prime) +
         correlation(state, a_prime, b) - correlation(state, a_prime, b_prime);
}

bool PairMarginalId::operator==(const PairMarginalId& other) const {
  return a.matches(other.a) && b.matches(other.b);
}

std::string PairMarginalId::to_string() const {
  return "<" + a.to_string() + "," + b.to_string() + ">";
}

PairMarginalId nonlocality_witness(const PairState&, const Direction& a, const Direction& b) {
  return {a, b};
}

FactorizationAudit factorization_audit(const PairState& state, const Direction& a,
                                       const Direction& b, const Direction& b_prime) {
  FactorizationAudit audit;
  audit.with_b = nonlocality_witness(state, a, b);
  audit.with_b_prime = nonlocality_witness(state, a, b_prime);
  audit.selection_depends_on_b = !(audit.with_b == audit.with_b_prime);

  // Within a pair marginal each event carries one label per spin; the
  // product of the read-outs is the product of the labels.
  audit.outcome_product_factorizes = true;
  for (const auto& settings : {std::pair{a, b}, std::pair{a, b_prime}}) {
    const std::array<double, 4> p = as_array(joint_probs(state, settings.first, settings.second));
    double from_labels = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      from_labels += p[k] * outcome_sign(kPairOutcomes[k].first) *
                     outcome_sign(kPairOutcomes[k].second);
    }
    if (std::abs(from_labels - correlation(state, settings.first, settings.second)) > kExactTol) {
      audit.outcome_product_factorizes = false;
    }
  }

  const JointProbabilities pb = joint_probs(state, a, b);
  const JointProbabilities pbp = joint_probs(state, a, b_prime);
  audit.spin1_marginal_independent_of_b =
      std::abs((pb.uu + pb.ud) - (pbp.uu + pbp.ud)) <= kExactTol;
  return audit;
}

}  // namespace hvtsim

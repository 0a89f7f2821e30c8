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

// Single-spin state models behind one measurement interface:
//
//   A  quantum density matrix (Born rule, projective collapse)
//   B  classical two-face dice with a single event axis
//   C  exclusive-event hidden-variable state over a direction grid
//   D  independent-event hidden-variable state (one variable per direction)
//   E  Bell's uniform-lambda construction
//   F  Bohm collapse dynamics on top of the D state
//
// plus the naive single-variable state that is diagonal along z. All
// operations are pure: `measure` returns the post-measurement state instead
// of mutating its input.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hvtsim/bell.hpp"
#include "hvtsim/bohm.hpp"
#include "hvtsim/grid.hpp"
#include "hvtsim/qcore.hpp"
#include "hvtsim/rng.hpp"

namespace hvtsim {

enum class ModelKind { kQuantum, kDice, kExclusive, kIndependent, kBellLambda, kBohm, kNaive };

// "A".."F" for the six theories, "naive" for the single-variable state.
std::string_view model_label(ModelKind kind);
// Accepts the labels above (case-insensitive). Throws kUsage.
ModelKind parse_model_kind(std::string_view text);

// Post-measurement rule. kStrict: the state is the event that was observed.
// kAdapted: the state is whatever makes repeat measurements agree with
// quantum predictions (re-anchored on the recorded outcome).
enum class RepeatRule { kStrict, kAdapted };
std::string_view rule_name(RepeatRule rule);
RepeatRule parse_rule(std::string_view text);

// The two indistinguishable mixture preparations and the product form:
//   I   : 1/4 up-z, 3/4 down-z
//   II  : 1/2 up along (0, sqrt3/2, -1/2), 1/2 up along (0, -sqrt3/2, -1/2)
//   III : one component with Bloch vector (0, 0, -1/2)
enum class MixtureId { kI, kII, kIII };
std::string_view mixture_name(MixtureId id);

struct BlochComponent {
  double weight = 1.0;
  Vec3 bloch = Vec3::Zero();
};

class Preparation {
 public:
  static Preparation pure(const Direction& d) { return Preparation(d); }
  static Preparation mixture(MixtureId id) { return Preparation(id); }
  static Preparation x_up() { return pure(Direction::plus_x()); }

  std::vector<BlochComponent> components() const;
  Vec3 mean_bloch() const;
  QubitState density() const;
  std::string label() const;

  std::optional<Direction> direction() const;
  std::optional<MixtureId> mixture_id() const;

 private:
  explicit Preparation(std::variant<Direction, MixtureId> v) : v_(std::move(v)) {}
  std::variant<Direction, MixtureId> v_;
};

// ---------------------------------------------------------------------------
// State types

struct DiceFace {
  Outcome label = Outcome::kUp;
  double probability = 0.0;
};

struct DiceState {
  Direction axis = Direction::plus_z();
  std::vector<DiceFace> faces;
};

// One elementary event of the exclusive-event state: a grid direction and a
// spin label along it.
struct EhvtEvent {
  std::size_t index = 0;
  Outcome spin = Outcome::kUp;
};

// Exclusive-event state. Stored lazily as an orientation vector v; the
// weight of event (r, up) is (1 + r.v) / (2M) and of (r, down) is
// (1 - r.v) / (2M). After a strict-rule measurement the state is a single
// frozen event.
struct EhvtState {
  const DirectionGrid* grid = nullptr;
  Vec3 orientation = Vec3::Zero();
  std::optional<EhvtEvent> frozen;

  double weight(std::size_t index, Outcome spin) const;
};

struct EhvtWeight {
  std::size_t index = 0;
  Outcome spin = Outcome::kUp;
  double weight = 0.0;
};
// Full event table (2M entries); sums to one.
std::vector<EhvtWeight> ehvt_weights(const EhvtState& state);

EhvtEvent ehvt_sample(const EhvtState& state, Rng& rng);

struct IhvtComponent {
  double weight = 1.0;
  Vec3 orientation = Vec3::Zero();  // |orientation| <= 1
};

struct FrozenOutcome {
  Direction direction = Direction::plus_z();
  Outcome outcome = Outcome::kUp;
};

// Independent-event state: a mixture of product states, each product state
// fixed by an orientation m with marginal p_up(r) = (1 + r.m) / 2 along every
// direction r. The infinite product is never materialized. Strict-rule
// measurements add frozen overlays.
struct IhvtState {
  const DirectionGrid* grid = nullptr;
  std::vector<IhvtComponent> components;
  std::vector<FrozenOutcome> frozen;
};

IhvtState ihvt_state(const Preparation& prep, const DirectionGrid* grid);

// Reduced state along r: sum_i w_i (1 + r.m_i) / 2, unless a frozen overlay
// fixes r (or -r).
BornProbabilities ihvt_reduced(const IhvtState& state, const Direction& r);

// Two states are equivalent when their reductions agree on every probe.
bool ihvt_equivalent(const IhvtState& a, const IhvtState& b, std::span<const Direction> probes,
                     double tol = kExactTol);

// lambda is either realized (a point interval) or still distributed
// uniformly on the interval.
struct BellLambdaState {
  LambdaInterval lambda;
  Vec3 anchor = Vec3::UnitX();
  int anchor_sign = 1;
};

// Strict: lambda and anchor are kept. Adapted: lambda is redrawn (or reset
// to the full interval when rng is null), the anchor becomes the device and
// the sign becomes the outcome.
BellLambdaState bell_post(const BellLambdaState& state, const Direction& device, int outcome,
                          RepeatRule rule, Rng* rng);

struct QuantumModel {
  QubitState rho;
};
struct DiceModel {
  DiceState dice;
};
struct ExclusiveModel {
  EhvtState state;
};
struct IndependentModel {
  IhvtState state;
};
struct BellModel {
  BellLambdaState state;
};
struct BohmModel {
  IhvtState state;
  BohmConfig config;
  double gamma = 1.0;
};
struct NaiveModel {
  QubitState rho;
};

using ModelBody = std::variant<QuantumModel, DiceModel, ExclusiveModel, IndependentModel,
                               BellModel, BohmModel, NaiveModel>;

struct ModelState {
  RepeatRule rule = RepeatRule::kAdapted;
  ModelBody body;

  ModelKind kind() const;
};

struct ModelOptions {
  const DirectionGrid* grid = nullptr;  // required for C and D
  RepeatRule rule = RepeatRule::kAdapted;
  BohmConfig bohm;
};

// Builds the model for `prep`. When `rng` is given, hidden variables that are
// drawn at preparation (Bell's lambda) are realized; without it the state
// carries their distribution, which is what exact branch enumeration needs.
// The dice (B) ignores `prep` and starts as a fair z-dice. Throws kGrid when
// C or D is requested without a grid.
ModelState make_model(ModelKind kind, const Preparation& prep, const ModelOptions& options,
                      Rng* rng = nullptr);
ModelState make_model(ModelKind kind, const Preparation& prep, const ModelOptions& options,
                      std::uint64_t seed);

// Device direction with its grid slot resolved once.
struct Device {
  Direction direction = Direction::plus_z();
  const DirectionGrid* grid = nullptr;
  std::optional<std::size_t> grid_index;
};
Device make_device(const Direction& d, const DirectionGrid* grid);

struct Measurement {
  Outcome outcome = Outcome::kNotActivated;
  ModelState state;
};

// One use of the measurement device. Throws kGrid when C or D is measured
// along a direction that is not registered in the model's grid.
Measurement measure(const ModelState& model, const Device& device, Rng& rng);
Measurement measure(const ModelState& model, const Direction& device, Rng& rng);
// Same draw as `measure`, but the post-measurement state is written to
// `post` only when the device fired; a silent device leaves every state
// unchanged. `post` may alias `model`.
Outcome measure_into(const ModelState& model, const Device& device, Rng& rng, ModelState& post);

// Exact enumeration of measurement results: every branch with non-zero
// probability and the state it leaves behind. Probabilities sum to one.
struct Branch {
  double probability = 0.0;
  Outcome outcome = Outcome::kNotActivated;
  ModelState state;
};
std::vector<Branch> branches(const ModelState& model, const Device& device);

// Quantum state whose Born statistics a model is meant to reproduce for a
// given preparation (the fair z-dice for B).
QubitState reference_state(ModelKind kind, const Preparation& prep);

}  // namespace hvtsim

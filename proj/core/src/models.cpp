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

#include "hvtsim/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace hvtsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Vec3 signed_axis(const Direction& d, Outcome out) {
  return out == Outcome::kUp ? d.vec() : Vec3(-d.vec());
}

double up_probability(const Vec3& orientation, const Direction& r) {
  return std::clamp((1.0 + r.dot(orientation)) / 2.0, 0.0, 1.0);
}

}  // namespace

std::string_view model_label(ModelKind kind) {
  switch (kind) {
    case ModelKind::kQuantum: return "A";
    case ModelKind::kDice: return "B";
    case ModelKind::kExclusive: return "C";
    case ModelKind::kIndependent: return "D";
    case ModelKind::kBellLambda: return "E";
    case ModelKind::kBohm: return "F";
    case ModelKind::kNaive: return "naive";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  const std::string t = lower(text);
  if (t == "a" || t == "quantum") return ModelKind::kQuantum;
  if (t == "b" || t == "dice") return ModelKind::kDice;
  if (t == "c" || t == "ehvt") return ModelKind::kExclusive;
  if (t == "d" || t == "ihvt") return ModelKind::kIndependent;
  if (t == "e" || t == "bell") return ModelKind::kBellLambda;
  if (t == "f" || t == "bohm") return ModelKind::kBohm;
  if (t == "naive" || t == "naive-z") return ModelKind::kNaive;
  throw Error(ErrorCode::kUsage, "unknown model '" + std::string(text) + "'");
}

std::string_view rule_name(RepeatRule rule) {
  return rule == RepeatRule::kStrict ? "strict" : "adapted";
}

RepeatRule parse_rule(std::string_view text) {
  const std::string t = lower(text);
  if (t == "strict") return RepeatRule::kStrict;
  if (t == "adapted") return RepeatRule::kAdapted;
  throw Error(ErrorCode::kUsage, "unknown repeat rule '" + std::string(text) + "'");
}

std::string_view mixture_name(MixtureId id) {
  switch (id) {
    case MixtureId::kI: return "I";
    case MixtureId::kII: return "II";
    case MixtureId::kIII: return "III";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Preparation

std::vector<BlochComponent> Preparation::components() const {
  if (const auto* d = std::get_if<Direction>(&v_)) return {{1.0, d->vec()}};
  const double h = std::sqrt(3.0) / 2.0;
  switch (std::get<MixtureId>(v_)) {
    case MixtureId::kI:
      return {{0.25, Vec3::UnitZ()}, {0.75, -Vec3::UnitZ()}};
    case MixtureId::kII:
      return {{0.5, Vec3(0.0, h, -0.5)}, {0.5, Vec3(0.0, -h, -0.5)}};
    case MixtureId::kIII:
      return {{1.0, Vec3(0.0, 0.0, -0.5)}};
  }
  return {};
}

Vec3 Preparation::mean_bloch() const {
  Vec3 v = Vec3::Zero();
  for (const auto& c : components()) v += c.weight * c.bloch;
  return v;
}

QubitState Preparation::density() const { return bloch_state(mean_bloch()); }

std::string Preparation::label() const {
  if (const auto* d = std::get_if<Direction>(&v_)) return "up" + d->to_string();
  return "mixture-" + std::string(mixture_name(std::get<MixtureId>(v_)));
}

std::optional<Direction> Preparation::direction() const {
  if (const auto* d = std::get_if<Direction>(&v_)) return *d;
  return std::nullopt;
}

std::optional<MixtureId> Preparation::mixture_id() const {
  if (const auto* m = std::get_if<MixtureId>(&v_)) return *m;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exclusive-event state

double EhvtState::weight(std::size_t index, Outcome spin) const {
  if (frozen) return (frozen->index == index && frozen->spin == spin) ? 1.0 : 0.0;
  const double p_up = up_probability(orientation, grid->at(index));
  return (spin == Outcome::kUp ? p_up : 1.0 - p_up) * grid->weight();
}

std::vector<EhvtWeight> ehvt_weights(const EhvtState& state) {
  std::vector<EhvtWeight> out;
  out.reserve(2 * state.grid->size());
  for (std::size_t i = 0; i < state.grid->size(); ++i) {
    for (Outcome s : {Outcome::kUp, Outcome::kDown}) out.push_back({i, s, state.weight(i, s)});
  }
  return out;
}

EhvtEvent ehvt_sample(const EhvtState& state, Rng& rng) {
  if (state.frozen) return *state.frozen;
  const std::size_t i = rng.below(state.grid->size());
  const double p_up = up_probability(state.orientation, state.grid->at(i));
  return {i, rng.bernoulli(p_up) ? Outcome::kUp : Outcome::kDown};
}

// ---------------------------------------------------------------------------
// Independent-event state

IhvtState ihvt_state(const Preparation& prep, const DirectionGrid* grid) {
  IhvtState s;
  s.grid = grid;
  for (const auto& c : prep.components()) s.components.push_back({c.weight, c.bloch});
  return s;
}

BornProbabilities ihvt_reduced(const IhvtState& state, const Direction& r) {
  for (const auto& f : state.frozen) {
    if (f.direction.matches(r)) {
      return f.outcome == Outcome::kUp ? BornProbabilities{1.0, 0.0} : BornProbabilities{0.0, 1.0};
    }
    if (f.direction.is_antipode_of(r)) {
      return f.outcome == Outcome::kUp ? BornProbabilities{0.0, 1.0} : BornProbabilities{1.0, 0.0};
    }
  }
  double p = 0.0;
  for (const auto& c : state.components) p += c.weight * (1.0 + r.dot(c.orientation)) / 2.0;
  p = std::clamp(p, 0.0, 1.0);
  return {p, 1.0 - p};
}

bool ihvt_equivalent(const IhvtState& a, const IhvtState& b, std::span<const Direction> probes,
                     double tol) {
  for (const auto& r : probes) {
    if (std::abs(ihvt_reduced(a, r).p_up - ihvt_reduced(b, r).p_up) > tol) return false;
  }
  return true;
}

namespace {

bool frozen_covers(const IhvtState& s, const Direction& d) {
  return std::any_of(s.frozen.begin(), s.frozen.end(), [&](const FrozenOutcome& f) {
    return f.direction.matches(d) || f.direction.is_antipode_of(d);
  });
}

IhvtState ihvt_after(const IhvtState& before, const Direction& d, Outcome out, RepeatRule rule) {
  IhvtState after;
  after.grid = before.grid;
  if (rule == RepeatRule::kAdapted) {
    after.components = {{1.0, signed_axis(d, out)}};
    return after;
  }
  if (frozen_covers(before, d)) return before;
  // Condition each product-state component on the observed outcome; the
  // other directions of a product state are untouched.
  const int s = outcome_sign(out);
  double total = 0.0;
  for (const auto& c : before.components) {
    const double w = c.weight * (1.0 + s * d.dot(c.orientation)) / 2.0;
    if (w > 0.0) {
      after.components.push_back({w, c.orientation});
      total += w;
    }
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kImpossibleOutcome,
                "outcome " + std::string(outcome_name(out)) + " along " + d.to_string() +
                    " has zero probability");
  }
  for (auto& c : after.components) c.weight /= total;
  after.frozen = before.frozen;
  after.frozen.push_back({d, out});
  return after;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bell

BellLambdaState bell_post(const BellLambdaState& state, const Direction& device, int outcome,
                          RepeatRule rule, Rng* rng) {
  if (rule == RepeatRule::kStrict) return state;
  BellLambdaState next;
  next.anchor = device.vec();
  next.anchor_sign = outcome >= 0 ? 1 : -1;
  if (rng != nullptr) {
    const double lambda = kLambdaMin + (kLambdaMax - kLambdaMin) * rng->uniform();
    next.lambda = {lambda, lambda};
  }
  return next;
}

// ---------------------------------------------------------------------------
// Construction

ModelKind ModelState::kind() const {
  return std::visit(
      overloaded{[](const QuantumModel&) { return ModelKind::kQuantum; },
                 [](const DiceModel&) { return ModelKind::kDice; },
                 [](const ExclusiveModel&) { return ModelKind::kExclusive; },
                 [](const IndependentModel&) { return ModelKind::kIndependent; },
                 [](const BellModel&) { return ModelKind::kBellLambda; },
                 [](const BohmModel&) { return ModelKind::kBohm; },
                 [](const NaiveModel&) { return ModelKind::kNaive; }},
      body);
}

ModelState make_model(ModelKind kind, const Preparation& prep, const ModelOptions& options,
                      Rng* rng) {
  ModelState m;
  m.rule = options.rule;
  switch (kind) {
    case ModelKind::kQuantum:
      m.body = QuantumModel{prep.density()};
      break;
    case ModelKind::kDice:
      m.body = DiceModel{DiceState{Direction::plus_z(),
                                   {{Outcome::kUp, 0.5}, {Outcome::kDown, 0.5}}}};
      break;
    case ModelKind::kExclusive:
      if (options.grid == nullptr) throw Error(ErrorCode::kGrid, "model C needs a direction grid");
      m.body = ExclusiveModel{EhvtState{options.grid, prep.mean_bloch(), std::nullopt}};
      break;
    case ModelKind::kIndependent:
      if (options.grid == nullptr) throw Error(ErrorCode::kGrid, "model D needs a direction grid");
      m.body = IndependentModel{ihvt_state(prep, options.grid)};
      break;
    case ModelKind::kBellLambda: {
      BellLambdaState s;
      s.anchor = prep.mean_bloch();
      s.anchor_sign = 1;
      if (rng != nullptr) {
        const double lambda = kLambdaMin + (kLambdaMax - kLambdaMin) * rng->uniform();
        s.lambda = {lambda, lambda};
      }
      m.body = BellModel{s};
      break;
    }
    case ModelKind::kBohm:
      m.body = BohmModel{ihvt_state(prep, options.grid), options.bohm, 1.0};
      break;
    case ModelKind::kNaive: {
      // Single z hidden variable: keeps only the z statistics of the
      // preparation.
      const double pz = (1.0 + prep.mean_bloch().z()) / 2.0;
      Matrix2 diag = Matrix2::Zero();
      diag(0, 0) = pz;
      diag(1, 1) = 1.0 - pz;
      m.body = NaiveModel{QubitState::unchecked(diag)};
      break;
    }
  }
  return m;
}

ModelState make_model(ModelKind kind, const Preparation& prep, const ModelOptions& options,
                      std::uint64_t seed) {
  Rng rng(seed);
  return make_model(kind, prep, options, &rng);
}

Device make_device(const Direction& d, const DirectionGrid* grid) {
  Device dev{d, grid, std::nullopt};
  if (grid != nullptr) dev.grid_index = grid->find(d);
  return dev;
}

// ---------------------------------------------------------------------------
// Measurement

namespace {

inline std::size_t grid_slot(const DirectionGrid* grid, const Device& device) {
  if (grid == nullptr) throw Error(ErrorCode::kGrid, "model has no direction grid");
  if (device.grid == grid && device.grid_index) return *device.grid_index;
  return grid->index_of(device.direction);
}

void require_registered(const DirectionGrid* grid, const Device& device) {
  (void)grid_slot(grid, device);
}

bool dice_activated(const DiceState& dice, const Direction& d) {
  return d.matches(dice.axis) || d.is_antipode_of(dice.axis);
}

// Indicator for an EHVT event read by a device at grid slot `slot`.
Outcome ehvt_indicator(const EhvtState& s, const EhvtEvent& ev, std::size_t slot) {
  if (ev.index == slot) return ev.spin;
  if (ev.index == s.grid->antipode(slot)) return flip(ev.spin);
  return Outcome::kNotActivated;
}

EhvtState ehvt_after(const EhvtState& before, const EhvtEvent& ev, const Direction& d,
                     Outcome out, RepeatRule rule) {
  EhvtState after = before;
  if (rule == RepeatRule::kStrict) {
    after.frozen = ev;
  } else {
    after.frozen.reset();
    after.orientation = signed_axis(d, out);
  }
  return after;
}

Outcome sample_bohm(const BohmModel& m, double p_up, Rng& rng) {
  const double eps = m.config.eps;
  if (p_up <= eps) return Outcome::kDown;
  if (1.0 - p_up <= eps) return Outcome::kUp;
  const XiSquared xi = bohm_draw_xi(rng);
  const BohmTrajectory t =
      bohm_evolve(BohmState{p_up, 1.0 - p_up, xi.first, xi.second, m.gamma}, m.config, false);
  switch (t.winner) {
    case BohmWinner::kFirst: return Outcome::kUp;
    case BohmWinner::kSecond: return Outcome::kDown;
    case BohmWinner::kTie: break;
  }
  return rng.bernoulli(0.5) ? Outcome::kUp : Outcome::kDown;
}

}  // namespace

Outcome measure_into(const ModelState& model, const Device& device, Rng& rng, ModelState& post) {
  // Most exclusive-event draws miss the device; settle those before any
  // other work.
  std::uint64_t drawn_index = 0;
  const auto* exclusive = std::get_if<ExclusiveModel>(&model.body);
  if (exclusive != nullptr && !exclusive->state.frozen) {
    const std::size_t slot = grid_slot(exclusive->state.grid, device);
    drawn_index = rng.below(exclusive->state.grid->size());
    if (drawn_index != slot && drawn_index != exclusive->state.grid->antipode(slot)) {
      return Outcome::kNotActivated;
    }
  }

  const Direction& d = device.direction;
  const RepeatRule rule = model.rule;
  Outcome outcome = Outcome::kNotActivated;
  // New bodies are built completely before they are assigned, so `post` may
  // alias `model`.
  auto commit = [&](ModelBody body) {
    post.body = std::move(body);
    post.rule = rule;
  };

  std::visit(
      overloaded{
          [&](const QuantumModel& m) {
            const double p = born(m.rho, d).p_up;
            outcome = rng.bernoulli(p) ? Outcome::kUp : Outcome::kDown;
            commit(QuantumModel{collapse(m.rho, d, outcome)});
          },
          [&](const NaiveModel& m) {
            const double p = born(m.rho, d).p_up;
            outcome = rng.bernoulli(p) ? Outcome::kUp : Outcome::kDown;
            commit(NaiveModel{collapse(m.rho, d, outcome)});
          },
          [&](const DiceModel& m) {
            if (!dice_activated(m.dice, d)) return;
            double u = rng.uniform();
            Outcome face = m.dice.faces.back().label;
            for (const auto& f : m.dice.faces) {
              if (u < f.probability) {
                face = f.label;
                break;
              }
              u -= f.probability;
            }
            outcome = d.matches(m.dice.axis) ? face : flip(face);
            commit(DiceModel{DiceState{m.dice.axis, {{face, 1.0}}}});
          },
          [&](const ExclusiveModel& m) {
            const std::size_t slot = grid_slot(m.state.grid, device);
            EhvtEvent ev;
            if (m.state.frozen) {
              ev = *m.state.frozen;
            } else {
              // Same law as ehvt_sample; the spin is only drawn when the
              // sampled direction can fire the device.
              ev.index = drawn_index;
              const double p_up = up_probability(m.state.orientation, m.state.grid->at(ev.index));
              ev.spin = rng.bernoulli(p_up) ? Outcome::kUp : Outcome::kDown;
            }
            outcome = ehvt_indicator(m.state, ev, slot);
            if (is_activated(outcome)) {
              commit(ExclusiveModel{ehvt_after(m.state, ev, d, outcome, rule)});
            }
          },
          [&](const IndependentModel& m) {
            require_registered(m.state.grid, device);
            const double p = ihvt_reduced(m.state, d).p_up;
            outcome = rng.bernoulli(p) ? Outcome::kUp : Outcome::kDown;
            commit(IndependentModel{ihvt_after(m.state, d, outcome, rule)});
          },
          [&](const BellModel& m) {
            BellLambdaState s = m.state;
            if (!s.lambda.is_point()) {
              const double lambda = s.lambda.lo + s.lambda.length() * rng.uniform();
              s.lambda = {lambda, lambda};
            }
            const int v = bell_outcome(s.lambda.lo, d.vec(), s.anchor, s.anchor_sign);
            outcome = outcome_from_sign(v);
            commit(BellModel{bell_post(s, d, v, rule, &rng)});
          },
          [&](const BohmModel& m) {
            const double p = ihvt_reduced(m.state, d).p_up;
            outcome = sample_bohm(m, p, rng);
            BohmModel next = m;
            next.state = ihvt_after(m.state, d, outcome, rule);
            commit(std::move(next));
          },
      },
      model.body);
  return outcome;
}

Measurement measure(const ModelState& model, const Device& device, Rng& rng) {
  Measurement result{Outcome::kNotActivated, model};
  result.outcome = measure_into(model, device, rng, result.state);
  return result;
}

Measurement measure(const ModelState& model, const Direction& device, Rng& rng) {
  return measure(model, Device{device, nullptr, std::nullopt}, rng);
}

std::vector<Branch> branches(const ModelState& model, const Device& device) {
  const Direction& d = device.direction;
  const RepeatRule rule = model.rule;
  std::vector<Branch> out;
  auto add = [&](double p, Outcome o, ModelBody body) {
    if (p > kExactTol) out.push_back({p, o, ModelState{rule, std::move(body)}});
  };

  std::visit(
      overloaded{
          [&](const QuantumModel& m) {
            const BornProbabilities p = born(m.rho, d);
            if (p.p_up > kExactTol) add(p.p_up, Outcome::kUp, QuantumModel{collapse(m.rho, d, Outcome::kUp)});
            if (p.p_down > kExactTol) add(p.p_down, Outcome::kDown, QuantumModel{collapse(m.rho, d, Outcome::kDown)});
          },
          [&](const NaiveModel& m) {
            const BornProbabilities p = born(m.rho, d);
            if (p.p_up > kExactTol) add(p.p_up, Outcome::kUp, NaiveModel{collapse(m.rho, d, Outcome::kUp)});
            if (p.p_down > kExactTol) add(p.p_down, Outcome::kDown, NaiveModel{collapse(m.rho, d, Outcome::kDown)});
          },
          [&](const DiceModel& m) {
            if (!dice_activated(m.dice, d)) {
              add(1.0, Outcome::kNotActivated, m);
              return;
            }
            for (const auto& f : m.dice.faces) {
              add(f.probability, d.matches(m.dice.axis) ? f.label : flip(f.label),
                  DiceModel{DiceState{m.dice.axis, {{f.label, 1.0}}}});
            }
          },
          [&](const ExclusiveModel& m) {
            const std::size_t slot = grid_slot(m.state.grid, device);
            if (m.state.frozen) {
              const Outcome o = ehvt_indicator(m.state, *m.state.frozen, slot);
              add(1.0, o, m);
              return;
            }
            double activated = 0.0;
            for (std::size_t idx : {slot, m.state.grid->antipode(slot)}) {
              for (Outcome s : {Outcome::kUp, Outcome::kDown}) {
                const double w = m.state.weight(idx, s);
                const EhvtEvent ev{idx, s};
                const Outcome o = ehvt_indicator(m.state, ev, slot);
                activated += w;
                add(w, o, ExclusiveModel{ehvt_after(m.state, ev, d, o, rule)});
              }
            }
            add(1.0 - activated, Outcome::kNotActivated, m);
          },
          [&](const IndependentModel& m) {
            require_registered(m.state.grid, device);
            const BornProbabilities p = ihvt_reduced(m.state, d);
            if (p.p_up > kExactTol) add(p.p_up, Outcome::kUp, IndependentModel{ihvt_after(m.state, d, Outcome::kUp, rule)});
            if (p.p_down > kExactTol) add(p.p_down, Outcome::kDown, IndependentModel{ihvt_after(m.state, d, Outcome::kDown, rule)});
          },
          [&](const BellModel& m) {
            const BellLambdaState& s = m.state;
            if (s.lambda.is_point()) {
              const int v = bell_outcome(s.lambda.lo, d.vec(), s.anchor, s.anchor_sign);
              add(1.0, outcome_from_sign(v), BellModel{bell_post(s, d, v, rule, nullptr)});
              return;
            }
            const LambdaSplit split = bell_split(s.lambda, d.vec(), s.anchor, s.anchor_sign);
            const double len = s.lambda.length();
            for (auto [part, v] : {std::pair{split.up, 1}, std::pair{split.down, -1}}) {
              if (part.length() <= 0.0) continue;
              BellLambdaState next = s;
              next.lambda = part;
              add(part.length() / len, outcome_from_sign(v),
                  BellModel{bell_post(next, d, v, rule, nullptr)});
            }
          },
          [&](const BohmModel& m) {
            // Under the (u, 1-u) hidden-variable law branch 1 wins with
            // probability exactly J1.
            const BornProbabilities p = ihvt_reduced(m.state, d);
            for (auto [prob, o] : {std::pair{p.p_up, Outcome::kUp}, std::pair{p.p_down, Outcome::kDown}}) {
              if (prob <= kExactTol) continue;
              BohmModel next = m;
              next.state = ihvt_after(m.state, d, o, rule);
              add(prob, o, std::move(next));
            }
          },
      },
      model.body);
  return out;
}

QubitState reference_state(ModelKind kind, const Preparation& prep) {
  if (kind == ModelKind::kDice) return bloch_state(Vec3::Zero());
  return prep.density();
}

}  // namespace hvtsim

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

#include "hvtsim/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "hvtsim/naive.hpp"

namespace hvtsim {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Splits [0, n) into contiguous chunks, one per worker, and sums the
// per-chunk accumulators. Acc must provide operator+=.
template <class Acc, class Fn>
Acc parallel_accumulate(std::uint64_t begin, std::uint64_t end, unsigned workers, Acc init,
                        Fn fn) {
  const std::uint64_t n = end - begin;
  const unsigned w = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, n)));
  if (w <= 1) {
    fn(begin, end, init);
    return init;
  }
  std::vector<Acc> parts(w, init);
  std::vector<std::thread> threads;
  threads.reserve(w);
  const std::uint64_t chunk = n / w;
  const std::uint64_t extra = n % w;
  std::uint64_t lo = begin;
  for (unsigned k = 0; k < w; ++k) {
    const std::uint64_t hi = lo + chunk + (k < extra ? 1 : 0);
    threads.emplace_back([&, k, lo, hi] { fn(lo, hi, parts[k]); });
    lo = hi;
  }
  for (auto& t : threads) t.join();
  Acc total = init;
  for (const auto& p : parts) total += p;
  return total;
}

struct StageCounts {
  std::uint64_t reached = 0;
  std::uint64_t activated = 0;
  std::uint64_t positive = 0;
  std::array<std::uint64_t, 2> activated_after{};
  std::array<std::uint64_t, 2> positive_after{};
};

struct Counts {
  std::vector<StageCounts> stages;

  Counts& operator+=(const Counts& o) {
    for (std::size_t k = 0; k < stages.size(); ++k) {
      stages[k].reached += o.stages[k].reached;
      stages[k].activated += o.stages[k].activated;
      stages[k].positive += o.stages[k].positive;
      for (int s = 0; s < 2; ++s) {
        stages[k].activated_after[s] += o.stages[k].activated_after[s];
        stages[k].positive_after[s] += o.stages[k].positive_after[s];
      }
    }
    return *this;
  }
};

std::size_t outcome_slot(Outcome o) { return o == Outcome::kUp ? 0 : 1; }

std::optional<double> ratio(double num, double den) {
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

struct Setup {
  DirectionGrid grid;
  ModelState initial;
  std::vector<Device> devices;
};

bool needs_grid(ModelKind kind) {
  return kind == ModelKind::kExclusive || kind == ModelKind::kIndependent;
}

Setup make_setup(const ExperimentSpec& spec) {
  std::vector<Direction> registered = spec.devices;
  registered.insert(registered.end(), spec.extra_grid_directions.begin(),
                    spec.extra_grid_directions.end());
  Setup s{DirectionGrid::build(spec.grid_size, registered), ModelState{}, {}};
  return s;
}

}  // namespace

std::string_view mode_name(RunMode mode) {
  return mode == RunMode::kExact ? "exact" : "monte-carlo";
}

RunMode parse_mode(std::string_view text) {
  const std::string t = lower(text);
  if (t == "exact") return RunMode::kExact;
  if (t == "monte-carlo" || t == "mc" || t == "montecarlo") return RunMode::kMonteCarlo;
  throw Error(ErrorCode::kUsage, "unknown mode '" + std::string(text) + "'");
}

void validate(const ExperimentSpec& spec) {
  if (spec.devices.empty()) throw Error(ErrorCode::kUsage, "at least one device is required");
  if (spec.trials < 1) throw Error(ErrorCode::kUsage, "trials must be >= 1");
  if (spec.workers < 1) throw Error(ErrorCode::kUsage, "workers must be >= 1");
  if (spec.mode == RunMode::kExact && spec.min_activated != 0) {
    throw Error(ErrorCode::kUsage, "min_activated applies to Monte Carlo runs only");
  }
}

double binomial_ci(std::uint64_t k, std::uint64_t n) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(k) / static_cast<double>(n);
  return 1.959963984540054 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

namespace {

void exact_walk(const ModelState& state, const std::vector<Device>& devices, std::size_t k,
                double prob, Outcome prev, std::vector<std::array<double, 7>>& acc) {
  // acc[k] = {reached, activated, positive, act_after_up, act_after_down,
  //           pos_after_up, pos_after_down}
  acc[k][0] += prob;
  for (const Branch& b : branches(state, devices[k])) {
    if (!is_activated(b.outcome)) continue;
    const double w = prob * b.probability;
    const bool up = b.outcome == Outcome::kUp;
    acc[k][1] += w;
    if (up) acc[k][2] += w;
    if (k > 0) {
      acc[k][3 + outcome_slot(prev)] += w;
      if (up) acc[k][5 + outcome_slot(prev)] += w;
    }
    if (k + 1 < devices.size()) exact_walk(b.state, devices, k + 1, w, b.outcome, acc);
  }
}

ExperimentReport exact_report(const Setup& setup) {
  const std::size_t n = setup.devices.size();
  std::vector<std::array<double, 7>> acc(n, std::array<double, 7>{});
  exact_walk(setup.initial, setup.devices, 0, 1.0, Outcome::kNotActivated, acc);
  ExperimentReport r;
  r.mode = RunMode::kExact;
  r.trials = 0;
  for (std::size_t k = 0; k < n; ++k) {
    StageReport s;
    s.q = acc[k][0] > 0.0 ? acc[k][1] / acc[k][0] : 0.0;
    s.p = ratio(acc[k][2], acc[k][1] > kExactTol ? acc[k][1] : 0.0);
    if (s.p) s.p_ci = 0.0;
    for (int j = 0; j < 2; ++j) {
      s.p_after[j] = ratio(acc[k][5 + j], acc[k][3 + j] > kExactTol ? acc[k][3 + j] : 0.0);
    }
    r.stages.push_back(s);
  }
  return r;
}

Counts mc_block(const ExperimentSpec& spec, const Setup& setup, std::uint64_t lo,
                std::uint64_t hi) {
  Counts init{std::vector<StageCounts>(setup.devices.size())};
  const std::uint64_t key = Rng::stream_key(spec.seed, spec.stream);
  const std::size_t stages = setup.devices.size();
  return parallel_accumulate(lo, hi, spec.workers, init,
                             [&](std::uint64_t a, std::uint64_t b, Counts& c) {
    std::array<ModelState, 2> holders;
    for (std::uint64_t i = a; i < b; ++i) {
      Rng rng = Rng::at(key, i);
      const ModelState* cur = &setup.initial;
      Outcome prev = Outcome::kNotActivated;
      for (std::size_t k = 0; k < stages; ++k) {
        StageCounts& st = c.stages[k];
        ++st.reached;
        ModelState& next = holders[k % 2];
        const Outcome o = measure_into(*cur, setup.devices[k], rng, next);
        if (!is_activated(o)) break;
        const bool up = o == Outcome::kUp;
        ++st.activated;
        if (up) ++st.positive;
        if (k > 0) {
          ++st.activated_after[outcome_slot(prev)];
          if (up) ++st.positive_after[outcome_slot(prev)];
        }
        prev = o;
        cur = &next;
      }
    }
  });
}

ExperimentReport mc_report(const ExperimentSpec& spec, const Setup& setup) {
  Counts total{std::vector<StageCounts>(setup.devices.size())};
  std::uint64_t done = 0;
  while (true) {
    const std::uint64_t hi = std::min(done + spec.trials, spec.max_trials);
    if (hi <= done) break;
    total += mc_block(spec, setup, done, hi);
    done = hi;
    if (spec.min_activated == 0) break;
    const StageCounts& last = total.stages.back();
    if (last.activated >= spec.min_activated) break;
    const std::uint64_t feed = total.stages.size() > 1
                                   ? total.stages[total.stages.size() - 2].activated
                                   : done;
    if (last.activated == 0 && (feed == 0 || feed >= spec.trials)) break;
  }

  ExperimentReport r;
  r.mode = RunMode::kMonteCarlo;
  r.trials = done;
  for (const StageCounts& c : total.stages) {
    StageReport s;
    s.reached = c.reached;
    s.activated = c.activated;
    s.positive = c.positive;
    s.activated_after = c.activated_after;
    s.positive_after = c.positive_after;
    s.q = c.reached > 0 ? static_cast<double>(c.activated) / static_cast<double>(c.reached) : 0.0;
    s.q_ci = binomial_ci(c.activated, c.reached);
    if (c.activated > 0) {
      s.p = static_cast<double>(c.positive) / static_cast<double>(c.activated);
      s.p_ci = binomial_ci(c.positive, c.activated);
    }
    for (int j = 0; j < 2; ++j) {
      s.p_after[j] = ratio(static_cast<double>(c.positive_after[j]),
                           static_cast<double>(c.activated_after[j]));
    }
    r.stages.push_back(s);
  }
  return r;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  Setup setup = make_setup(spec);
  ModelOptions options;
  options.grid = &setup.grid;
  options.rule = spec.rule;
  options.bohm = spec.bohm;
  setup.initial = make_model(spec.model, spec.preparation, options);
  const DirectionGrid* grid = needs_grid(spec.model) ? &setup.grid : nullptr;
  for (const auto& d : spec.devices) setup.devices.push_back(make_device(d, grid));
  return spec.mode == RunMode::kExact ? exact_report(setup) : mc_report(spec, setup);
}

ExperimentReport run_device(const ExperimentSpec& spec) {
  ExperimentSpec one = spec;
  if (one.devices.size() > 1) one.devices.erase(one.devices.begin() + 1, one.devices.end());
  return run_experiment(one);
}

ExperimentReport run_repeat(const ExperimentSpec& spec) {
  if (spec.devices.size() != 2) {
    throw Error(ErrorCode::kUsage, "a repeat measurement needs exactly two devices");
  }
  return run_experiment(spec);
}

// ---------------------------------------------------------------------------
// Tables

std::string_view table_name(TableId id) {
  switch (id) {
    case TableId::kI: return "I";
    case TableId::kII: return "II";
    case TableId::kIII: return "III";
    case TableId::kIV: return "IV";
  }
  return "?";
}

TableId parse_table_id(std::string_view text) {
  const std::string t = lower(text);
  if (t == "i" || t == "1") return TableId::kI;
  if (t == "ii" || t == "2") return TableId::kII;
  if (t == "iii" || t == "3") return TableId::kIII;
  if (t == "iv" || t == "4") return TableId::kIV;
  throw Error(ErrorCode::kUsage, "unknown table id '" + std::string(text) + "'");
}

std::string CellExpectation::to_string() const {
  switch (kind) {
    case Kind::kNotApplicable: return "NA";
    case Kind::kMuchLessThanOne: return "<<1";
    case Kind::kValue: break;
  }
  std::ostringstream os;
  os << value;
  return os.str();
}

namespace {

constexpr CellExpectation kOne{CellExpectation::Kind::kValue, 1.0};
constexpr CellExpectation kZero{CellExpectation::Kind::kValue, 0.0};
constexpr CellExpectation kHalf{CellExpectation::Kind::kValue, 0.5};
constexpr CellExpectation kSmall{CellExpectation::Kind::kMuchLessThanOne, 0.0};
constexpr CellExpectation kNa{CellExpectation::Kind::kNotApplicable, 0.0};

constexpr std::array<ModelKind, 5> kTableModels{ModelKind::kQuantum, ModelKind::kDice,
                                                ModelKind::kExclusive, ModelKind::kIndependent,
                                                ModelKind::kBellLambda};

}  // namespace

std::array<CellExpectation, 5> table_expected_q(TableId id) {
  switch (id) {
    case TableId::kI: return {kOne, kOne, kSmall, kOne, kOne};
    case TableId::kII: return {kOne, kZero, kSmall, kOne, kOne};
    case TableId::kIII: return {kOne, kZero, kZero, kOne, kOne};
    case TableId::kIV: return {kOne, kZero, kSmall, kOne, kOne};
  }
  return {};
}

std::array<CellExpectation, 5> table_expected_p(TableId id) {
  switch (id) {
    case TableId::kI: return {kHalf, kHalf, kHalf, kHalf, kHalf};
    case TableId::kII: return {kOne, kNa, kOne, kOne, kOne};
    case TableId::kIII: return {kHalf, kNa, kNa, kOne, kOne};
    case TableId::kIV: return {kHalf, kNa, kHalf, kHalf, kHalf};
  }
  return {};
}

ExperimentSpec table_spec(TableId id, ModelKind kind, const TableOptions& options) {
  ExperimentSpec spec;
  spec.model = kind;
  spec.preparation = Preparation::x_up();
  switch (id) {
    case TableId::kI: spec.devices = {Direction::plus_z()}; break;
    case TableId::kII: spec.devices = {Direction::plus_x()}; break;
    case TableId::kIII:
    case TableId::kIV: spec.devices = {Direction::plus_z(), Direction::plus_x()}; break;
  }
  spec.rule = id == TableId::kIII ? RepeatRule::kStrict : RepeatRule::kAdapted;
  spec.trials = options.trials;
  spec.seed = options.seed;
  spec.mode = options.mode;
  spec.grid_size = options.grid_size;
  spec.workers = options.workers;
  spec.min_activated = options.mode == RunMode::kMonteCarlo ? options.min_activated : 0;
  return spec;
}

bool cell_passes(const std::optional<double>& value, const CellExpectation& expected,
                 RunMode mode) {
  switch (expected.kind) {
    case CellExpectation::Kind::kNotApplicable: return !value.has_value();
    case CellExpectation::Kind::kMuchLessThanOne: return value && *value <= kMuchLessThanOne;
    case CellExpectation::Kind::kValue: break;
  }
  if (!value) return false;
  const bool interior = expected.value > 0.0 && expected.value < 1.0;
  const double tol = (interior && mode == RunMode::kMonteCarlo) ? kHalfCellTolerance : kExactTol;
  return std::abs(*value - expected.value) <= tol;
}

bool TableReport::pass() const {
  return std::all_of(q.begin(), q.end(), [](const TableCell& c) { return c.pass; }) &&
         std::all_of(p.begin(), p.end(), [](const TableCell& c) { return c.pass; });
}

TableReport reproduce_table(TableId id, const TableOptions& options) {
  TableReport t;
  t.id = id;
  t.mode = options.mode;
  const auto eq = table_expected_q(id);
  const auto ep = table_expected_p(id);
  for (std::size_t i = 0; i < kTableModels.size(); ++i) {
    const ExperimentReport r = run_experiment(table_spec(id, kTableModels[i], options));
    const StageReport& s = r.last();
    t.q[i] = {s.q, eq[i], cell_passes(s.q, eq[i], options.mode)};
    t.p[i] = {s.p, ep[i], cell_passes(s.p, ep[i], options.mode)};
    t.trials[i] = r.trials;
  }
  return t;
}

// ---------------------------------------------------------------------------
// QS facts

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kNotApplicable: return "not-applicable";
  }
  return "?";
}

bool QsFactReport::pass() const {
  return std::none_of(facts.begin(), facts.end(),
                      [](const FactResult& f) { return f.verdict == Verdict::kFail; });
}

namespace {

// Two-sided z statistic of an observed proportion k/n against p0. For
// p0 in {0, 1} any deviation is infinite.
double z_against(std::uint64_t k, std::uint64_t n, double p0) {
  const double p = static_cast<double>(k) / static_cast<double>(n);
  const double var = p0 * (1.0 - p0) / static_cast<double>(n);
  if (var <= 0.0) {
    return std::abs(p - p0) <= kExactTol ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (p - p0) / std::sqrt(var);
}

// Two-proportion z statistic with pooled variance.
double z_two(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2) {
  const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
  const double pool = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
  const double var = pool * (1.0 - pool) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2));
  if (var <= 0.0) return p1 == p2 ? 0.0 : std::numeric_limits<double>::infinity();
  return (p1 - p2) / std::sqrt(var);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct FactContext {
  ModelKind kind;
  RepeatRule rule;
  QsFactOptions options;
  std::vector<Direction> registered;

  ExperimentSpec spec(std::vector<Direction> devices, std::uint64_t stream,
                      const Preparation& prep = Preparation::x_up()) const {
    ExperimentSpec s;
    s.model = kind;
    s.preparation = prep;
    s.devices = std::move(devices);
    s.rule = rule;
    s.trials = options.trials;
    s.seed = options.seed;
    s.grid_size = options.grid_size;
    s.workers = options.workers;
    s.min_activated = options.min_activated;
    s.stream = stream;
    s.extra_grid_directions = registered;
    return s;
  }
};

Direction sixty_degrees() { return Direction::from_angles(std::numbers::pi / 3.0, 0.0); }

std::vector<Direction> statistic_directions() {
  return {Direction::plus_z(), Direction::plus_x(), sixty_degrees()};
}

FactResult check_qs1(const FactContext& ctx, const std::vector<ExperimentReport>& runs) {
  FactResult f{"QS-I", Verdict::kPass, "", 0.0, 0.0, ""};
  if (ctx.kind == ModelKind::kNaive) {
    const NaiveSpectrum s = naive_spectrum_check(std::numbers::pi / 2.0, std::numbers::pi / 4.0);
    double smallest = 1.0;
    for (double v : s.values) smallest = std::min(smallest, std::abs(v));
    f.verdict = s.respects_qs1 ? Verdict::kPass : Verdict::kFail;
    f.statistic = "min |s_r| at (theta, phi) = (90, 45) deg";
    f.value = smallest;
    f.expected = 0.5;
    f.detail = "attainable spin components:";
    for (double v : s.distinct) f.detail += " " + fmt(v);
    return f;
  }
  // Outcomes are recorded as up/down only; count anything else.
  std::uint64_t activated = 0;
  std::uint64_t binary = 0;
  for (const auto& r : runs) {
    activated += r.stages[0].activated;
    binary += r.stages[0].positive + (r.stages[0].activated - r.stages[0].positive);
  }
  f.statistic = "activated outcomes outside {+1, -1}";
  f.value = static_cast<double>(activated - binary);
  f.expected = 0.0;
  f.verdict = activated == binary ? Verdict::kPass : Verdict::kFail;
  f.detail = std::to_string(activated) + " activated outcomes";
  return f;
}

FactResult check_qs2(const FactContext& ctx, const std::vector<ExperimentReport>& first,
                     const std::vector<ExperimentReport>& second) {
  FactResult f{"QS-II", Verdict::kPass, "", 0.0, 0.0, ""};
  const auto dirs = statistic_directions();
  const QubitState ref_state = reference_state(ctx.kind, Preparation::x_up());
  double worst = -1.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const StageReport& a = first[i].stages[0];
    const StageReport& b = second[i].stages[0];
    if (a.activated == 0 && b.activated == 0) {
      f.detail += "[" + dirs[i].to_string() + ": never activated] ";
      continue;
    }
    if (a.activated == 0 || b.activated == 0) {
      f.verdict = Verdict::kFail;
      f.detail += "[" + dirs[i].to_string() + ": activated in one run only] ";
      continue;
    }
    ++used;
    const double ref = born(ref_state, dirs[i]).p_up;
    const double z12 = std::abs(z_two(a.positive, a.activated, b.positive, b.activated));
    const double zref = std::abs(z_against(a.positive + b.positive, a.activated + b.activated, ref));
    const double pooled = static_cast<double>(a.positive + b.positive) /
                          static_cast<double>(a.activated + b.activated);
    const double z = std::max(z12, zref);
    f.detail += "[" + dirs[i].to_string() + ": P=" + fmt(pooled) + " ref=" + fmt(ref) +
                " |z_runs|=" + fmt(z12) + " |z_ref|=" + fmt(zref) + "] ";
    if (z > worst) {
      worst = z;
      f.statistic = "P(up) along " + dirs[i].to_string();
      f.value = pooled;
      f.expected = ref;
    }
    if (z > ctx.options.z_limit) f.verdict = Verdict::kFail;
  }
  if (used == 0) {
    f.verdict = Verdict::kFail;
    f.statistic = "activated measurements";
  }
  return f;
}

FactResult check_qs3(const FactContext& ctx) {
  FactResult f{"QS-III", Verdict::kPass, "counterexamples in repeat-same measurements", 0.0, 0.0,
               ""};
  std::uint64_t counter = 0;
  std::uint64_t repeats = 0;
  for (const Direction& d : statistic_directions()) {
    const ExperimentReport r = run_repeat(ctx.spec({d, d}, 3));
    const StageReport& s = r.stages[1];
    if (r.stages[0].activated == 0) {
      f.detail += "[" + d.to_string() + ": never activated] ";
      continue;
    }
    const std::uint64_t bad =
        (s.activated_after[0] - s.positive_after[0]) + s.positive_after[1];
    counter += bad;
    repeats += s.activated;
    f.detail += "[" + d.to_string() + ": " + std::to_string(s.activated) + " repeats, " +
                std::to_string(bad) + " changed] ";
  }
  f.value = static_cast<double>(counter);
  if (counter > 0 || repeats == 0) f.verdict = Verdict::kFail;
  if (repeats == 0) f.detail += "no activated repeat measurement";
  return f;
}

FactResult check_qs4(const FactContext& ctx) {
  FactResult f{"QS-IV", Verdict::kPass, "p_{z_up,x_down}", 0.0, 0.5, ""};
  const Direction r0 = Direction::plus_z();
  double worst = -1.0;
  bool any = false;
  for (const Direction& r : {Direction::plus_x(), sixty_degrees()}) {
    const ExperimentReport rep = run_repeat(ctx.spec({r0, r}, 4));
    const StageReport& s = rep.stages[1];
    for (int j = 0; j < 2; ++j) {
      const double sign = j == 0 ? 1.0 : -1.0;
      const double expected = (1.0 + sign * r.dot(r0)) / 2.0;
      const std::uint64_t n = s.activated_after[j];
      if (n == 0) {
        f.detail += "[" + r.to_string() + (j == 0 ? " after up" : " after down") +
                    ": no activations] ";
        continue;
      }
      any = true;
      const std::uint64_t k = s.positive_after[j];
      const double z = std::abs(z_against(k, n, expected));
      const double p = static_cast<double>(k) / static_cast<double>(n);
      f.detail += "[" + r.to_string() + (j == 0 ? " after up" : " after down") +
                  ": P=" + fmt(p) + " expected=" + fmt(expected) + " |z|=" + fmt(z) + "] ";
      if (z > ctx.options.z_limit) f.verdict = Verdict::kFail;
      worst = std::max(worst, z);
      if (j == 0 && r.matches(Direction::plus_x())) f.value = 1.0 - p;
    }
    if (s.activated == 0) f.verdict = Verdict::kFail;
  }
  if (!any) {
    f.verdict = Verdict::kFail;
    f.value = 0.0;
  }
  return f;
}

FactResult check_qs5(const FactContext& ctx) {
  FactResult f{"QS-V", Verdict::kPass, "max |difference| between mixtures I and II", 0.0, 0.0,
               ""};
  const std::vector<Direction> probes = cube_probe_directions();
  double worst = 0.0;
  std::string where;
  for (const Direction& r : probes) {
    for (bool repeat : {false, true}) {
      std::vector<Direction> devs = repeat ? std::vector<Direction>{Direction::plus_z(), r}
                                           : std::vector<Direction>{r};
      std::array<ExperimentReport, 2> reps;
      for (int m = 0; m < 2; ++m) {
        ExperimentSpec s = ctx.spec(devs, 5, Preparation::mixture(m == 0 ? MixtureId::kI : MixtureId::kII));
        s.mode = RunMode::kExact;
        s.min_activated = 0;
        reps[m] = run_experiment(s);
      }
      for (std::size_t k = 0; k < devs.size(); ++k) {
        const StageReport& a = reps[0].stages[k];
        const StageReport& b = reps[1].stages[k];
        double d = std::abs(a.q - b.q);
        if (a.p.has_value() != b.p.has_value()) {
          d = std::max(d, 1.0);
        } else if (a.p) {
          d = std::max(d, std::abs(*a.p - *b.p));
        }
        for (int j = 0; j < 2; ++j) {
          if (a.p_after[j] && b.p_after[j]) d = std::max(d, std::abs(*a.p_after[j] - *b.p_after[j]));
        }
        if (d > worst) {
          worst = d;
          where = (repeat ? "z then " : "") + r.to_string();
        }
      }
    }
  }
  f.value = worst;
  f.verdict = worst <= 1e-9 ? Verdict::kPass : Verdict::kFail;
  f.detail = std::to_string(probes.size()) + " probe directions, single and after z";
  if (!where.empty()) f.detail += "; largest at " + where;
  return f;
}

FactResult not_applicable(std::string fact, std::string why) {
  return {std::move(fact), Verdict::kNotApplicable, "", 0.0, 0.0, std::move(why)};
}

}  // namespace

QsFactReport qs_facts_check(ModelKind kind, RepeatRule rule, const QsFactOptions& options) {
  FactContext ctx{kind, rule, options, cube_probe_directions()};
  ctx.registered.push_back(sixty_degrees());

  std::vector<ExperimentReport> first;
  std::vector<ExperimentReport> second;
  for (const Direction& d : statistic_directions()) {
    first.push_back(run_device(ctx.spec({d}, 1)));
    second.push_back(run_device(ctx.spec({d}, 2)));
  }

  QsFactReport report;
  report.model = kind;
  report.rule = rule;
  report.facts[0] = check_qs1(ctx, first);
  report.facts[1] = check_qs2(ctx, first, second);
  if (kind == ModelKind::kNaive) {
    const std::string why = "the single-variable state has no repeat-measurement rule";
    report.facts[2] = not_applicable("QS-III", why);
    report.facts[3] = not_applicable("QS-IV", why);
    report.facts[4] = not_applicable("QS-V", why);
    return report;
  }
  report.facts[2] = check_qs3(ctx);
  report.facts[3] = check_qs4(ctx);
  report.facts[4] = check_qs5(ctx);
  return report;
}

// ---------------------------------------------------------------------------
// Inconsistency

InconsistencyReport inconsistency_report(ModelKind kind, std::size_t grid_size) {
  const Direction x = Direction::plus_x();
  const std::array<Direction, 1> reg{x};
  const DirectionGrid grid = DirectionGrid::build(grid_size, reg);
  ModelOptions options;
  options.grid = &grid;
  options.rule = RepeatRule::kStrict;
  const ModelState before = make_model(kind, Preparation::x_up(), options);
  const Device dev = make_device(x, &grid);

  InconsistencyReport r;
  r.model = kind;
  if (kind == ModelKind::kExclusive) {
    const auto& s = std::get<ExclusiveModel>(before.body).state;
    const std::size_t i = grid.index_of(x);
    r.projector_label = "tr(|up_x><up_x| rho) on the summed exclusive-event state";
    r.projector_up = s.weight(i, Outcome::kUp);
    r.projector_down = s.weight(i, Outcome::kDown);
    r.projector_relative = r.projector_up / (r.projector_up + r.projector_down);
    // After an x measurement that recorded up the strict rule leaves the
    // single event |up_x><up_x|.
    // The recorded event may sit on either antipode; both spell up_x.
    const std::size_t anti = grid.antipode(i);
    double after_up = 0.0;
    double mass = 0.0;
    for (const Branch& b : branches(before, dev)) {
      if (b.outcome != Outcome::kUp) continue;
      const auto& post = std::get<ExclusiveModel>(b.state.body).state;
      after_up += b.probability *
                  (post.weight(i, Outcome::kUp) + post.weight(anti, Outcome::kDown));
      mass += b.probability;
    }
    after_up = mass > 0.0 ? after_up / mass : 0.0;
    r.model_label = "post-measurement expression |up_x><up_x|";
    r.model_up = after_up;
    r.note = "the state is unchanged by the x measurement, yet its two expressions differ by "
             "the normalization factor " + std::to_string(grid.size());
  } else if (kind == ModelKind::kIndependent) {
    const auto& s = std::get<IndependentModel>(before.body).state;
    const QubitState reduced = bloch_state(s.components.front().orientation);
    r.projector_label = "tr(|up_x><up_x| rho_x) on the reduced state";
    r.projector_up = born(reduced, x).p_up;
    r.projector_down = born(reduced, x).p_down;
    r.projector_relative = r.projector_up;
    r.model_label = "product over all directions, reduced along x";
    r.model_up = ihvt_reduced(s, x).p_up;
    r.note = "the same state is written both as one projector and as a product over every "
             "direction";
  } else {
    throw Error(ErrorCode::kUsage, "the inconsistency report covers models C and D only");
  }
  r.ratio = r.model_up > 0.0 ? r.projector_up / r.model_up : 0.0;
  r.mismatch = true;
  return r;
}

// ---------------------------------------------------------------------------
// Two-spin and Bohm runs

namespace {

struct PairCounts {
  std::array<std::uint64_t, 4> c{};
  PairCounts& operator+=(const PairCounts& o) {
    for (int k = 0; k < 4; ++k) c[k] += o.c[k];
    return *this;
  }
};

}  // namespace

PairRun run_pair(const PairState& state, const Direction& a, const Direction& b, RunMode mode,
                 std::uint64_t trials, std::uint64_t seed, unsigned workers,
                 std::uint64_t stream) {
  PairRun r;
  r.exact = correlation(state, a, b);
  if (mode == RunMode::kExact) {
    r.correlation = r.exact;
    return r;
  }
  if (trials < 1) throw Error(ErrorCode::kUsage, "trials must be >= 1");
  const PairCounts counts = parallel_accumulate(
      0, trials, workers, PairCounts{}, [&](std::uint64_t lo, std::uint64_t hi, PairCounts& acc) {
        for (std::uint64_t i = lo; i < hi; ++i) {
          Rng rng = Rng::for_trial(seed, stream, i);
          const JointMeasurement m = measure_joint(state, a, b, rng);
          const bool u1 = m.first == Outcome::kUp;
          const bool u2 = m.second == Outcome::kUp;
          ++acc.c[u1 && u2 ? 0 : (!u1 && !u2 ? 1 : (u1 ? 2 : 3))];
        }
      });
  r.trials = trials;
  r.counts = counts.c;
  r.equal_outcomes = counts.c[0] + counts.c[1];
  r.correlation = (static_cast<double>(counts.c[0] + counts.c[1]) -
                   static_cast<double>(counts.c[2] + counts.c[3])) /
                  static_cast<double>(trials);
  return r;
}

ChshRun run_chsh(const PairState& state, const Direction& a, const Direction& a_prime,
                 const Direction& b, const Direction& b_prime, RunMode mode,
                 std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  ChshRun r;
  const std::array<std::pair<Direction, Direction>, 4> settings{
      {{a, b}, {a, b_prime}, {a_prime, b}, {a_prime, b_prime}}};
  for (std::size_t k = 0; k < 4; ++k) {
    r.terms[k] = run_pair(state, settings[k].first, settings[k].second, mode, trials, seed,
                          workers, k);
  }
  r.s = r.terms[0].correlation + r.terms[1].correlation + r.terms[2].correlation -
        r.terms[3].correlation;
  r.exact = chsh(state, a, a_prime, b, b_prime);
  return r;
}

namespace {

struct BohmCounts {
  std::uint64_t first = 0;
  std::uint64_t ties = 0;
  double drift = 0.0;
  bool monotone = true;
  std::uint64_t steps = 0;

  BohmCounts& operator+=(const BohmCounts& o) {
    first += o.first;
    ties += o.ties;
    drift = std::max(drift, o.drift);
    monotone = monotone && o.monotone;
    steps = std::max(steps, o.steps);
    return *this;
  }
};

}  // namespace

BohmRun run_bohm(double j1, std::uint64_t trials, std::uint64_t seed, const BohmConfig& config,
                 unsigned workers) {
  if (!(j1 > 0.0 && j1 < 1.0)) throw Error(ErrorCode::kUsage, "j1 must lie in (0, 1)");
  if (trials < 1) throw Error(ErrorCode::kUsage, "trials must be >= 1");
  const BohmCounts c = parallel_accumulate(
      0, trials, workers, BohmCounts{}, [&](std::uint64_t lo, std::uint64_t hi, BohmCounts& acc) {
        for (std::uint64_t i = lo; i < hi; ++i) {
          Rng rng = Rng::for_trial(seed, 0, i);
          const XiSquared xi = bohm_draw_xi(rng);
          const BohmTrajectory t =
              bohm_evolve(BohmState{j1, 1.0 - j1, xi.first, xi.second, 1.0}, config, false);
          bool first = t.winner == BohmWinner::kFirst;
          if (t.winner == BohmWinner::kTie) {
            ++acc.ties;
            first = rng.bernoulli(0.5);
          }
          if (first) ++acc.first;
          acc.drift = std::max(acc.drift, t.max_sum_drift);
          acc.monotone = acc.monotone && t.monotone;
          acc.steps = std::max(acc.steps, t.steps);
        }
      });
  BohmRun r;
  r.j1 = j1;
  r.trials = trials;
  r.first_wins = c.first;
  r.ties = c.ties;
  r.frequency = static_cast<double>(c.first) / static_cast<double>(trials);
  r.max_sum_drift = c.drift;
  r.all_monotone = c.monotone;
  r.max_steps = c.steps;
  return r;
}

}  // namespace hvtsim

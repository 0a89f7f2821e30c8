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

// Experiment runner: the measurement-device protocol, activation ratio Q and
// up-probability P, the four reference tables, the QS-fact conformance
// matrix and the representation-inconsistency report.
//
// Monte Carlo trials draw from per-trial generators keyed by (seed, stream,
// trial index) and only integer counts are aggregated, so results do not
// depend on the number of workers.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hvtsim/grid.hpp"
#include "hvtsim/models.hpp"
#include "hvtsim/qcore.hpp"
#include "hvtsim/twospin.hpp"

namespace hvtsim {

enum class RunMode { kExact, kMonteCarlo };
std::string_view mode_name(RunMode mode);
RunMode parse_mode(std::string_view text);

inline constexpr std::uint64_t kDefaultTrials = 100'000;
inline constexpr std::uint64_t kDefaultSeed = 42;

struct ExperimentSpec {
  ModelKind model = ModelKind::kQuantum;
  Preparation preparation = Preparation::x_up();
  std::vector<Direction> devices;  // measured in order on every preparation
  RepeatRule rule = RepeatRule::kAdapted;
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  RunMode mode = RunMode::kMonteCarlo;
  std::size_t grid_size = kDefaultGridSize;
  unsigned workers = 1;
  // Monte Carlo only. When non-zero, further blocks of `trials` preparations
  // are run until the last stage has this many activations. Extension stops
  // early when the last stage has none although the stage feeding it was
  // reached at least `trials` times (or never).
  std::uint64_t min_activated = 0;
  std::uint64_t max_trials = 4'000'000'000;
  std::uint64_t stream = 0;  // separates independent runs sharing a seed
  // Extra directions to register in the grid (devices are always added).
  std::vector<Direction> extra_grid_directions;
  BohmConfig bohm;
};

// Throws kUsage for an empty device list, zero trials or workers, or an
// exact-mode request with min_activated.
void validate(const ExperimentSpec& spec);

// Statistics of one device in the sequence. A stage is reached only when
// every earlier stage activated. Probabilities are exact in exact mode.
struct StageReport {
  std::uint64_t reached = 0;
  std::uint64_t activated = 0;
  std::uint64_t positive = 0;
  double q = 0.0;                  // activated / reached
  std::optional<double> p;         // positive / activated, NA without activations
  double q_ci = 0.0;               // 95% half-widths (zero in exact mode)
  std::optional<double> p_ci;
  // Split by the previous stage's outcome (index 0: up, 1: down); unused for
  // the first stage.
  std::array<std::uint64_t, 2> activated_after{};
  std::array<std::uint64_t, 2> positive_after{};
  std::array<std::optional<double>, 2> p_after{};

  bool operator==(const StageReport&) const = default;
};

struct ExperimentReport {
  RunMode mode = RunMode::kMonteCarlo;
  std::uint64_t trials = 0;  // preparations used
  std::vector<StageReport> stages;

  const StageReport& last() const { return stages.back(); }
  bool operator==(const ExperimentReport&) const = default;
};

// Runs the device sequence of `spec`. run_device uses the first device only;
// run_repeat reports the second stage conditioned on first-stage activation.
ExperimentReport run_experiment(const ExperimentSpec& spec);
ExperimentReport run_device(const ExperimentSpec& spec);
ExperimentReport run_repeat(const ExperimentSpec& spec);

// Binomial 95% half-width for k successes out of n.
double binomial_ci(std::uint64_t k, std::uint64_t n);

// ---------------------------------------------------------------------------
// Tables

enum class TableId { kI, kII, kIII, kIV };
std::string_view table_name(TableId id);
TableId parse_table_id(std::string_view text);

// Expected entry of a table cell.
struct CellExpectation {
  enum class Kind { kValue, kMuchLessThanOne, kNotApplicable };
  Kind kind = Kind::kValue;
  double value = 0.0;

  std::string to_string() const;
  bool operator==(const CellExpectation&) const = default;
};

struct TableCell {
  std::optional<double> value;  // NA when empty
  CellExpectation expected;
  bool pass = false;

  bool operator==(const TableCell&) const = default;
};

struct TableReport {
  TableId id = TableId::kI;
  RunMode mode = RunMode::kMonteCarlo;
  std::array<std::string, 5> states{"A", "B", "C", "D", "E"};
  std::array<TableCell, 5> q;
  std::array<TableCell, 5> p;
  std::array<std::uint64_t, 5> trials{};  // preparations used per state

  bool pass() const;
  bool operator==(const TableReport&) const = default;
};

struct TableOptions {
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  std::size_t grid_size = kDefaultGridSize;
  RunMode mode = RunMode::kMonteCarlo;
  unsigned workers = 1;
  // Activations needed in the reported stage so that a P = 1/2 estimate is
  // inside the +/-0.01 band at four standard errors.
  std::uint64_t min_activated = 40'000;
};

inline constexpr double kHalfCellTolerance = 0.01;
inline constexpr double kMuchLessThanOne = 0.05;

// Device along z (I), along x (II), z then x with the strict (III) or the
// adapted (IV) rule, all on the x-up preparation.
ExperimentSpec table_spec(TableId id, ModelKind kind, const TableOptions& options);
std::array<CellExpectation, 5> table_expected_q(TableId id);
std::array<CellExpectation, 5> table_expected_p(TableId id);
TableReport reproduce_table(TableId id, const TableOptions& options = {});
// Cell check against the stated tolerances.
bool cell_passes(const std::optional<double>& value, const CellExpectation& expected,
                 RunMode mode);

// ---------------------------------------------------------------------------
// QS facts

enum class Verdict { kPass, kFail, kNotApplicable };
std::string_view verdict_name(Verdict v);

struct FactResult {
  std::string fact;  // "QS-I" .. "QS-V"
  Verdict verdict = Verdict::kNotApplicable;
  std::string statistic;  // name of the deciding statistic
  double value = 0.0;
  double expected = 0.0;
  std::string detail;
};

struct QsFactReport {
  ModelKind model = ModelKind::kQuantum;
  RepeatRule rule = RepeatRule::kAdapted;
  std::array<FactResult, 5> facts;

  // No fact failed.
  bool pass() const;
  const FactResult& fact(int index) const { return facts.at(static_cast<std::size_t>(index - 1)); }
};

struct QsFactOptions {
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  std::size_t grid_size = kDefaultGridSize;
  unsigned workers = 1;
  std::uint64_t min_activated = 1'000;
  double z_limit = 4.0;
};

QsFactReport qs_facts_check(ModelKind kind, RepeatRule rule, const QsFactOptions& options = {});

// ---------------------------------------------------------------------------
// Representation inconsistency (C and D)

struct InconsistencyReport {
  ModelKind model = ModelKind::kExclusive;
  std::string projector_label;
  double projector_up = 0.0;    // tr(|up_x><up_x| rho)
  double projector_down = 0.0;  // tr(|down_x><down_x| rho)
  double projector_relative = 0.0;  // up / (up + down)
  std::string model_label;
  double model_up = 0.0;  // reading from the model's own state expression
  double ratio = 0.0;     // projector_up / model_up
  bool mismatch = true;
  std::string note;
};

// Throws kUsage unless kind is C or D.
InconsistencyReport inconsistency_report(ModelKind kind,
                                         std::size_t grid_size = kDefaultGridSize);

// ---------------------------------------------------------------------------
// Two-spin and Bohm runs

struct PairRun {
  std::uint64_t trials = 0;
  std::array<std::uint64_t, 4> counts{};  // uu, dd, ud, du
  double correlation = 0.0;               // empirical in Monte Carlo, exact otherwise
  double exact = 0.0;
  std::uint64_t equal_outcomes = 0;
};

PairRun run_pair(const PairState& state, const Direction& a, const Direction& b, RunMode mode,
                 std::uint64_t trials, std::uint64_t seed, unsigned workers = 1,
                 std::uint64_t stream = 0);

struct ChshRun {
  std::array<PairRun, 4> terms;  // (a,b), (a,b'), (a',b), (a',b')
  double s = 0.0;
  double exact = 0.0;
};

ChshRun run_chsh(const PairState& state, const Direction& a, const Direction& a_prime,
                 const Direction& b, const Direction& b_prime, RunMode mode,
                 std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

struct BohmRun {
  double j1 = 0.5;
  std::uint64_t trials = 0;
  std::uint64_t first_wins = 0;
  std::uint64_t ties = 0;
  double frequency = 0.0;
  double max_sum_drift = 0.0;
  bool all_monotone = true;
  std::uint64_t max_steps = 0;
};

BohmRun run_bohm(double j1, std::uint64_t trials, std::uint64_t seed,
                 const BohmConfig& config = {}, unsigned workers = 1);

}  // namespace hvtsim

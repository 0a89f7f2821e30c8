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

// Command-line front end for hvtsim: argument parsing, subcommand dispatch
// and report emission. Exit status: 0 all asserted cells pass, 1 a cell
// failed, 2 usage error, 3 runtime error.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hvtsim/harness.hpp"
#include "hvtsim/report_io.hpp"

namespace hvtsim::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

// Overrides the default seed when set.
inline constexpr const char* kSeedEnv = "HVTSIM_SEED";

enum class Format { kJson, kCsv };

struct Sweep {
  double start = 0.0;
  double stop = 180.0;
  double step = 15.0;
};

struct RunConfig {
  std::string subcommand;
  ModelKind model = ModelKind::kQuantum;
  std::string preparation = "x";  // axis, "theta,phi" in degrees, or I | II | III
  std::vector<Direction> devices;
  RepeatRule rule = RepeatRule::kAdapted;
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  std::size_t grid_size = kDefaultGridSize;
  RunMode mode = RunMode::kMonteCarlo;
  Format format = Format::kJson;
  std::string out;  // empty or "-" for stdout
  unsigned workers = 1;
  std::uint64_t min_activated = 0;

  TableId table = TableId::kI;
  bool pair_ihvt = true;                   // singlet/chsh: hidden-variable pair vs 4x4 state
  Sweep sweep;                             // singlet
  std::array<double, 4> chsh_angles{0.0, 90.0, 225.0, 135.0};  // a, a', b, b' in the x-z plane
  std::array<double, 2> pair_angles{0.0, 90.0};                // singlet without --sweep
  bool pair_sweep = false;
  double j1 = 0.5;                         // bohm
  Direction broadcast_basis = Direction::plus_z();
};

// Result of argument parsing: a config, or an exit status for --help and
// usage errors (with the message already printed).
struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = kExitPass;
};

ParseResult parse_args(int argc, const char* const* argv);

struct Output {
  ReportEnvelope envelope;
  std::string csv;
  bool pass = true;
};

// Runs the configured subcommand. Throws hvtsim::Error.
Output execute(const RunConfig& config);

// Executes, writes the report in the requested format and returns the exit
// status. Runtime errors are reported as a JSON error object (JSON format) or
// on stderr, with exit status 3.
int dispatch(const RunConfig& config);

// parse_args followed by dispatch.
int run(int argc, const char* const* argv);

// Parses an axis name (x, -y, +z), "theta,phi" in degrees, or fails with
// kUsage.
Direction parse_direction(const std::string& text);
Preparation parse_preparation(const std::string& text);

}  // namespace hvtsim::cli

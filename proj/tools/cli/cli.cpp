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

#include "cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hvtsim/naive.hpp"

namespace hvtsim::cli {

namespace {

double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

std::vector<double> split_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    std::optional<double> v;
    try {
      v = parse_number(item);
    } catch (const Error&) {
    }
    if (!v || !std::isfinite(*v)) {
      throw Error(ErrorCode::kUsage, "malformed number '" + item + "' in '" + text + "'");
    }
    out.push_back(*v);
  }
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0') return v;
    throw Error(ErrorCode::kUsage, std::string(kSeedEnv) + " must be an unsigned integer");
  }
  return kDefaultSeed;
}

// Direction in the x-z plane at `degrees` from +z towards +x.
Direction planar(double degrees) { return Direction::from_angles(radians(degrees), 0.0); }

struct RawArgs {
  std::string model = "A";
  std::string inconsistency_model = "C";
  std::string prep = "x";
  std::vector<std::string> devices;
  std::string rule = "adapted";
  std::uint64_t trials = kDefaultTrials;
  std::optional<std::uint64_t> seed;
  std::size_t grid = kDefaultGridSize;
  std::string mode = "monte-carlo";
  std::string format = "json";
  std::string out;
  unsigned workers = 0;
  std::uint64_t min_activated = 0;
  std::string table = "I";
  std::string pair = "ihvt";
  std::string sweep;
  std::string angles;
  std::string pair_angles;
  double j1 = 0.5;
  std::string basis = "z";
};

void add_common(CLI::App* sub, RawArgs& raw) {
  sub->add_option("--n,--trials", raw.trials, "Trials (preparations) per run")->capture_default_str();
  sub->add_option("--seed", raw.seed, "Random seed (default 42, or $HVTSIM_SEED)");
  sub->add_option("--mode", raw.mode, "exact | monte-carlo")->capture_default_str();
  sub->add_option("--format", raw.format, "json | csv")->capture_default_str();
  sub->add_option("--out", raw.out, "Output path (default stdout)");
  sub->add_option("--workers", raw.workers, "Worker threads (default: hardware threads)");
}

void add_grid(CLI::App* sub, RawArgs& raw) {
  sub->add_option("--M,--grid", raw.grid, "Direction-grid size (even)")->capture_default_str();
}

RunConfig finish(const std::string& name, const RawArgs& raw) {
  RunConfig c;
  c.subcommand = name;
  c.model = parse_model_kind(name == "inconsistency" ? raw.inconsistency_model : raw.model);
  c.preparation = raw.prep;
  (void)parse_preparation(raw.prep);
  for (const auto& d : raw.devices) c.devices.push_back(parse_direction(d));
  c.rule = parse_rule(raw.rule);
  if (raw.trials < 1) throw Error(ErrorCode::kUsage, "--n must be >= 1");
  c.trials = raw.trials;
  c.seed = raw.seed ? *raw.seed : default_seed();
  if (raw.grid % 2 != 0 || raw.grid < 8) throw Error(ErrorCode::kUsage, "--M must be even and >= 8");
  c.grid_size = raw.grid;
  c.mode = parse_mode(raw.mode);
  if (raw.format == "json") {
    c.format = Format::kJson;
  } else if (raw.format == "csv") {
    c.format = Format::kCsv;
  } else {
    throw Error(ErrorCode::kUsage, "--format must be json or csv");
  }
  c.out = raw.out;
  c.workers = raw.workers > 0 ? raw.workers : std::max(1u, std::thread::hardware_concurrency());
  c.min_activated = raw.min_activated;
  c.table = parse_table_id(raw.table);
  if (raw.pair == "ihvt") {
    c.pair_ihvt = true;
  } else if (raw.pair == "quantum" || raw.pair == "qm") {
    c.pair_ihvt = false;
  } else {
    throw Error(ErrorCode::kUsage, "--pair must be ihvt or quantum");
  }
  if (!raw.sweep.empty()) {
    const auto v = split_numbers(raw.sweep, ':');
    if (v.size() != 3 || !(v[2] > 0.0) || v[1] < v[0]) {
      throw Error(ErrorCode::kUsage, "--sweep expects start:stop:step with step > 0");
    }
    c.sweep = {v[0], v[1], v[2]};
    c.pair_sweep = true;
  }
  if (!raw.angles.empty()) {
    const auto v = split_numbers(raw.angles, ',');
    if (v.size() != 4) throw Error(ErrorCode::kUsage, "--angles expects a,a',b,b' in degrees");
    std::copy(v.begin(), v.end(), c.chsh_angles.begin());
  }
  if (!raw.pair_angles.empty()) {
    const auto v = split_numbers(raw.pair_angles, ',');
    if (v.size() != 2) throw Error(ErrorCode::kUsage, "--angles expects a,b in degrees");
    std::copy(v.begin(), v.end(), c.pair_angles.begin());
  }
  if (!(raw.j1 > 0.0 && raw.j1 < 1.0)) throw Error(ErrorCode::kUsage, "--j1 must lie in (0, 1)");
  c.j1 = raw.j1;
  c.broadcast_basis = parse_direction(raw.basis);

  if (name == "device" && c.devices.empty()) c.devices = {Direction::plus_z()};
  if (name == "repeat") {
    if (c.devices.empty()) c.devices = {Direction::plus_z(), Direction::plus_x()};
    if (c.devices.size() != 2) throw Error(ErrorCode::kUsage, "repeat expects two --device values");
  }
  if (name == "device" && c.devices.size() != 1) {
    throw Error(ErrorCode::kUsage, "device expects one --device value");
  }
  if (name == "inconsistency" && c.model != ModelKind::kExclusive &&
      c.model != ModelKind::kIndependent) {
    throw Error(ErrorCode::kUsage, "inconsistency covers models C and D only");
  }
  if (c.mode == RunMode::kExact && c.min_activated > 0) {
    throw Error(ErrorCode::kUsage, "--min-activated applies to monte-carlo runs only");
  }
  return c;
}

}  // namespace

Direction parse_direction(const std::string& text) {
  static const std::vector<std::pair<std::string, Vec3>> axes{
      {"x", Vec3::UnitX()}, {"+x", Vec3::UnitX()}, {"-x", -Vec3::UnitX()},
      {"y", Vec3::UnitY()}, {"+y", Vec3::UnitY()}, {"-y", -Vec3::UnitY()},
      {"z", Vec3::UnitZ()}, {"+z", Vec3::UnitZ()}, {"-z", -Vec3::UnitZ()}};
  for (const auto& [name, v] : axes) {
    if (text == name) return Direction::from_components(v.x(), v.y(), v.z());
  }
  const auto v = split_numbers(text, ',');
  if (v.size() != 2) {
    throw Error(ErrorCode::kUsage, "direction '" + text + "' is neither an axis nor theta,phi");
  }
  return Direction::from_angles(radians(v[0]), radians(v[1]));
}

Preparation parse_preparation(const std::string& text) {
  if (text == "I") return Preparation::mixture(MixtureId::kI);
  if (text == "II") return Preparation::mixture(MixtureId::kII);
  if (text == "III") return Preparation::mixture(MixtureId::kIII);
  return Preparation::pure(parse_direction(text));
}

ParseResult parse_args(int argc, const char* const* argv) {
  CLI::App app{"hvtsim: quantum and hidden-variable spin measurement simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));
  RawArgs raw;

  CLI::App* table = app.add_subcommand("table", "Reproduce one of the Q/P tables");
  table->add_option("--id", raw.table, "I | II | III | IV")->capture_default_str();
  add_common(table, raw);
  add_grid(table, raw);

  for (const char* name : {"device", "repeat"}) {
    CLI::App* sub = app.add_subcommand(
        name, std::string(name) == "device" ? "One device use per preparation"
                                           : "Two device uses; reports the second");
    sub->add_option("--model", raw.model, "A | B | C | D | E | F | naive")->capture_default_str();
    sub->add_option("--prep", raw.prep, "Axis (x, -z, ...), theta,phi in degrees, or I | II | III")
        ->capture_default_str();
    sub->add_option("--device", raw.devices, "Device direction: axis or theta,phi in degrees");
    sub->add_option("--rule", raw.rule, "strict | adapted")->capture_default_str();
    sub->add_option("--min-activated", raw.min_activated,
                    "Extend Monte Carlo runs until the reported stage fired this often");
    add_common(sub, raw);
    add_grid(sub, raw);
  }

  CLI::App* qs = app.add_subcommand("qsfacts", "QS-I..QS-V conformance of one model");
  qs->add_option("--model", raw.model, "A | B | C | D | E | F | naive")->capture_default_str();
  qs->add_option("--rule", raw.rule, "strict | adapted")->capture_default_str();
  qs->add_option("--min-activated", raw.min_activated, "Activations required in sparse stages");
  add_common(qs, raw);
  add_grid(qs, raw);

  CLI::App* singlet = app.add_subcommand("singlet", "Singlet correlations in the x-z plane");
  singlet->add_option("--sweep", raw.sweep, "start:stop:step relative angle in degrees");
  singlet->add_option("--angles", raw.pair_angles, "a,b in degrees (without --sweep)");
  singlet->add_option("--pair", raw.pair, "ihvt | quantum")->capture_default_str();
  add_common(singlet, raw);

  CLI::App* chsh_cmd = app.add_subcommand("chsh", "CHSH value from four correlators");
  chsh_cmd->add_option("--angles", raw.angles, "a,a',b,b' in degrees, x-z plane");
  chsh_cmd->add_option("--pair", raw.pair, "ihvt | quantum")->capture_default_str();
  add_common(chsh_cmd, raw);

  CLI::App* bohm = app.add_subcommand("bohm", "Collapse trajectories and winner statistics");
  bohm->add_option("--j1", raw.j1, "Initial weight of branch 1")->capture_default_str();
  add_common(bohm, raw);

  CLI::App* broadcast = app.add_subcommand("broadcast", "Meter-copy broadcast of a qubit state");
  broadcast->add_option("--prep", raw.prep, "Pure state axis or theta,phi in degrees")
      ->capture_default_str();
  broadcast->add_option("--basis", raw.basis, "Copy basis")->capture_default_str();
  add_common(broadcast, raw);

  CLI::App* inc = app.add_subcommand("inconsistency", "Two expressions of the same state");
  inc->add_option("--model", raw.inconsistency_model, "C | D")->capture_default_str();
  add_common(inc, raw);
  add_grid(inc, raw);

  ParseResult result;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    result.exit_code = app.exit(e) == 0 ? kExitPass : kExitUsage;
    return result;
  }
  try {
    result.config = finish(app.get_subcommands().front()->get_name(), raw);
  } catch (const Error& e) {
    std::cerr << "hvtsim: " << e.what() << "\n";
    result.exit_code = kExitUsage;
  }
  return result;
}

namespace {

Json config_json(const RunConfig& c) {
  Json j{{"subcommand", c.subcommand}, {"mode", std::string(mode_name(c.mode))}};
  const std::string& s = c.subcommand;
  if (s != "broadcast" && s != "inconsistency" && s != "bohm") j["trials"] = c.trials;
  if (s == "table") {
    j["table"] = std::string(table_name(c.table));
    j["grid_size"] = c.grid_size;
  }
  if (s == "device" || s == "repeat" || s == "qsfacts") {
    j["model"] = std::string(model_label(c.model));
    j["rule"] = std::string(rule_name(c.rule));
    j["grid_size"] = c.grid_size;
    if (c.min_activated > 0) j["min_activated"] = c.min_activated;
  }
  if (s == "device" || s == "repeat") {
    j["preparation"] = c.preparation;
    Json devs = Json::array();
    for (const auto& d : c.devices) devs.push_back(direction_to_json(d));
    j["devices"] = devs;
  }
  if (s == "singlet" || s == "chsh") j["pair"] = c.pair_ihvt ? "ihvt" : "quantum";
  if (s == "singlet") {
    if (c.pair_sweep) {
      j["sweep"] = {c.sweep.start, c.sweep.stop, c.sweep.step};
    } else {
      j["angles"] = c.pair_angles;
    }
  }
  if (s == "chsh") j["angles"] = c.chsh_angles;
  if (s == "bohm") {
    j["j1"] = c.j1;
    j["trials"] = c.trials;
  }
  if (s == "broadcast") {
    j["preparation"] = c.preparation;
    j["basis"] = direction_to_json(c.broadcast_basis);
  }
  if (s == "inconsistency") {
    j["model"] = std::string(model_label(c.model));
    j["grid_size"] = c.grid_size;
  }
  return j;
}

PairState pair_state(const RunConfig& c) {
  if (c.pair_ihvt) return IhvtPair{};
  return SingletQm{};
}

Json matrix_json(const Matrix2& m) {
  Json rows = Json::array();
  for (int r = 0; r < 2; ++r) {
    Json row = Json::array();
    for (int col = 0; col < 2; ++col) row.push_back({m(r, col).real(), m(r, col).imag()});
    rows.push_back(row);
  }
  return rows;
}

Output run_table(const RunConfig& c) {
  TableOptions o;
  o.trials = c.trials;
  o.seed = c.seed;
  o.grid_size = c.grid_size;
  o.mode = c.mode;
  o.workers = c.workers;
  const TableReport t = reproduce_table(c.table, o);
  Output out;
  out.envelope.results = table_to_json(t);
  out.envelope.conformance = table_conformance(t);
  out.csv = table_to_csv(t);
  out.pass = t.pass();
  return out;
}

Output run_device_cmd(const RunConfig& c) {
  ExperimentSpec spec;
  spec.model = c.model;
  spec.preparation = parse_preparation(c.preparation);
  spec.devices = c.devices;
  spec.rule = c.rule;
  spec.trials = c.trials;
  spec.seed = c.seed;
  spec.mode = c.mode;
  spec.grid_size = c.grid_size;
  spec.workers = c.workers;
  spec.min_activated = c.min_activated;
  const ExperimentReport r = c.subcommand == "device" ? run_device(spec) : run_repeat(spec);
  Output out;
  out.envelope.results = experiment_to_json(r);
  out.envelope.conformance = Json{{"pass", true}, {"asserted", 0}};
  out.csv = experiment_to_csv(r);
  return out;
}

Output run_qsfacts(const RunConfig& c) {
  QsFactOptions o;
  o.trials = c.trials;
  o.seed = c.seed;
  o.grid_size = c.grid_size;
  o.workers = c.workers;
  if (c.min_activated > 0) o.min_activated = c.min_activated;
  const QsFactReport r = qs_facts_check(c.model, c.rule, o);
  Output out;
  out.envelope.results = qs_facts_to_json(r);
  out.envelope.conformance = qs_facts_conformance(r);
  std::vector<std::vector<std::string>> rows{{"fact", "verdict", "statistic", "value", "expected"}};
  for (const auto& f : r.facts) {
    rows.push_back({f.fact, std::string(verdict_name(f.verdict)), "\"" + f.statistic + "\"",
                    format_number(f.value), format_number(f.expected)});
  }
  out.csv = csv_lines(rows);
  out.pass = r.pass();
  return out;
}

Output run_singlet(const RunConfig& c) {
  const PairState state = pair_state(c);
  std::vector<std::pair<double, double>> settings;
  if (c.pair_sweep) {
    const auto steps = static_cast<long>(std::floor((c.sweep.stop - c.sweep.start) / c.sweep.step + 1e-9));
    for (long k = 0; k <= steps; ++k) settings.emplace_back(0.0, c.sweep.start + k * c.sweep.step);
  } else {
    settings.emplace_back(c.pair_angles[0], c.pair_angles[1]);
  }
  Json rows = Json::array();
  std::vector<std::vector<std::string>> csv{{"angle", "E", "exact"}};
  bool pass = true;
  Json failures = Json::array();
  std::uint64_t stream = 0;
  for (const auto& [a, b] : settings) {
    const PairRun r = run_pair(state, planar(a), planar(b), c.mode, c.trials, c.seed, c.workers, stream++);
    const double angle = b - a;
    double tol = kExactTol;
    if (c.mode == RunMode::kMonteCarlo) {
      tol = 4.0 * std::sqrt(std::max(1e-300, 1.0 - r.exact * r.exact) / static_cast<double>(c.trials));
    }
    const bool ok = std::abs(r.correlation - r.exact) <= std::max(tol, kExactTol);
    if (!ok) failures.push_back(angle);
    pass = pass && ok;
    Json row = pair_run_to_json(r);
    row["a"] = a;
    row["b"] = b;
    rows.push_back(row);
    csv.push_back({format_number(angle), format_number(r.correlation), format_number(r.exact)});
  }
  Output out;
  out.envelope.results = Json{{"correlations", rows}};
  out.envelope.conformance = Json{{"pass", pass}, {"failures", failures}};
  out.csv = csv_lines(csv);
  out.pass = pass;
  return out;
}

Output run_chsh_cmd(const RunConfig& c) {
  const auto& g = c.chsh_angles;
  const ChshRun r = run_chsh(pair_state(c), planar(g[0]), planar(g[1]), planar(g[2]),
                             planar(g[3]), c.mode, c.trials, c.seed, c.workers);
  const double tol = c.mode == RunMode::kExact ? 1e-9 : 0.02;
  const bool pass = std::abs(r.s - r.exact) <= tol;
  Output out;
  out.envelope.results = chsh_to_json(r);
  out.envelope.conformance = Json{{"pass", pass}, {"tolerance", tol}};
  static const std::array<const char*, 4> names{"E(a,b)", "E(a,b')", "E(a',b)", "E(a',b')"};
  std::vector<std::vector<std::string>> csv{{"term", "E", "exact"}};
  for (std::size_t k = 0; k < 4; ++k) {
    csv.push_back({names[k], format_number(r.terms[k].correlation), format_number(r.terms[k].exact)});
  }
  csv.push_back({"S", format_number(r.s), format_number(r.exact)});
  out.csv = csv_lines(csv);
  out.pass = pass;
  return out;
}

Output run_bohm_cmd(const RunConfig& c) {
  const BohmRun r = run_bohm(c.j1, c.trials, c.seed, BohmConfig{}, c.workers);
  Rng rng = Rng::for_trial(c.seed, 1, 0);
  const XiSquared xi = bohm_draw_xi(rng);
  const BohmTrajectory t = bohm_evolve(BohmState{c.j1, 1.0 - c.j1, xi.first, xi.second, 1.0});
  const double band = 4.0 * std::sqrt(c.j1 * (1.0 - c.j1) / static_cast<double>(c.trials));
  const bool pass = std::abs(r.frequency - c.j1) <= band && r.max_sum_drift <= 1e-9 && r.all_monotone;
  Json trajectory = Json::array();
  const std::size_t stride = std::max<std::size_t>(1, t.points.size() / 200);
  for (std::size_t i = 0; i < t.points.size(); i += stride) {
    trajectory.push_back({t.points[i].first, t.points[i].second});
  }
  trajectory.push_back({t.points.back().first, t.points.back().second});
  Output out;
  out.envelope.results = bohm_run_to_json(r);
  out.envelope.results["sample_trajectory"] =
      Json{{"xi_sq", {xi.first, xi.second}},
           {"steps", t.steps},
           {"winner", t.winner == BohmWinner::kFirst ? 1 : (t.winner == BohmWinner::kSecond ? 2 : 0)},
           {"points", trajectory}};
  out.envelope.conformance = Json{{"pass", pass}, {"frequency_band", band}};
  out.csv = csv_lines({{"j1", "trials", "first_wins", "frequency", "max_sum_drift", "all_monotone"},
                       {format_number(r.j1), std::to_string(r.trials), std::to_string(r.first_wins),
                        format_number(r.frequency), format_number(r.max_sum_drift),
                        r.all_monotone ? "true" : "false"}});
  out.pass = pass;
  return out;
}

Output run_broadcast(const RunConfig& c) {
  const Preparation prep = parse_preparation(c.preparation);
  const QubitState rho = prep.density();
  const BroadcastResult b = broadcast_demo(rho, c.broadcast_basis);
  const Matrix2 in = in_basis(rho, c.broadcast_basis);
  const bool diagonal = std::abs(in(0, 1)) <= kExactTol;
  const double dev_object = rho.max_abs_diff(b.reduced_object);
  const double dev_meter = rho.max_abs_diff(b.reduced_meter);
  // Expected reduced state: the input with its off-diagonal part in the copy
  // basis removed.
  Matrix2 dephased = Matrix2::Zero();
  dephased(0, 0) = in(0, 0);
  dephased(1, 1) = in(1, 1);
  const SpinBasis sb = spin_basis(c.broadcast_basis);
  Matrix2 u;
  u.col(0) = sb.up;
  u.col(1) = sb.down;
  const Matrix2 expected = u * dephased * u.adjoint();
  const double dev_expected = std::max((b.reduced_object.matrix() - expected).cwiseAbs().maxCoeff(),
                                       (b.reduced_meter.matrix() - expected).cwiseAbs().maxCoeff());
  const bool pass = dev_expected <= kExactTol && (!diagonal || std::max(dev_object, dev_meter) <= kExactTol);
  Output out;
  out.envelope.results = Json{{"input", matrix_json(rho.matrix())},
                              {"reduced_object", matrix_json(b.reduced_object.matrix())},
                              {"reduced_meter", matrix_json(b.reduced_meter.matrix())},
                              {"diagonal_in_basis", diagonal},
                              {"broadcast", std::max(dev_object, dev_meter) <= kExactTol},
                              {"max_deviation_from_input", std::max(dev_object, dev_meter)},
                              {"trace_object", b.reduced_object.matrix().trace().real()},
                              {"trace_meter", b.reduced_meter.matrix().trace().real()}};
  out.envelope.conformance = Json{{"pass", pass}};
  std::vector<std::vector<std::string>> csv{{"which", "row", "col", "re", "im"}};
  auto add = [&](const char* which, const Matrix2& m) {
    for (int r = 0; r < 2; ++r) {
      for (int col = 0; col < 2; ++col) {
        csv.push_back({which, std::to_string(r), std::to_string(col), format_number(m(r, col).real()),
                       format_number(m(r, col).imag())});
      }
    }
  };
  add("input", rho.matrix());
  add("reduced_object", b.reduced_object.matrix());
  add("reduced_meter", b.reduced_meter.matrix());
  out.csv = csv_lines(csv);
  out.pass = pass;
  return out;
}

Output run_inconsistency(const RunConfig& c) {
  const InconsistencyReport r = inconsistency_report(c.model, c.grid_size);
  Output out;
  out.envelope.results = inconsistency_to_json(r);
  out.envelope.conformance = Json{{"pass", true}, {"mismatch_flagged", r.mismatch}};
  out.csv = csv_lines({{"reading", "p_up", "p_down"},
                       {"projector", format_number(r.projector_up), format_number(r.projector_down)},
                       {"model", format_number(r.model_up), format_number(1.0 - r.model_up)}});
  return out;
}

}  // namespace

Output execute(const RunConfig& c) {
  Output out;
  const std::string& s = c.subcommand;
  if (s == "table") {
    out = run_table(c);
  } else if (s == "device" || s == "repeat") {
    out = run_device_cmd(c);
  } else if (s == "qsfacts") {
    out = run_qsfacts(c);
  } else if (s == "singlet") {
    out = run_singlet(c);
  } else if (s == "chsh") {
    out = run_chsh_cmd(c);
  } else if (s == "bohm") {
    out = run_bohm_cmd(c);
  } else if (s == "broadcast") {
    out = run_broadcast(c);
  } else if (s == "inconsistency") {
    out = run_inconsistency(c);
  } else {
    throw Error(ErrorCode::kUsage, "unknown subcommand '" + s + "'");
  }
  out.envelope.spec = config_json(c);
  out.envelope.seed = c.seed;
  return out;
}

int dispatch(const RunConfig& config) {
  try {
    const Output out = execute(config);
    write_output(config.out, config.format == Format::kJson ? emit_json(out.envelope) : out.csv);
    return out.pass ? kExitPass : kExitFail;
  } catch (const Error& e) {
    const int code = e.code() == ErrorCode::kUsage ? kExitUsage : kExitRuntime;
    if (config.format == Format::kJson) {
      const Json j{{"error", {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}}},
                   {"version", std::string(library_version())},
                   {"seed", config.seed}};
      try {
        write_output(config.out, j.dump(2) + "\n");
      } catch (const Error&) {
        std::cout << j.dump(2) << "\n";
      }
    }
    std::cerr << "hvtsim: " << e.what() << "\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "hvtsim: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int run(int argc, const char* const* argv) {
  ParseResult parsed;
  try {
    parsed = parse_args(argc, argv);
  } catch (const Error& e) {
    std::cerr << "hvtsim: " << e.what() << "\n";
    return e.code() == ErrorCode::kUsage ? kExitUsage : kExitRuntime;
  }
  if (!parsed.config) return parsed.exit_code;
  return dispatch(*parsed.config);
}

}  // namespace hvtsim::cli

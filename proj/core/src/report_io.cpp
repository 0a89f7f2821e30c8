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

#include "hvtsim/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef HVTSIM_VERSION
#define HVTSIM_VERSION "0.0.0"
#endif

namespace hvtsim {

std::string_view library_version() { return HVTSIM_VERSION; }

Json envelope_to_json(const ReportEnvelope& e) {
  return Json{{"spec", e.spec},
              {"results", e.results},
              {"conformance", e.conformance},
              {"version", e.version},
              {"seed", e.seed}};
}

ReportEnvelope envelope_from_json(const Json& j) {
  try {
    ReportEnvelope e;
    e.spec = j.at("spec");
    e.results = j.at("results");
    e.conformance = j.at("conformance");
    e.version = j.at("version").get<std::string>();
    e.seed = j.at("seed").get<std::uint64_t>();
    return e;
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::kIo, std::string("malformed report: ") + ex.what());
  }
}

std::string emit_json(const ReportEnvelope& envelope) {
  return envelope_to_json(envelope).dump(2) + "\n";
}

ReportEnvelope parse_envelope(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::kIo, std::string("malformed report: ") + ex.what());
  }
  return envelope_from_json(j);
}

std::string format_number(std::optional<double> value) {
  if (!value) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), *value);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view text) {
  if (text == "NA") return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kIo, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

namespace {

Json optional_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json("NA");
}

std::optional<double> optional_from(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "NA") throw Error(ErrorCode::kIo, "expected a number or NA");
    return std::nullopt;
  }
  return j.get<double>();
}

template <class T, class F>
Json array_of(const T& items, F f) {
  Json a = Json::array();
  for (const auto& x : items) a.push_back(f(x));
  return a;
}

template <class Fn>
auto guarded(Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::kIo, std::string("malformed report: ") + ex.what());
  }
}

}  // namespace

Json direction_to_json(const Direction& d) { return Json::array({d.x(), d.y(), d.z()}); }

Direction direction_from_json(const Json& j) {
  return guarded([&] {
    return Direction::from_components(j.at(0).get<double>(), j.at(1).get<double>(),
                                      j.at(2).get<double>());
  });
}

Json spec_to_json(const ExperimentSpec& spec) {
  Json j{{"model", std::string(model_label(spec.model))},
         {"preparation", spec.preparation.label()},
         {"devices", array_of(spec.devices, direction_to_json)},
         {"rule", std::string(rule_name(spec.rule))},
         {"trials", spec.trials},
         {"mode", std::string(mode_name(spec.mode))},
         {"grid_size", spec.grid_size}};
  if (spec.min_activated > 0) j["min_activated"] = spec.min_activated;
  return j;
}

Json experiment_to_json(const ExperimentReport& r) {
  Json stages = Json::array();
  for (const StageReport& s : r.stages) {
    stages.push_back(Json{{"reached", s.reached},
                          {"activated", s.activated},
                          {"positive", s.positive},
                          {"Q", s.q},
                          {"P", optional_json(s.p)},
                          {"Q_ci", s.q_ci},
                          {"P_ci", optional_json(s.p_ci)},
                          {"activated_after", s.activated_after},
                          {"positive_after", s.positive_after},
                          {"P_after", array_of(s.p_after, optional_json)}});
  }
  return Json{{"mode", std::string(mode_name(r.mode))}, {"trials", r.trials}, {"stages", stages}};
}

ExperimentReport experiment_from_json(const Json& j) {
  return guarded([&] {
    ExperimentReport r;
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.trials = j.at("trials").get<std::uint64_t>();
    for (const Json& s : j.at("stages")) {
      StageReport st;
      st.reached = s.at("reached").get<std::uint64_t>();
      st.activated = s.at("activated").get<std::uint64_t>();
      st.positive = s.at("positive").get<std::uint64_t>();
      st.q = s.at("Q").get<double>();
      st.p = optional_from(s.at("P"));
      st.q_ci = s.at("Q_ci").get<double>();
      st.p_ci = optional_from(s.at("P_ci"));
      st.activated_after = s.at("activated_after").get<std::array<std::uint64_t, 2>>();
      st.positive_after = s.at("positive_after").get<std::array<std::uint64_t, 2>>();
      for (std::size_t k = 0; k < 2; ++k) st.p_after[k] = optional_from(s.at("P_after").at(k));
      r.stages.push_back(st);
    }
    return r;
  });
}

std::string experiment_to_csv(const ExperimentReport& r) {
  std::vector<std::vector<std::string>> rows{{"stage", "reached", "activated", "positive", "Q", "P"}};
  for (std::size_t k = 0; k < r.stages.size(); ++k) {
    const StageReport& s = r.stages[k];
    rows.push_back({std::to_string(k + 1), std::to_string(s.reached), std::to_string(s.activated),
                    std::to_string(s.positive), format_number(s.q), format_number(s.p)});
  }
  return csv_lines(rows);
}

namespace {

Json expectation_json(const CellExpectation& e) {
  switch (e.kind) {
    case CellExpectation::Kind::kNotApplicable: return "NA";
    case CellExpectation::Kind::kMuchLessThanOne: return "<<1";
    case CellExpectation::Kind::kValue: break;
  }
  return e.value;
}

CellExpectation expectation_from(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "NA") return {CellExpectation::Kind::kNotApplicable, 0.0};
    if (s == "<<1") return {CellExpectation::Kind::kMuchLessThanOne, 0.0};
    throw Error(ErrorCode::kIo, "unknown cell expectation '" + s + "'");
  }
  return {CellExpectation::Kind::kValue, j.get<double>()};
}

}  // namespace

Json table_to_json(const TableReport& t) {
  auto values = [](const std::array<TableCell, 5>& cells) {
    return array_of(cells, [](const TableCell& c) { return optional_json(c.value); });
  };
  auto expected = [](const std::array<TableCell, 5>& cells) {
    return array_of(cells, [](const TableCell& c) { return expectation_json(c.expected); });
  };
  auto passes = [](const std::array<TableCell, 5>& cells) {
    return array_of(cells, [](const TableCell& c) { return Json(c.pass); });
  };
  return Json{{"table", std::string(table_name(t.id))},
              {"mode", std::string(mode_name(t.mode))},
              {"states", t.states},
              {"Q", values(t.q)},
              {"P", values(t.p)},
              {"expected_Q", expected(t.q)},
              {"expected_P", expected(t.p)},
              {"pass_Q", passes(t.q)},
              {"pass_P", passes(t.p)},
              {"trials", t.trials}};
}

TableReport table_from_json(const Json& j) {
  return guarded([&] {
    TableReport t;
    t.id = parse_table_id(j.at("table").get<std::string>());
    t.mode = parse_mode(j.at("mode").get<std::string>());
    t.states = j.at("states").get<std::array<std::string, 5>>();
    t.trials = j.at("trials").get<std::array<std::uint64_t, 5>>();
    for (std::size_t i = 0; i < 5; ++i) {
      t.q[i] = {optional_from(j.at("Q").at(i)), expectation_from(j.at("expected_Q").at(i)),
                j.at("pass_Q").at(i).get<bool>()};
      t.p[i] = {optional_from(j.at("P").at(i)), expectation_from(j.at("expected_P").at(i)),
                j.at("pass_P").at(i).get<bool>()};
    }
    return t;
  });
}

Json table_conformance(const TableReport& t) {
  Json failures = Json::array();
  for (std::size_t i = 0; i < 5; ++i) {
    if (!t.q[i].pass) failures.push_back("Q/" + t.states[i]);
    if (!t.p[i].pass) failures.push_back("P/" + t.states[i]);
  }
  return Json{{"pass", t.pass()}, {"cells", 10}, {"failures", failures}};
}

std::string table_to_csv(const TableReport& t) {
  std::vector<std::vector<std::string>> rows{{"state", "Q", "P"}};
  for (std::size_t i = 0; i < 5; ++i) {
    rows.push_back({t.states[i], format_number(t.q[i].value), format_number(t.p[i].value)});
  }
  return csv_lines(rows);
}

std::vector<TableCsvRow> parse_table_csv(std::string_view text) {
  std::vector<TableCsvRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "state,Q,P") {
    throw Error(ErrorCode::kIo, "table CSV must start with the header 'state,Q,P'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw Error(ErrorCode::kIo, "malformed table CSV row: '" + line + "'");
    }
    std::string_view v(line);
    rows.push_back({line.substr(0, c1), parse_number(v.substr(c1 + 1, c2 - c1 - 1)),
                    parse_number(v.substr(c2 + 1))});
  }
  return rows;
}

Json qs_facts_to_json(const QsFactReport& r) {
  Json facts = Json::array();
  for (const FactResult& f : r.facts) {
    facts.push_back(Json{{"fact", f.fact},
                         {"verdict", std::string(verdict_name(f.verdict))},
                         {"statistic", f.statistic},
                         {"value", f.value},
                         {"expected", f.expected},
                         {"detail", f.detail}});
  }
  return Json{{"model", std::string(model_label(r.model))},
              {"rule", std::string(rule_name(r.rule))},
              {"facts", facts}};
}

Json qs_facts_conformance(const QsFactReport& r) {
  Json failures = Json::array();
  for (const FactResult& f : r.facts) {
    if (f.verdict == Verdict::kFail) failures.push_back(f.fact);
  }
  return Json{{"pass", r.pass()}, {"failures", failures}};
}

Json inconsistency_to_json(const InconsistencyReport& r) {
  return Json{{"model", std::string(model_label(r.model))},
              {"projector_label", r.projector_label},
              {"projector_up", r.projector_up},
              {"projector_down", r.projector_down},
              {"projector_relative", r.projector_relative},
              {"model_label", r.model_label},
              {"model_up", r.model_up},
              {"ratio", r.ratio},
              {"mismatch", r.mismatch},
              {"note", r.note}};
}

Json pair_run_to_json(const PairRun& r) {
  return Json{{"trials", r.trials},
              {"counts", r.counts},
              {"correlation", r.correlation},
              {"exact", r.exact},
              {"equal_outcomes", r.equal_outcomes}};
}

Json chsh_to_json(const ChshRun& r) {
  return Json{{"terms", array_of(r.terms, pair_run_to_json)}, {"S", r.s}, {"exact", r.exact}};
}

Json bohm_run_to_json(const BohmRun& r) {
  return Json{{"j1", r.j1},
              {"trials", r.trials},
              {"first_wins", r.first_wins},
              {"ties", r.ties},
              {"frequency", r.frequency},
              {"max_sum_drift", r.max_sum_drift},
              {"all_monotone", r.all_monotone},
              {"max_steps", r.max_steps}};
}

std::string csv_lines(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

void write_output(const std::string& path, std::string_view content) {
  if (path.empty() || path == "-") {
    std::cout.write(content.data(), static_cast<std::streamsize>(content.size()));
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace hvtsim

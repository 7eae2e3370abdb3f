// Copyright 2026 The coopgame Authors
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

#include "coopgame/harness/scenario_io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "coopgame/errors.h"

namespace coopgame::harness {
namespace {

const std::set<std::string> kSystemKeys = {
    "slot_length",       "bandwidth",         "noise_power",
    "max_tx_power",      "pathloss_constant", "pathloss_exponent",
    "v",                 "su_cost_baseline"};
const std::set<std::string> kDuKeys = {"position", "kappa", "cycles_per_mb",
                                       "f_max", "workload"};
const std::set<std::string> kSuKeys = {"id",    "position", "kappa",
                                       "cycles_per_mb", "f_max", "p_rec",
                                       "workload"};
const std::set<std::string> kSolverKeys = {
    "mode",           "update_order", "initial_prices", "epsilon",
    "max_iterations", "probe_delta",  "learning_rates"};
const std::set<std::string> kExperimentKeys = {"mode", "variable", "from",
                                               "to", "step"};
const std::set<std::string> kSections = {"system", "du", "su", "solver",
                                         "experiment"};

[[noreturn]] void Fail(const YAML::Node& node, const std::string& message) {
  const YAML::Mark mark = node.Mark();
  if (mark.is_null()) throw Error(ErrorCategory::kParse, message);
  throw Error(ErrorCategory::kParse,
              fmt::format("line {}, column {}: {}", mark.line + 1,
                          mark.column + 1, message));
}

void RejectUnknown(const YAML::Node& map, const std::set<std::string>& allowed,
                   std::string_view where) {
  if (!map.IsMap()) Fail(map, fmt::format("{} must be a mapping", where));
  for (const auto& item : map) {
    const std::string key = item.first.as<std::string>();
    if (!allowed.count(key)) {
      Fail(item.first, fmt::format("unknown key '{}' in {}", key, where));
    }
  }
}

double ReadDouble(const YAML::Node& map, const char* key, double fallback,
                  std::string_view where) {
  const YAML::Node node = map[key];
  if (!node) return fallback;
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    Fail(node, fmt::format("{}.{} must be a number", where, key));
  }
}

int ReadInt(const YAML::Node& map, const char* key, int fallback,
            std::string_view where) {
  const YAML::Node node = map[key];
  if (!node) return fallback;
  try {
    return node.as<int>();
  } catch (const YAML::Exception&) {
    Fail(node, fmt::format("{}.{} must be an integer", where, key));
  }
}

std::string ReadString(const YAML::Node& map, const char* key,
                       std::string fallback, std::string_view where) {
  const YAML::Node node = map[key];
  if (!node) return fallback;
  if (!node.IsScalar()) {
    Fail(node, fmt::format("{}.{} must be a scalar", where, key));
  }
  return node.as<std::string>();
}

std::vector<double> ReadDoubles(const YAML::Node& node,
                                std::string_view where) {
  std::vector<double> values;
  try {
    if (node.IsSequence()) {
      for (const auto& item : node) values.push_back(item.as<double>());
    } else {
      values.push_back(node.as<double>());
    }
  } catch (const YAML::Exception&) {
    Fail(node, fmt::format("{} must be a number or a list of numbers", where));
  }
  return values;
}

Position ReadPosition(const YAML::Node& node, std::string_view where) {
  const std::vector<double> xy = ReadDoubles(node, where);
  if (!node.IsSequence() || xy.size() != 2) {
    Fail(node, fmt::format("{} must be [x, y]", where));
  }
  return {xy[0], xy[1]};
}

void ReadDevice(const YAML::Node& map, DeviceParams& d,
                std::string_view where) {
  if (map["position"]) {
    d.position = ReadPosition(map["position"],
                              fmt::format("{}.position", where));
  }
  d.kappa = ReadDouble(map, "kappa", d.kappa, where);
  d.cycles_per_mb = ReadDouble(map, "cycles_per_mb", d.cycles_per_mb, where);
  d.f_max = ReadDouble(map, "f_max", d.f_max, where);
  d.workload = ReadDouble(map, "workload", d.workload, where);
}

ScenarioSpec FromNode(const YAML::Node& root) {
  if (!root.IsMap()) Fail(root, "scenario must be a mapping of sections");
  RejectUnknown(root, kSections, "scenario");
  ScenarioSpec spec;
  Scenario& s = spec.scenario;
  s.du = DefaultDemandDevice();

  if (const YAML::Node sys = root["system"]) {
    RejectUnknown(sys, kSystemKeys, "system");
    SystemParams& p = s.system;
    p.slot_length = ReadDouble(sys, "slot_length", p.slot_length, "system");
    p.bandwidth = ReadDouble(sys, "bandwidth", p.bandwidth, "system");
    p.noise_power = ReadDouble(sys, "noise_power", p.noise_power, "system");
    p.max_tx_power = ReadDouble(sys, "max_tx_power", p.max_tx_power, "system");
    p.pathloss_constant =
        ReadDouble(sys, "pathloss_constant", p.pathloss_constant, "system");
    p.pathloss_exponent =
        ReadDouble(sys, "pathloss_exponent", p.pathloss_exponent, "system");
    p.substitutability = ReadDouble(sys, "v", p.substitutability, "system");
    const std::string baseline =
        ReadString(sys, "su_cost_baseline", "own", "system");
    if (baseline == "own") {
      p.su_cost_baseline = CostBaseline::kOwnTask;
    } else if (baseline == "du") {
      p.su_cost_baseline = CostBaseline::kDemandTask;
    } else {
      Fail(sys["su_cost_baseline"], "system.su_cost_baseline must be own|du");
    }
  }

  if (const YAML::Node du = root["du"]) {
    RejectUnknown(du, kDuKeys, "du");
    ReadDevice(du, s.du, "du");
  }

  const YAML::Node sus = root["su"];
  if (sus) {
    if (!sus.IsSequence()) Fail(sus, "su must be a list of devices");
    for (std::size_t i = 0; i < sus.size(); ++i) {
      const YAML::Node item = sus[i];
      const std::string where = fmt::format("su[{}]", i);
      RejectUnknown(item, kSuKeys, where);
      SupplyDevice su{static_cast<int>(i) + 1, DefaultSupplyDevice()};
      su.id = ReadInt(item, "id", su.id, where);
      if (!item["position"]) Fail(item, where + ".position is required");
      ReadDevice(item, su.params, where);
      su.params.p_rec = ReadDouble(item, "p_rec", su.params.p_rec, where);
      s.sus.push_back(su);
    }
  }

  if (const YAML::Node solver = root["solver"]) {
    RejectUnknown(solver, kSolverKeys, "solver");
    SolverConfig& c = spec.solver;
    const std::string mode = ReadString(solver, "mode", "cig", "solver");
    if (mode == "cig") {
      c.mode = SolverMode::kCig;
    } else if (mode == "icig") {
      c.mode = SolverMode::kIcig;
    } else {
      Fail(solver["mode"], "solver.mode must be cig|icig");
    }
    const std::string order =
        ReadString(solver, "update_order", "jacobi", "solver");
    if (order == "jacobi") {
      c.order = UpdateOrder::kJacobi;
    } else if (order == "gauss_seidel") {
      c.order = UpdateOrder::kGaussSeidel;
    } else {
      Fail(solver["update_order"],
           "solver.update_order must be jacobi|gauss_seidel");
    }
    if (const YAML::Node init = solver["initial_prices"]) {
      if (init.IsScalar() && init.as<std::string>() == "midpoint") {
        c.initial_prices.clear();
      } else {
        c.initial_prices = ReadDoubles(init, "solver.initial_prices");
      }
    }
    c.epsilon = ReadDouble(solver, "epsilon", c.epsilon, "solver");
    c.max_iterations =
        ReadInt(solver, "max_iterations", c.max_iterations, "solver");
    c.probe_delta = ReadDouble(solver, "probe_delta", c.probe_delta, "solver");
    if (const YAML::Node rates = solver["learning_rates"]) {
      c.learning_rates = ReadDoubles(rates, "solver.learning_rates");
    }
  }

  if (const YAML::Node exp = root["experiment"]) {
    RejectUnknown(exp, kExperimentKeys, "experiment");
    ExperimentSpec& e = spec.experiment;
    const std::string mode = ReadString(exp, "mode", "solve", "experiment");
    if (mode == "solve") {
      e.mode = ExperimentMode::kSolve;
    } else if (mode == "sweep") {
      e.mode = ExperimentMode::kSweep;
    } else {
      Fail(exp["mode"], "experiment.mode must be solve|sweep");
    }
    e.variable = ReadString(exp, "variable", "", "experiment");
    e.from = ReadDouble(exp, "from", 0.0, "experiment");
    e.to = ReadDouble(exp, "to", 0.0, "experiment");
    e.step = ReadDouble(exp, "step", 0.0, "experiment");
  }
  return spec;
}

std::string Num(double x) { return fmt::format("{}", x); }

void EmitDevice(YAML::Emitter& out, const DeviceParams& d) {
  out << YAML::Key << "position" << YAML::Value << YAML::Flow
      << YAML::BeginSeq << Num(d.position.x) << Num(d.position.y)
      << YAML::EndSeq;
  out << YAML::Key << "kappa" << YAML::Value << Num(d.kappa);
  out << YAML::Key << "cycles_per_mb" << YAML::Value << Num(d.cycles_per_mb);
  out << YAML::Key << "f_max" << YAML::Value << Num(d.f_max);
}

YAML::Node ToNode(const ScenarioSpec& spec) {
  return YAML::Load(SerializeScenario(spec));
}

// Splits "a.b.c" on dots.
std::vector<std::string> SplitPath(std::string_view key) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    parts.emplace_back(key.substr(start, dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

}  // namespace

std::vector<double> ExperimentSpec::Points() const {
  std::vector<double> points;
  if (mode != ExperimentMode::kSweep) return points;
  const double span = (to - from) / step;
  const auto count = static_cast<long long>(std::floor(span + 1e-9)) + 1;
  for (long long k = 0; k < count; ++k) {
    // Snap to 12 significant digits so 3 * 0.05 prints as 0.15.
    const double raw = from + static_cast<double>(k) * step;
    points.push_back(std::stod(fmt::format("{:.12g}", raw)));
  }
  return points;
}

void ValidateScenarioSpec(const ScenarioSpec& spec) {
  ValidateScenario(spec.scenario);
  ValidateSolverConfig(spec.solver);
  const ExperimentSpec& e = spec.experiment;
  if (e.mode != ExperimentMode::kSweep) return;
  if (e.variable.empty()) {
    throw Error(ErrorCategory::kValidation, "experiment.variable is required");
  }
  if (!(e.step > 0) || !(e.to >= e.from)) {
    throw Error(ErrorCategory::kValidation,
                "experiment sweep needs step > 0 and to >= from");
  }
  if ((e.to - e.from) / e.step > 1e6) {
    throw Error(ErrorCategory::kValidation, "experiment sweep too long");
  }
  for (double point : e.Points()) {
    ScenarioSpec probe = spec;
    probe.experiment.mode = ExperimentMode::kSolve;
    try {
      ApplyOverride(probe, e.variable, Num(point));
    } catch (const Error& err) {
      throw Error(err.category(),
                  fmt::format("sweep point {}={}: {}", e.variable, point,
                              err.what()));
    }
  }
}

ScenarioSpec ParseScenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCategory::kParse,
                fmt::format("line {}, column {}: {}", e.mark.line + 1,
                            e.mark.column + 1, e.msg));
  }
  if (!root || root.IsNull()) {
    throw Error(ErrorCategory::kParse, "empty scenario");
  }
  ScenarioSpec spec = FromNode(root);
  ValidateScenarioSpec(spec);
  return spec;
}

ScenarioSpec LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCategory::kIo,
                fmt::format("cannot read scenario {}", path.string()));
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return ParseScenario(text.str());
  } catch (const Error& e) {
    throw Error(e.category(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string SerializeScenario(const ScenarioSpec& spec) {
  const Scenario& s = spec.scenario;
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "slot_length" << YAML::Value << Num(s.system.slot_length);
  out << YAML::Key << "bandwidth" << YAML::Value << Num(s.system.bandwidth);
  out << YAML::Key << "noise_power" << YAML::Value << Num(s.system.noise_power);
  out << YAML::Key << "max_tx_power" << YAML::Value
      << Num(s.system.max_tx_power);
  out << YAML::Key << "pathloss_constant" << YAML::Value
      << Num(s.system.pathloss_constant);
  out << YAML::Key << "pathloss_exponent" << YAML::Value
      << Num(s.system.pathloss_exponent);
  out << YAML::Key << "v" << YAML::Value << Num(s.system.substitutability);
  out << YAML::Key << "su_cost_baseline" << YAML::Value
      << (s.system.su_cost_baseline == CostBaseline::kOwnTask ? "own" : "du");
  out << YAML::EndMap;

  out << YAML::Key << "du" << YAML::Value << YAML::BeginMap;
  EmitDevice(out, s.du);
  out << YAML::Key << "workload" << YAML::Value << Num(s.du.workload);
  out << YAML::EndMap;

  out << YAML::Key << "su" << YAML::Value << YAML::BeginSeq;
  for (const auto& su : s.sus) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << su.id;
    EmitDevice(out, su.params);
    out << YAML::Key << "p_rec" << YAML::Value << Num(su.params.p_rec);
    out << YAML::Key << "workload" << YAML::Value << Num(su.params.workload);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  const SolverConfig& c = spec.solver;
  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << std::string(ModeName(c.mode));
  out << YAML::Key << "update_order" << YAML::Value
      << (c.order == UpdateOrder::kJacobi ? "jacobi" : "gauss_seidel");
  out << YAML::Key << "initial_prices" << YAML::Value;
  if (c.initial_prices.empty()) {
    out << "midpoint";
  } else {
    out << YAML::Flow << YAML::BeginSeq;
    for (double q : c.initial_prices) out << Num(q);
    out << YAML::EndSeq;
  }
  out << YAML::Key << "epsilon" << YAML::Value << Num(c.epsilon);
  out << YAML::Key << "max_iterations" << YAML::Value << c.max_iterations;
  out << YAML::Key << "probe_delta" << YAML::Value << Num(c.probe_delta);
  out << YAML::Key << "learning_rates" << YAML::Value << YAML::Flow
      << YAML::BeginSeq;
  for (double a : c.learning_rates) out << Num(a);
  out << YAML::EndSeq;
  out << YAML::EndMap;

  const ExperimentSpec& e = spec.experiment;
  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value
      << (e.mode == ExperimentMode::kSolve ? "solve" : "sweep");
  if (e.mode == ExperimentMode::kSweep) {
    out << YAML::Key << "variable" << YAML::Value << e.variable;
    out << YAML::Key << "from" << YAML::Value << Num(e.from);
    out << YAML::Key << "to" << YAML::Value << Num(e.to);
    out << YAML::Key << "step" << YAML::Value << Num(e.step);
  }
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void ApplyOverride(ScenarioSpec& spec, std::string_view key,
                   std::string_view value) {
  std::vector<std::string> path = SplitPath(key);
  YAML::Node root = ToNode(spec);
  if (path.size() == 1) {
    const std::string bare = path.front();
    for (const char* section : {"system", "solver", "experiment", "du"}) {
      const auto& keys = std::string_view(section) == "system"   ? kSystemKeys
                         : std::string_view(section) == "solver" ? kSolverKeys
                         : std::string_view(section) == "du"     ? kDuKeys
                                                                 : kExperimentKeys;
      if (keys.count(bare)) {
        path.insert(path.begin(), section);
        break;
      }
    }
  }
  auto unknown = [&] {
    return Error(ErrorCategory::kValidation,
                 fmt::format("unknown override key '{}'", key));
  };

  YAML::Node parsed;
  try {
    parsed = YAML::Load(std::string(value));
  } catch (const YAML::Exception&) {
    throw Error(ErrorCategory::kParse,
                fmt::format("cannot parse override value '{}'", value));
  }

  if (path.size() == 2 && path[0] != "su") {
    const std::set<std::string>* keys = nullptr;
    if (path[0] == "system") keys = &kSystemKeys;
    if (path[0] == "du") keys = &kDuKeys;
    if (path[0] == "solver") keys = &kSolverKeys;
    if (path[0] == "experiment") keys = &kExperimentKeys;
    if (!keys || !keys->count(path[1])) throw unknown();
    root[path[0]][path[1]] = parsed;
  } else if (path.size() == 3 && path[0] == "su") {
    if (!kSuKeys.count(path[2]) || path[2] == "id") throw unknown();
    int id = 0;
    try {
      id = std::stoi(path[1]);
    } catch (const std::exception&) {
      throw unknown();
    }
    bool found = false;
    for (YAML::Node su : root["su"]) {
      if (su["id"].as<int>() == id) {
        su[path[2]] = parsed;
        found = true;
      }
    }
    if (!found) {
      throw Error(ErrorCategory::kValidation,
                  fmt::format("override '{}': no su with id {}", key, id));
    }
  } else {
    throw unknown();
  }

  YAML::Emitter out;
  out << root;
  spec = ParseScenario(out.c_str());
}

void ApplyOverride(ScenarioSpec& spec, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorCategory::kValidation,
                fmt::format("override '{}' is not key=value", assignment));
  }
  ApplyOverride(spec, assignment.substr(0, eq), assignment.substr(eq + 1));
}

}  // namespace coopgame::harness

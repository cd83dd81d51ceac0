// Copyright 2026 The otrobust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <filesystem>
#include <set>
#include <string>

#include <json.hpp>

#include "otrobust/error.hpp"
#include "otrobust/harness.hpp"
#include "otrobust/io.hpp"
#include "otrobust/units.hpp"

namespace otrobust {
namespace {

using nlohmann::json;

std::vector<double> number_or_list(const json& j, const char* key) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) return j.get<std::vector<double>>();
  throw InvalidInput(std::string("config: '") + key + "' must be a number or a list");
}

std::string resolve(const std::string& base, const std::string& p) {
  if (base.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (std::filesystem::path(base) / p).string();
}

double angle_factor(const std::string& unit, const char* what) {
  if (unit == "deg") return kDegToRad;
  if (unit == "rad") return 1.0;
  throw InvalidInput(std::string("config: ") + what + " must be 'deg' or 'rad'");
}

double rate_factor(const std::string& unit) {
  if (unit == "deg/s") return kDegToRad;
  if (unit == "rad/s") return 1.0;
  throw InvalidInput("config: x_pert rate_unit must be 'deg/s' or 'rad/s'");
}

}  // namespace

const char* scenario_kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kIc: return "ic";
    case ScenarioKind::kParam: return "param";
    case ScenarioKind::kDisturbance: return "disturbance";
  }
  return "?";
}

const char* controller_name(ControllerKind c) {
  return c == ControllerKind::kLqr ? "lqr" : "gslqr";
}

ControllerKind controller_from_name(std::string_view name) {
  if (name == "lqr") return ControllerKind::kLqr;
  if (name == "gslqr") return ControllerKind::kGsLqr;
  throw InvalidInput("unknown controller '" + std::string(name) + "' (lqr|gslqr)");
}

void ScenarioConfig::validate() const {
  if (!(tf > 0.0) || !(dt > 0.0)) throw InvalidInput("config: tf and dt must be positive");
  if (samples == 0) throw InvalidInput("config: samples must be positive");
  if (emit_every < 1) throw InvalidInput("config: emit_every must be >= 1");
  if (controllers.empty()) throw InvalidInput("config: no controller selected");
  const double r = tf / dt;
  if (std::abs(r - std::round(r)) > 1e-6 * std::max(1.0, r))
    throw InvalidInput("config: tf must be an integer multiple of dt");
  for (int k = 0; k < 4; ++k)
    if (!(ic_lower[k] <= ic_upper[k])) throw InvalidInput("config: IC box lower > upper");
  if (kind == ScenarioKind::kParam) {
    if (delta_percent.empty()) throw InvalidInput("config: param_delta_percent is empty");
    for (double d : delta_percent)
      if (!(d >= 0.0 && d < 100.0)) throw InvalidInput("config: Delta must be in [0, 100)");
  }
  if (kind == ScenarioKind::kDisturbance && omegas.empty())
    throw InvalidInput("config: omega list is empty");
  if (histogram_bins < 1) throw InvalidInput("config: histogram_bins must be >= 1");
  if (!(memory_budget > 0.0)) throw InvalidInput("config: memory_budget must be positive");
}

ScenarioConfig parse_scenario_config(std::string_view text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
  static const std::set<std::string> known = {
      "name",          "kind",         "controller",      "controllers",   "samples",
      "tf",            "dt",           "emit_every",      "seed",          "sampler",
      "halton_skip",   "ic_box_deg",   "ic_density",      "x_pert",        "param_delta_percent",
      "omega",         "amplitude_deg", "strict_rk4",     "mass_policy",   "gslqr_trim",
      "memory_budget", "histogram_bins", "output_dir",    "snapshot_format", "tables",
      "params",        "schedule",     "trim",            "full_scale"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw InvalidInput("config: unknown field '" + key + "'");

  ScenarioConfig c;
  try {
    c.name = j.value("name", c.name);
    const std::string kind = j.value("kind", std::string("ic"));
    if (kind == "ic") c.kind = ScenarioKind::kIc;
    else if (kind == "param") c.kind = ScenarioKind::kParam;
    else if (kind == "disturbance") c.kind = ScenarioKind::kDisturbance;
    else throw InvalidInput("config: kind must be ic, param or disturbance");

    if (j.contains("controllers")) {
      c.controllers.clear();
      for (const auto& s : j["controllers"]) c.controllers.push_back(controller_from_name(s.get<std::string>()));
    } else if (j.contains("controller")) {
      const std::string s = j["controller"].get<std::string>();
      if (s == "both") c.controllers = {ControllerKind::kLqr, ControllerKind::kGsLqr};
      else c.controllers = {controller_from_name(s)};
    }
    if (j.value("full_scale", false)) c.samples = 2000;
    if (j.contains("samples")) {
      const long long n = j["samples"].get<long long>();
      if (n <= 0) throw InvalidInput("config: samples must be positive");
      c.samples = static_cast<std::size_t>(n);
    }
    c.tf = j.value("tf", c.tf);
    c.dt = j.value("dt", c.dt);
    c.emit_every = j.value("emit_every", c.emit_every);
    c.seed = j.value("seed", c.seed);
    const std::string sampler = j.value("sampler", std::string("halton"));
    if (sampler == "halton") c.sampler = SamplerKind::kHalton;
    else if (sampler == "mcmc") c.sampler = SamplerKind::kMcmc;
    else throw InvalidInput("config: sampler must be halton or mcmc");
    c.halton_skip = j.value("halton_skip", c.halton_skip);

    if (j.contains("ic_box_deg")) {
      const json& b = j["ic_box_deg"];
      const char* names[4] = {"theta", "V", "alpha", "q"};
      for (int k = 0; k < 4; ++k) {
        if (!b.contains(names[k])) continue;
        const auto v = b[names[k]].get<std::vector<double>>();
        if (v.size() != 2) throw InvalidInput("config: ic_box_deg entries are [lo, hi]");
        c.ic_lower[k] = v[0];
        c.ic_upper[k] = v[1];
      }
    }
    const std::string dens = j.value("ic_density", std::string("uniform"));
    if (dens == "uniform") c.ic_density = IcDensity::kUniform;
    else if (dens == "gaussian") c.ic_density = IcDensity::kGaussian;
    else throw InvalidInput("config: ic_density must be uniform or gaussian");

    if (j.contains("x_pert")) {
      const json& xp = j["x_pert"];
      const double af = angle_factor(xp.value("angle_unit", std::string("deg")), "x_pert angle_unit");
      const double rf = rate_factor(xp.value("rate_unit", std::string("rad/s")));
      c.x_pert = Vec4(af * xp.value("theta", 0.0), xp.value("V", 0.0), af * xp.value("alpha", 0.0),
                      rf * xp.value("q", 0.0));
    }
    if (j.contains("param_delta_percent"))
      c.delta_percent = number_or_list(j["param_delta_percent"], "param_delta_percent");
    if (j.contains("omega")) c.omegas = number_or_list(j["omega"], "omega");
    c.disturbance_amplitude_deg = j.value("amplitude_deg", c.disturbance_amplitude_deg);
    c.strict_rk4 = j.value("strict_rk4", c.strict_rk4);
    const std::string mp = j.value("mass_policy", std::string("uniform"));
    if (mp == "uniform") c.mass_policy = MassPolicy::kUniform;
    else if (mp == "density") c.mass_policy = MassPolicy::kDensity;
    else throw InvalidInput("config: mass_policy must be uniform or density");
    c.gs_mode = gs_trim_mode_from_name(j.value("gslqr_trim", std::string("nominal")));
    c.memory_budget = j.value("memory_budget", c.memory_budget);
    c.histogram_bins = j.value("histogram_bins", c.histogram_bins);
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
    const std::string sf = j.value("snapshot_format", std::string("long"));
    if (sf == "long") c.snapshot_format = SnapshotFormat::kLong;
    else if (sf == "per_time") c.snapshot_format = SnapshotFormat::kPerTime;
    else if (sf == "none") c.snapshot_format = SnapshotFormat::kNone;
    else throw InvalidInput("config: snapshot_format must be long, per_time or none");
    if (j.contains("tables")) c.tables_path = resolve(base_dir, j["tables"].get<std::string>());
    if (j.contains("params")) c.params_path = resolve(base_dir, j["params"].get<std::string>());
    if (j.contains("schedule")) c.schedule_path = resolve(base_dir, j["schedule"].get<std::string>());
    if (j.contains("trim")) {
      c.trim_V = j["trim"].value("V", c.trim_V);
      c.trim_alpha_deg = j["trim"].value("alpha_deg", c.trim_alpha_deg);
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  const std::string base = std::filesystem::path(path).parent_path().string();
  return parse_scenario_config(read_text_file(path), base);
}

std::string scenario_config_to_json(const ScenarioConfig& c, int indent) {
  json j;
  j["name"] = c.name;
  j["kind"] = scenario_kind_name(c.kind);
  json ctrl = json::array();
  for (auto k : c.controllers) ctrl.push_back(controller_name(k));
  j["controllers"] = ctrl;
  j["samples"] = c.samples;
  j["tf"] = c.tf;
  j["dt"] = c.dt;
  j["emit_every"] = c.emit_every;
  j["seed"] = c.seed;
  j["sampler"] = c.sampler == SamplerKind::kHalton ? "halton" : "mcmc";
  j["halton_skip"] = c.halton_skip;
  j["ic_box_deg"] = {{"theta", {c.ic_lower[0], c.ic_upper[0]}},
                     {"V", {c.ic_lower[1], c.ic_upper[1]}},
                     {"alpha", {c.ic_lower[2], c.ic_upper[2]}},
                     {"q", {c.ic_lower[3], c.ic_upper[3]}}};
  j["ic_density"] = c.ic_density == IcDensity::kUniform ? "uniform" : "gaussian";
  j["x_pert"] = {{"theta", rad2deg(c.x_pert(0))}, {"V", c.x_pert(1)},
                 {"alpha", rad2deg(c.x_pert(2))}, {"q", c.x_pert(3)},
                 {"angle_unit", "deg"}, {"rate_unit", "rad/s"}};
  j["param_delta_percent"] = c.delta_percent;
  j["omega"] = c.omegas;
  j["amplitude_deg"] = c.disturbance_amplitude_deg;
  j["strict_rk4"] = c.strict_rk4;
  j["mass_policy"] = c.mass_policy == MassPolicy::kUniform ? "uniform" : "density";
  j["gslqr_trim"] = gs_trim_mode_name(c.gs_mode);
  j["memory_budget"] = c.memory_budget;
  j["histogram_bins"] = c.histogram_bins;
  j["output_dir"] = c.output_dir;
  j["snapshot_format"] = c.snapshot_format == SnapshotFormat::kLong      ? "long"
                         : c.snapshot_format == SnapshotFormat::kPerTime ? "per_time"
                                                                         : "none";
  if (c.tables_path) j["tables"] = *c.tables_path;
  if (c.params_path) j["params"] = *c.params_path;
  if (c.schedule_path) j["schedule"] = *c.schedule_path;
  j["trim"] = {{"V", c.trim_V}, {"alpha_deg", c.trim_alpha_deg}};
  return j.dump(indent);
}

}  // namespace otrobust

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

// Scenario orchestration: initial-condition, parametric and disturbance
// experiments on the F-16 closed loop, plus reporting.

#ifndef OTROBUST_HARNESS_HPP_
#define OTROBUST_HARNESS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "otrobust/controller.hpp"
#include "otrobust/f16_model.hpp"
#include "otrobust/liouville.hpp"
#include "otrobust/transport.hpp"
#include "otrobust/trim.hpp"

namespace otrobust {

enum class ScenarioKind { kIc, kParam, kDisturbance };
enum class ControllerKind { kLqr, kGsLqr };
// How W weights the samples: equal transport mass, or mass proportional to
// the tracked density value at each time.
enum class MassPolicy { kUniform, kDensity };
enum class SamplerKind { kHalton, kMcmc };
enum class SnapshotFormat { kNone, kPerTime, kLong };
// Initial density over the IC box.
enum class IcDensity { kUniform, kGaussian };

const char* scenario_kind_name(ScenarioKind k);
const char* controller_name(ControllerKind c);
ControllerKind controller_from_name(std::string_view name);

struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioKind kind = ScenarioKind::kIc;
  std::vector<ControllerKind> controllers = {ControllerKind::kLqr, ControllerKind::kGsLqr};
  std::size_t samples = 200;
  double tf = 20.0;
  double dt = 0.01;
  int emit_every = 100;
  std::uint64_t seed = 1;
  SamplerKind sampler = SamplerKind::kHalton;
  std::size_t halton_skip = 20;

  // Offsets from trim: theta deg, V ft/s, alpha deg, q deg/s.
  std::array<double, 4> ic_lower = {-35.0, -65.0, -20.0, -70.0};
  std::array<double, 4> ic_upper = {35.0, 65.0, 50.0, 70.0};
  // kGaussian: truncated to the box, centred on trim, sigma = box width / 4;
  // always drawn by MCMC.
  IcDensity ic_density = IcDensity::kUniform;

  // Deterministic offset for the parametric case, stored in rad / rad/s.
  Vec4 x_pert = Vec4::Zero();
  std::vector<double> delta_percent = {0.5, 2.5, 5.0, 7.5, 15.0};

  std::vector<double> omegas = {0.0, 2.0, 100.0};
  double disturbance_amplitude_deg = 6.5;

  bool strict_rk4 = false;
  MassPolicy mass_policy = MassPolicy::kUniform;
  GsTrimMode gs_mode = GsTrimMode::kNominal;
  double memory_budget = 2.5e7;
  int histogram_bins = 20;

  std::string output_dir;
  SnapshotFormat snapshot_format = SnapshotFormat::kLong;

  std::optional<std::string> tables_path;
  std::optional<std::string> params_path;
  std::optional<std::string> schedule_path;
  double trim_V = 407.8942;
  double trim_alpha_deg = 6.1650;

  void validate() const;
};

// Parsing resolves relative file paths against base_dir.
ScenarioConfig parse_scenario_config(std::string_view json_text,
                                     const std::string& base_dir = "");
ScenarioConfig load_scenario_config(const std::string& path);
std::string scenario_config_to_json(const ScenarioConfig& cfg, int indent = 2);

// Everything a run needs from the plant side.
struct Plant {
  AircraftParams params;
  AeroTables tables;
  TrimPoint trim;
  LinearModel model;
  Mat24 K = Mat24::Zero();
  std::optional<GainSchedule> schedule;
};

Plant build_plant(const ScenarioConfig& cfg, bool with_schedule);

ControlLaw make_control_law(const Plant& plant, ControllerKind controller);
VectorField make_vector_field(const Plant& plant, ControllerKind controller,
                              const Disturbance& w);

// Degree scaling (theta, alpha, q) used for every reported distance.
std::vector<double> degree_state_scale();

// Initial cloud for one scenario level (Delta percent for param, ignored
// otherwise).
EnsembleSnapshot initial_cloud(const ScenarioConfig& cfg, const Plant& plant, double level);

std::vector<EnsembleSnapshot> propagate_level(const ScenarioConfig& cfg, const Plant& plant,
                                              ControllerKind controller, double level,
                                              PropagationCounters* counters = nullptr);

// Masses used for W at one time under the configured policy.
EnsembleSnapshot apply_mass_policy(const EnsembleSnapshot& snap, MassPolicy policy);

struct Histogram {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> mass;
};

// Mass-weighted histogram of one coordinate of [x, p].
Histogram marginal_histogram(const EnsembleSnapshot& snapshot, int axis, int bins);

struct Series {
  ControllerKind controller = ControllerKind::kLqr;
  double level = 0.0;  // Delta percent or Omega; 0 for the IC scenario
  std::vector<double> t;
  std::vector<double> W;
  std::size_t diverged = 0;
  std::vector<LikelihoodExtremes> extremes;
  // Histograms at whole-second times: [time][axis].
  std::vector<double> histogram_t;
  std::vector<std::vector<Histogram>> histograms;
};

struct DifferenceSeries {
  double level = 0.0;
  std::vector<double> t;
  std::vector<double> dW;  // W_LQR - W_gsLQR
};

struct RunReport {
  ScenarioConfig config;
  TrimPoint trim;
  std::vector<Series> series;
  std::vector<DifferenceSeries> differences;
  std::string content_hash;
  // Kept in memory for callers; not part of report.json.
  std::vector<std::vector<EnsembleSnapshot>> snapshots;
};

RunReport run_ic_scenario(const ScenarioConfig& cfg, const Plant& plant);
RunReport run_param_scenario(const ScenarioConfig& cfg, const Plant& plant);
RunReport run_disturbance_scenario(const ScenarioConfig& cfg, const Plant& plant);
RunReport run_scenario(const ScenarioConfig& cfg);

std::string report_to_json(const RunReport& report, int indent = 2);
// W.csv, report.json and snapshots/ under dir.
void write_report(const RunReport& report, const std::string& dir);
std::string w_csv(const RunReport& report);

struct FreqResponse {
  std::vector<double> omega;
  std::vector<double> gain;     // sigma_max, linear
  std::vector<double> gain_db;
  double peak_omega = 0.0;
  double peak_db = 0.0;
};

// 200 log-spaced points over [1e-2, 1e3] rad/s by default.
std::vector<double> log_omega_grid(std::size_t n = 200, double lo = 1e-2, double hi = 1e3);

// sigma_max of S (j w I - A_cl)^-1 Bw; output_scale S defaults to identity.
FreqResponse freq_response(const Eigen::MatrixXd& A_cl, const Eigen::VectorXd& Bw,
                           const std::vector<double>& omega,
                           const std::vector<double>& output_scale = {});
// LQR closed loop of the plant, output in degree units.
FreqResponse freq_response(const Plant& plant, const std::vector<double>& omega);

struct McBundle {
  std::vector<double> t;
  // [time][sample] full state and deviation from trim.
  std::vector<std::vector<Vec4>> x;
  std::vector<std::vector<Vec4>> dx;
  std::vector<Vec4> mean;  // sample mean of x per time
  std::vector<std::array<Vec4, 3>> quantiles;  // 5%, 50%, 95% of dx
  std::size_t diverged = 0;
};

// Plain ensemble with the same initial cloud and stepping as propagate_level.
McBundle mc_compare(const ScenarioConfig& cfg, const Plant& plant, ControllerKind controller,
                    double level);

}  // namespace otrobust

#endif  // OTROBUST_HARNESS_HPP_

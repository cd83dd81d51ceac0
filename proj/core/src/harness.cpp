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


#include "otrobust/harness.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>

#include <Eigen/LU>
#include <json.hpp>

#include "otrobust/error.hpp"
#include "otrobust/io.hpp"
#include "otrobust/sampling.hpp"
#include "otrobust/units.hpp"

namespace otrobust {
namespace {

using nlohmann::json;

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fmt_17g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vec4 box_offset_to_internal(const std::array<double, 4>& v) {
  return {deg2rad(v[0]), v[1], deg2rad(v[2]), deg2rad(v[3])};
}

std::string scenario_id(const ScenarioConfig& cfg, double level) {
  return cfg.name + ":" + scenario_kind_name(cfg.kind) + ":" + fmt_g(level);
}

bool needs_schedule(const ScenarioConfig& cfg) {
  return std::find(cfg.controllers.begin(), cfg.controllers.end(), ControllerKind::kGsLqr) !=
         cfg.controllers.end();
}

const char* level_column(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kParam: return "delta_percent";
    case ScenarioKind::kDisturbance: return "omega";
    default: return "level";
  }
}

std::vector<double> scenario_levels(const ScenarioConfig& cfg) {
  switch (cfg.kind) {
    case ScenarioKind::kParam: return cfg.delta_percent;
    case ScenarioKind::kDisturbance: return cfg.omegas;
    default: return {0.0};
  }
}

double type7_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// IC and disturbance clouds: x_trim + box, zero-width axes held at trim.
EnsembleSnapshot state_box_cloud(const ScenarioConfig& cfg, const Plant& plant) {
  const Vec4 xt = plant.trim.x_trim.vec();
  const Vec4 lo = xt + box_offset_to_internal(cfg.ic_lower);
  const Vec4 hi = xt + box_offset_to_internal(cfg.ic_upper);
  std::vector<int> free_axes;
  for (int k = 0; k < 4; ++k)
    if (hi(k) > lo(k)) free_axes.push_back(k);

  EnsembleSnapshot snap;
  const std::size_t n = cfg.samples;
  if (free_axes.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      WeightedSample w;
      w.x = lo;
      w.p = Eigen::VectorXd();
      w.phi = 1.0;
      w.log_phi = 0.0;
      w.gamma = 1.0 / static_cast<double>(n);
      snap.samples.push_back(std::move(w));
    }
    return snap;
  }

  const Eigen::Index d = static_cast<Eigen::Index>(free_axes.size());
  Eigen::VectorXd blo(d), bhi(d), centre(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    blo(k) = lo(free_axes[k]);
    bhi(k) = hi(free_axes[k]);
    centre(k) = std::clamp(xt(free_axes[k]), blo(k), bhi(k));
  }
  const BoxDomain box(blo, bhi);
  InitialPdf pdf;
  if (cfg.ic_density == IcDensity::kGaussian)
    pdf = InitialPdf::truncated_gaussian(centre, 0.25 * (bhi - blo), box);
  else
    pdf = InitialPdf::uniform(box);

  std::vector<Eigen::VectorXd> pts;
  if (cfg.sampler == SamplerKind::kHalton && cfg.ic_density == IcDensity::kUniform) {
    pts = halton(n, box, cfg.halton_skip);
  } else {
    McmcOptions mo;
    mo.start = centre;
    pts = mcmc_sample(pdf, n, cfg.seed, mo).samples;
  }
  auto reduced = weighted_cloud(pts, pdf);
  for (auto& w : reduced) {
    Vec4 x = lo;
    for (Eigen::Index k = 0; k < d; ++k) x(free_axes[k]) = w.x(k);
    w.x = x;
    w.p = Eigen::VectorXd();
    snap.samples.push_back(std::move(w));
  }
  return snap;
}

EnsembleSnapshot param_cloud(const ScenarioConfig& cfg, const Plant& plant, double delta) {
  const Vec4 x0 = plant.trim.x_trim.vec() + cfg.x_pert;
  const Eigen::VectorXd pn = nominal_parameters(plant.params);
  EnsembleSnapshot snap;
  if (delta == 0.0) {
    WeightedSample w;
    w.x = x0;
    w.p = pn;
    w.phi = 1.0;
    w.log_phi = 0.0;
    w.gamma = 1.0;
    snap.samples.push_back(std::move(w));
    return snap;
  }
  const double f = delta / 100.0;
  const BoxDomain box(pn * (1.0 - f), pn * (1.0 + f));
  const InitialPdf pdf = InitialPdf::uniform(box);
  std::vector<Eigen::VectorXd> pts;
  if (cfg.sampler == SamplerKind::kHalton) {
    pts = halton(cfg.samples, box, cfg.halton_skip);
  } else {
    McmcOptions mo;
    mo.start = pn;
    pts = mcmc_sample(pdf, cfg.samples, cfg.seed, mo).samples;
  }
  const double gamma = 1.0 / static_cast<double>(pts.size());
  for (const auto& p : pts) {
    WeightedSample w;
    w.x = x0;
    w.p = p;
    w.phi = pdf(p);
    w.log_phi = std::log(w.phi);
    w.gamma = gamma;
    snap.samples.push_back(std::move(w));
  }
  return snap;
}

Disturbance level_disturbance(const ScenarioConfig& cfg, double level) {
  if (cfg.kind == ScenarioKind::kDisturbance)
    return sine_disturbance(cfg.disturbance_amplitude_deg, level);
  return no_disturbance();
}

double series_distance(const ScenarioConfig& cfg, const Plant& plant,
                       const EnsembleSnapshot& snap) {
  const EnsembleSnapshot s = apply_mass_policy(snap, cfg.mass_policy);
  const Eigen::VectorXd xt = plant.trim.x_trim.vec();
  if (cfg.kind == ScenarioKind::kParam) {
    LpOptions o;
    o.memory_budget = cfg.memory_budget;
    return extended_wasserstein(s, xt, degree_state_scale(), o).W;
  }
  return wasserstein_dirac(s, xt, degree_state_scale());
}

Series make_series(const ScenarioConfig& cfg, const Plant& plant, ControllerKind c,
                   double level, const std::vector<EnsembleSnapshot>& snaps) {
  Series s;
  s.controller = c;
  s.level = level;
  for (const auto& snap : snaps) {
    s.t.push_back(snap.t);
    s.W.push_back(series_distance(cfg, plant, snap));
    if (std::abs(snap.t - std::round(snap.t)) < 1e-9) {
      s.histogram_t.push_back(snap.t);
      std::vector<Histogram> axes;
      const int dim = static_cast<int>(snap.samples.front().extended().size());
      for (int a = 0; a < dim; ++a) axes.push_back(marginal_histogram(snap, a, cfg.histogram_bins));
      s.histograms.push_back(std::move(axes));
    }
  }
  for (const auto& w : snaps.back().samples) s.diverged += w.diverged ? 1 : 0;
  s.extremes = likelihood_extremes(snaps);
  return s;
}

RunReport run_levels(const ScenarioConfig& cfg, const Plant& plant) {
  RunReport rep;
  rep.config = cfg;
  rep.trim = plant.trim;
  for (double level : scenario_levels(cfg)) {
    const Series* lqr = nullptr;
    const Series* gs = nullptr;
    for (auto c : cfg.controllers) {
      auto snaps = propagate_level(cfg, plant, c, level);
      rep.series.push_back(make_series(cfg, plant, c, level, snaps));
      rep.snapshots.push_back(std::move(snaps));
    }
    for (const auto& s : rep.series) {
      if (s.level != level) continue;
      (s.controller == ControllerKind::kLqr ? lqr : gs) = &s;
    }
    if (lqr && gs && lqr->t.size() == gs->t.size()) {
      DifferenceSeries d;
      d.level = level;
      d.t = lqr->t;
      for (std::size_t k = 0; k < lqr->W.size(); ++k) d.dW.push_back(lqr->W[k] - gs->W[k]);
      rep.differences.push_back(std::move(d));
    }
  }
  rep.content_hash = fnv1a_hex(report_to_json(rep, -1));
  return rep;
}

void require_kind(const ScenarioConfig& cfg, ScenarioKind k, const char* fn) {
  if (cfg.kind != k)
    throw InvalidInput(std::string(fn) + ": config kind is '" + scenario_kind_name(cfg.kind) + "'");
}

}  // namespace

Plant build_plant(const ScenarioConfig& cfg, bool with_schedule) {
  Plant plant;
  plant.tables = cfg.tables_path ? load_aero_tables(*cfg.tables_path) : stevens_lewis_tables();
  plant.params = cfg.params_path ? load_aircraft_params(*cfg.params_path) : AircraftParams{};
  plant.trim = find_trim(cfg.trim_V, deg2rad(cfg.trim_alpha_deg), plant.params, plant.tables);
  if (!plant.trim.converged)
    throw SynthesisError("no trim at V = " + fmt_g(cfg.trim_V) +
                         " ft/s, alpha = " + fmt_g(cfg.trim_alpha_deg) + " deg");
  plant.model = linearize_f16(plant.trim.x_trim, plant.trim.u_trim, plant.params, plant.tables);
  plant.K = lqr_gain(plant.model);
  if (with_schedule) {
    if (cfg.schedule_path) {
      GainSchedule s = load_schedule(*cfg.schedule_path);
      s.mode = cfg.gs_mode;
      s.reference = plant.trim;
      plant.schedule = std::move(s);
    } else {
      const auto trims = trim_grid(default_trim_grid(), plant.params, plant.tables);
      plant.schedule = build_schedule(trims, LqrWeights{}, plant.params, plant.tables,
                                      plant.trim, cfg.gs_mode);
    }
  }
  return plant;
}

ControlLaw make_control_law(const Plant& plant, ControllerKind controller) {
  if (controller == ControllerKind::kLqr) {
    const Mat24 K = plant.K;
    const TrimPoint trim = plant.trim;
    return [K, trim](const LongitudinalState& x) { return lqr_control(x, K, trim); };
  }
  if (!plant.schedule) throw InvalidInput("gslqr requested but no gain schedule was built");
  auto s = std::make_shared<const GainSchedule>(*plant.schedule);
  return [s](const LongitudinalState& x) { return gs_control(x, *s); };
}

VectorField make_vector_field(const Plant& plant, ControllerKind controller,
                              const Disturbance& w) {
  ControlLaw law = make_control_law(plant, controller);
  auto tables = std::make_shared<const AeroTables>(plant.tables);
  const AircraftParams params = plant.params;
  return [law, w, tables, params](const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                                  double t) -> Eigen::VectorXd {
    return closed_loop_rhs(LongitudinalState::from(x), p, t, law, w, params, *tables);
  };
}

std::vector<double> degree_state_scale() { return {kRadToDeg, 1.0, kRadToDeg, kRadToDeg}; }

EnsembleSnapshot initial_cloud(const ScenarioConfig& cfg, const Plant& plant, double level) {
  EnsembleSnapshot snap = cfg.kind == ScenarioKind::kParam ? param_cloud(cfg, plant, level)
                                                           : state_box_cloud(cfg, plant);
  snap.t = 0.0;
  snap.scenario_id = scenario_id(cfg, level);
  snap.integrator = {cfg.dt, cfg.emit_every, cfg.strict_rk4};
  return snap;
}

std::vector<EnsembleSnapshot> propagate_level(const ScenarioConfig& cfg, const Plant& plant,
                                              ControllerKind controller, double level,
                                              PropagationCounters* counters) {
  EnsembleSnapshot cloud = initial_cloud(cfg, plant, level);
  cloud.controller_id = controller_name(controller);
  const VectorField f = make_vector_field(plant, controller, level_disturbance(cfg, level));
  PropagateOptions o;
  o.tf = cfg.tf;
  o.dt = cfg.dt;
  o.emit_every = cfg.emit_every;
  o.strict_rk4 = cfg.strict_rk4;
  return propagate(cloud, f, o, counters);
}

EnsembleSnapshot apply_mass_policy(const EnsembleSnapshot& snap, MassPolicy policy) {
  if (policy == MassPolicy::kUniform) return snap;
  EnsembleSnapshot out = snap;
  double lmax = -std::numeric_limits<double>::infinity();
  for (const auto& w : snap.samples)
    if (!w.diverged && std::isfinite(w.log_phi)) lmax = std::max(lmax, w.log_phi);
  if (!std::isfinite(lmax)) throw PropagationError("density mass policy: no finite density values");
  std::vector<double> m;
  for (const auto& w : snap.samples)
    m.push_back(!w.diverged && std::isfinite(w.log_phi) ? std::exp(w.log_phi - lmax) : 0.0);
  const double total = compensated_sum(m);
  for (std::size_t i = 0; i < m.size(); ++i) out.samples[i].gamma = m[i] / total;
  return out;
}

Histogram marginal_histogram(const EnsembleSnapshot& snapshot, int axis, int bins) {
  if (bins < 1) throw InvalidInput("marginal_histogram: bins must be >= 1");
  if (snapshot.samples.empty()) throw InvalidInput("marginal_histogram: empty snapshot");
  const int dim = static_cast<int>(snapshot.samples.front().extended().size());
  if (axis < 0 || axis >= dim) throw InvalidInput("marginal_histogram: axis out of range");
  std::vector<double> v, m;
  for (const auto& w : snapshot.samples) {
    v.push_back(w.extended()(axis));
    m.push_back(w.gamma);
  }
  double total = compensated_sum(m);
  if (!(total > 0.0)) {
    std::fill(m.begin(), m.end(), 1.0);
    total = static_cast<double>(m.size());
  }
  Histogram h;
  h.lower = *std::min_element(v.begin(), v.end());
  h.upper = *std::max_element(v.begin(), v.end());
  h.mass.assign(static_cast<std::size_t>(bins), 0.0);
  const double width = h.upper - h.lower;
  for (std::size_t i = 0; i < v.size(); ++i) {
    int b = 0;
    if (width > 0.0)
      b = std::min(bins - 1, static_cast<int>(std::floor((v[i] - h.lower) / width * bins)));
    h.mass[static_cast<std::size_t>(b)] += m[i] / total;
  }
  return h;
}

RunReport run_ic_scenario(const ScenarioConfig& cfg, const Plant& plant) {
  require_kind(cfg, ScenarioKind::kIc, "run_ic_scenario");
  return run_levels(cfg, plant);
}

RunReport run_param_scenario(const ScenarioConfig& cfg, const Plant& plant) {
  require_kind(cfg, ScenarioKind::kParam, "run_param_scenario");
  return run_levels(cfg, plant);
}

RunReport run_disturbance_scenario(const ScenarioConfig& cfg, const Plant& plant) {
  require_kind(cfg, ScenarioKind::kDisturbance, "run_disturbance_scenario");
  return run_levels(cfg, plant);
}

RunReport run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const Plant plant = build_plant(cfg, needs_schedule(cfg));
  RunReport rep = run_levels(cfg, plant);
  if (!cfg.output_dir.empty()) write_report(rep, cfg.output_dir);
  return rep;
}

std::string report_to_json(const RunReport& r, int indent) {
  json j;
  j["config"] = json::parse(scenario_config_to_json(r.config, -1));
  j["trim"] = json::parse(trim_point_to_json(r.trim, -1));
  j["level_name"] = level_column(r.config.kind);
  json series = json::array();
  for (const auto& s : r.series) {
    json js;
    js["controller"] = controller_name(s.controller);
    js["level"] = s.level;
    js["t"] = s.t;
    js["W"] = s.W;
    js["diverged"] = s.diverged;
    json ex = json::array();
    for (const auto& e : s.extremes)
      ex.push_back({{"t", e.t}, {"max_id", e.max_id}, {"max_phi", e.max_phi},
                    {"min_id", e.min_id}, {"min_phi", e.min_phi}});
    js["likelihood_extremes"] = ex;
    json hs = json::array();
    for (std::size_t k = 0; k < s.histogram_t.size(); ++k) {
      json axes = json::array();
      for (const auto& h : s.histograms[k])
        axes.push_back({{"lower", h.lower}, {"upper", h.upper}, {"mass", h.mass}});
      hs.push_back({{"t", s.histogram_t[k]}, {"axes", axes}});
    }
    js["histograms"] = hs;
    series.push_back(std::move(js));
  }
  j["series"] = series;
  json diffs = json::array();
  for (const auto& d : r.differences)
    diffs.push_back({{"level", d.level}, {"t", d.t}, {"dW", d.dW}});
  j["differences"] = diffs;
  if (!r.content_hash.empty()) j["content_hash"] = r.content_hash;
  return j.dump(indent);
}

std::string w_csv(const RunReport& r) {
  std::string out = std::string("t,") + level_column(r.config.kind) + ",controller,W\n";
  for (const auto& s : r.series)
    for (std::size_t k = 0; k < s.t.size(); ++k)
      out += fmt_17g(s.t[k]) + "," + fmt_g(s.level) + "," + controller_name(s.controller) +
             "," + fmt_17g(s.W[k]) + "\n";
  return out;
}

void write_report(const RunReport& r, const std::string& dir) {
  ensure_directory(dir);
  write_text_file(dir + "/W.csv", w_csv(r));
  write_text_file(dir + "/report.json", report_to_json(r, 2));
  if (r.config.snapshot_format == SnapshotFormat::kNone) return;
  const std::string sdir = dir + "/snapshots";
  ensure_directory(sdir);
  for (std::size_t k = 0; k < r.snapshots.size() && k < r.series.size(); ++k) {
    const auto& s = r.series[k];
    const std::string stem =
        sdir + "/" + controller_name(s.controller) + "_" + level_column(r.config.kind) + fmt_g(s.level);
    if (r.config.snapshot_format == SnapshotFormat::kLong) {
      write_snapshots_long_csv(stem + ".csv", r.snapshots[k]);
    } else {
      for (const auto& snap : r.snapshots[k]) {
        char t[32];
        std::snprintf(t, sizeof t, "%08.3f", snap.t);
        write_snapshot_csv(stem + "_t" + t + ".csv", snap);
      }
    }
  }
}

std::vector<double> log_omega_grid(std::size_t n, double lo, double hi) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw InvalidInput("log_omega_grid: need n >= 2 and 0 < lo < hi");
  std::vector<double> w(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t k = 0; k < n; ++k)
    w[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  return w;
}

FreqResponse freq_response(const Eigen::MatrixXd& A_cl, const Eigen::VectorXd& Bw,
                           const std::vector<double>& omega,
                           const std::vector<double>& output_scale) {
  const Eigen::Index n = A_cl.rows();
  if (A_cl.cols() != n || Bw.size() != n) throw InvalidInput("freq_response: dimension mismatch");
  if (!output_scale.empty() && static_cast<Eigen::Index>(output_scale.size()) != n)
    throw InvalidInput("freq_response: output scale length");
  if (omega.empty()) throw InvalidInput("freq_response: empty frequency grid");
  if (!(spectral_abscissa(A_cl) < 0.0)) throw NumericalError("freq_response: closed loop is not Hurwitz");
  using CMat = Eigen::MatrixXcd;
  const CMat Ac = A_cl.cast<std::complex<double>>();
  const Eigen::VectorXcd b = Bw.cast<std::complex<double>>();
  FreqResponse out;
  out.peak_db = -std::numeric_limits<double>::infinity();
  for (double w : omega) {
    CMat M = -Ac;
    M.diagonal().array() += std::complex<double>(0.0, w);
    Eigen::VectorXcd g = M.partialPivLu().solve(b);
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(output_scale.size()); ++k)
      g(k) *= output_scale[static_cast<std::size_t>(k)];
    const double gain = g.norm();
    const double db = 20.0 * std::log10(gain);
    out.omega.push_back(w);
    out.gain.push_back(gain);
    out.gain_db.push_back(db);
    if (db > out.peak_db) {
      out.peak_db = db;
      out.peak_omega = w;
    }
  }
  return out;
}

FreqResponse freq_response(const Plant& plant, const std::vector<double>& omega) {
  const Eigen::MatrixXd A = plant.model.A + plant.model.B * plant.K;
  return freq_response(A, plant.model.Bw, omega, degree_state_scale());
}

McBundle mc_compare(const ScenarioConfig& cfg, const Plant& plant, ControllerKind controller,
                    double level) {
  const EnsembleSnapshot cloud = initial_cloud(cfg, plant, level);
  std::vector<Eigen::VectorXd> x0, p;
  for (const auto& w : cloud.samples) {
    x0.push_back(w.x);
    p.push_back(w.p);
  }
  const VectorField f = make_vector_field(plant, controller, level_disturbance(cfg, level));
  PropagateOptions o;
  o.tf = cfg.tf;
  o.dt = cfg.dt;
  o.emit_every = cfg.emit_every;
  o.strict_rk4 = cfg.strict_rk4;
  const TrajectoryBundle tb = integrate_trajectories(x0, p, f, o);

  McBundle out;
  out.t = tb.t;
  const Vec4 xt = plant.trim.x_trim.vec();
  const std::size_t n = x0.size();
  const double wgt = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < tb.t.size(); ++k) {
    std::vector<Vec4> xs, dxs;
    Vec4 mean = Vec4::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec4 xi = tb.x[k][i].head<4>();
      xs.push_back(xi);
      dxs.push_back(xi - xt);
      mean += wgt * xi;
    }
    std::array<Vec4, 3> qs;
    const double levels[3] = {0.05, 0.5, 0.95};
    for (int c = 0; c < 4; ++c) {
      std::vector<double> col;
      for (const auto& d : dxs) col.push_back(d(c));
      for (int l = 0; l < 3; ++l) qs[static_cast<std::size_t>(l)](c) = type7_quantile(col, levels[l]);
    }
    out.x.push_back(std::move(xs));
    out.dx.push_back(std::move(dxs));
    out.mean.push_back(mean);
    out.quantiles.push_back(qs);
  }
  for (bool d : tb.diverged.back()) out.diverged += d ? 1 : 0;
  return out;
}

}  // namespace otrobust

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


// otrobust command line front end.  Exit codes: 0 ok, 2 bad input or config,
// 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "otrobust/controller.hpp"
#include "otrobust/error.hpp"
#include "otrobust/f16_model.hpp"
#include "otrobust/harness.hpp"
#include "otrobust/io.hpp"
#include "otrobust/liouville.hpp"
#include "otrobust/transport.hpp"
#include "otrobust/trim.hpp"
#include "otrobust/units.hpp"

namespace {

using namespace otrobust;
using nlohmann::json;

struct PlantFiles {
  std::string params;
  std::string tables;

  void add(CLI::App* app) {
    app->add_option("--params", params, "aircraft parameter JSON");
    app->add_option("--tables", tables, "aero table JSON");
  }
  AircraftParams load_params() const {
    return params.empty() ? AircraftParams{} : load_aircraft_params(params);
  }
  AeroTables load_tables() const {
    return tables.empty() ? stevens_lewis_tables() : load_aero_tables(tables);
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text << "\n";
  else write_text_file(out, text + "\n");
}

std::string g17(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

json gain_json(const Mat24& K) {
  json rows = json::array();
  for (int i = 0; i < 2; ++i) rows.push_back({K(i, 0), K(i, 1), K(i, 2), K(i, 3)});
  return rows;
}

// Points of a snapshot in reported units: S x with S the degree scale, then p.
DiscreteDistribution scaled_points(const EnsembleSnapshot& s, bool degrees) {
  const auto scale = degree_state_scale();
  DiscreteDistribution d;
  for (const auto& w : s.samples) {
    Eigen::VectorXd e = w.extended();
    if (degrees)
      for (int k = 0; k < 4; ++k) e(k) *= scale[static_cast<std::size_t>(k)];
    d.points.push_back(e);
    d.masses.push_back(w.gamma);
  }
  return d;
}

int run(int argc, char** argv) {
  CLI::App app{"Closed-loop robustness via density transport and Wasserstein distance"};
  app.require_subcommand(1);

  // trim
  PlantFiles trim_files;
  double trim_V = 407.8942, trim_alpha = 6.1650;
  auto* trim = app.add_subcommand("trim", "solve for a trim point");
  trim->add_option("--V", trim_V, "airspeed, ft/s");
  trim->add_option("--alpha-deg", trim_alpha, "angle of attack, deg");
  trim_files.add(trim);
  trim->callback([&] {
    const TrimPoint tp = find_trim(trim_V, deg2rad(trim_alpha), trim_files.load_params(),
                                   trim_files.load_tables());
    std::cout << trim_point_to_json(tp) << "\n";
  });

  // trim-grid
  PlantFiles grid_files;
  int nV = 10, nalpha = 10;
  std::string grid_out;
  auto* grid = app.add_subcommand("trim-grid", "trim over the (V, alpha) lattice");
  grid->add_option("--nV", nV, "airspeed nodes over [100, 1000] ft/s");
  grid->add_option("--nalpha", nalpha, "alpha nodes over [-10, 45] deg");
  grid->add_option("-o,--out", grid_out, "output JSON (stdout if omitted)");
  grid_files.add(grid);
  grid->callback([&] {
    const auto tps = trim_grid(default_trim_grid(nV, nalpha), grid_files.load_params(),
                               grid_files.load_tables());
    std::size_t bad = 0;
    for (const auto& t : tps) bad += t.converged ? 0 : 1;
    if (bad) std::cerr << "warning: " << bad << " node(s) did not converge\n";
    emit(trim_points_to_json(tps), grid_out);
  });

  // gains
  PlantFiles gain_files;
  double gain_V = 407.8942, gain_alpha = 6.1650;
  std::string gain_trim;
  auto* gains = app.add_subcommand("gains", "LQR gain at a trim point");
  gains->add_option("--V", gain_V, "airspeed, ft/s");
  gains->add_option("--alpha-deg", gain_alpha, "angle of attack, deg");
  gains->add_option("--trim", gain_trim, "trim point JSON instead of solving");
  gain_files.add(gains);
  gains->callback([&] {
    const auto params = gain_files.load_params();
    const auto tables = gain_files.load_tables();
    const TrimPoint tp = gain_trim.empty()
                             ? find_trim(gain_V, deg2rad(gain_alpha), params, tables)
                             : parse_trim_point(read_text_file(gain_trim));
    const LinearModel lm = linearize_f16(tp.x_trim, tp.u_trim, params, tables);
    const Mat24 K = lqr_gain(lm);
    json j;
    j["K"] = gain_json(K);
    j["convention"] = "u = u_trim + K (x - x_trim), x in rad and rad/s";
    j["open_loop_abscissa"] = spectral_abscissa(lm.A);
    j["closed_loop_abscissa"] = spectral_abscissa(lm.A + lm.B * K);
    j["trim"] = json::parse(trim_point_to_json(tp));
    std::cout << j.dump(2) << "\n";
  });

  // schedule
  PlantFiles sched_files;
  std::string sched_trims, sched_out, sched_mode = "nominal";
  double ref_V = 407.8942, ref_alpha = 6.1650;
  auto* sched = app.add_subcommand("schedule", "gain schedule from a trim grid");
  sched->add_option("--trims", sched_trims, "trim-grid JSON (solved here if omitted)");
  sched->add_option("--mode", sched_mode, "nominal | interpolated");
  sched->add_option("--ref-V", ref_V, "reference trim airspeed, ft/s");
  sched->add_option("--ref-alpha-deg", ref_alpha, "reference trim alpha, deg");
  sched->add_option("-o,--out", sched_out, "output JSON (stdout if omitted)");
  sched_files.add(sched);
  sched->callback([&] {
    const auto params = sched_files.load_params();
    const auto tables = sched_files.load_tables();
    const auto tps = sched_trims.empty() ? trim_grid(default_trim_grid(), params, tables)
                                         : parse_trim_points(read_text_file(sched_trims));
    const TrimPoint ref = find_trim(ref_V, deg2rad(ref_alpha), params, tables);
    const GainSchedule s = build_schedule(tps, LqrWeights{}, params, tables, ref,
                                          gs_trim_mode_from_name(sched_mode));
    emit(schedule_to_json(s), sched_out);
  });

  // propagate
  std::string prop_cfg, prop_ctrl = "lqr", prop_out, prop_format = "long";
  std::optional<double> p_tf, p_dt, p_level;
  std::optional<std::size_t> p_samples;
  std::optional<int> p_emit;
  std::optional<std::uint64_t> p_seed;
  bool p_strict = false;
  auto* prop = app.add_subcommand("propagate", "propagate one density ensemble");
  prop->add_option("--scenario", prop_cfg, "scenario config JSON")->required();
  prop->add_option("--controller", prop_ctrl, "lqr | gslqr");
  prop->add_option("--tf", p_tf, "final time, s");
  prop->add_option("--dt", p_dt, "step, s");
  prop->add_option("--samples", p_samples, "sample count");
  prop->add_option("--emit-every", p_emit, "steps between snapshots");
  prop->add_option("--seed", p_seed, "sampler seed");
  prop->add_option("--level", p_level, "Delta percent or Omega (first listed if omitted)");
  prop->add_flag("--strict-rk4", p_strict, "divergence at every RK4 stage");
  prop->add_option("--format", prop_format, "long (one file) | per_time (directory)");
  prop->add_option("-o,--out", prop_out, "output path")->required();
  prop->callback([&] {
    ScenarioConfig cfg = load_scenario_config(prop_cfg);
    if (p_tf) cfg.tf = *p_tf;
    if (p_dt) cfg.dt = *p_dt;
    if (p_samples) cfg.samples = *p_samples;
    if (p_emit) cfg.emit_every = *p_emit;
    if (p_seed) cfg.seed = *p_seed;
    if (p_strict) cfg.strict_rk4 = true;
    const ControllerKind c = controller_from_name(prop_ctrl);
    cfg.controllers = {c};
    cfg.validate();
    double level = 0.0;
    if (p_level) level = *p_level;
    else if (cfg.kind == ScenarioKind::kParam) level = cfg.delta_percent.front();
    else if (cfg.kind == ScenarioKind::kDisturbance) level = cfg.omegas.front();
    const Plant plant = build_plant(cfg, c == ControllerKind::kGsLqr);
    PropagationCounters counters;
    const auto snaps = propagate_level(cfg, plant, c, level, &counters);
    if (prop_format == "long") {
      write_snapshots_long_csv(prop_out, snaps);
    } else if (prop_format == "per_time") {
      ensure_directory(prop_out);
      for (const auto& s : snaps) {
        char name[48];
        std::snprintf(name, sizeof name, "/t%08.3f.csv", s.t);
        write_snapshot_csv(prop_out + name, s);
      }
    } else {
      throw InvalidInput("--format must be long or per_time");
    }
    std::size_t div = 0;
    for (const auto& w : snaps.back().samples) div += w.diverged ? 1 : 0;
    std::cerr << snaps.size() << " snapshots, " << counters.steps << " steps, "
              << counters.rhs_evaluations << " field evaluations, " << div << " diverged\n";
  });

  // wasserstein
  std::string w_snap, w_against, w_dirac, w_out, w_plan, w_units = "deg";
  auto* was = app.add_subcommand("wasserstein", "W2 per snapshot time");
  was->add_option("--snapshots", w_snap, "snapshot CSV (long format)")->required();
  auto* o_against = was->add_option("--against", w_against, "second snapshot CSV");
  auto* o_dirac = was->add_option("--dirac-at", w_dirac, "trim point JSON");
  o_against->excludes(o_dirac);
  was->add_option("--units", w_units, "deg (theta, alpha, q in degrees) | rad");
  was->add_option("--plan", w_plan, "write optimal couplings as t,i,j,mass");
  was->add_option("-o,--out", w_out, "output CSV (stdout if omitted)");
  was->callback([&] {
    if (w_against.empty() == w_dirac.empty())
      throw InvalidInput("give exactly one of --against or --dirac-at");
    if (w_units != "deg" && w_units != "rad") throw InvalidInput("--units must be deg or rad");
    const bool deg = w_units == "deg";
    const auto a = read_snapshot_csv(w_snap);
    std::string csv = "t,W\n", plan = "t,i,j,mass\n";
    if (!w_dirac.empty()) {
      const TrimPoint tp = parse_trim_point(read_text_file(w_dirac));
      const Eigen::VectorXd ref = tp.x_trim.vec();
      const std::vector<double> scale = deg ? degree_state_scale() : std::vector<double>{};
      for (const auto& s : a) {
        if (!s.samples.front().p.size()) {
          csv += g17(s.t) + "," + g17(wasserstein_dirac(s, ref, scale)) + "\n";
        } else {
          const TransportPlan tpn = extended_wasserstein(s, ref, scale);
          csv += g17(s.t) + "," + g17(tpn.W) + "\n";
          for (const auto& e : tpn.entries)
            plan += g17(s.t) + "," + std::to_string(e.i) + "," + std::to_string(e.j) + "," + g17(e.mass) + "\n";
        }
      }
    } else {
      const auto b = read_snapshot_csv(w_against);
      if (a.size() != b.size()) throw InvalidInput("snapshot files have different time grids");
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a[k].t - b[k].t) > 1e-9) throw InvalidInput("snapshot times do not match");
        const TransportPlan tpn = wasserstein_lp(scaled_points(a[k], deg), scaled_points(b[k], deg));
        csv += g17(a[k].t) + "," + g17(tpn.W) + "\n";
        for (const auto& e : tpn.entries)
          plan += g17(a[k].t) + "," + std::to_string(e.i) + "," + std::to_string(e.j) + "," + g17(e.mass) + "\n";
      }
    }
    if (w_out.empty()) std::cout << csv;
    else write_text_file(w_out, csv);
    if (!w_plan.empty()) write_text_file(w_plan, plan);
  });

  // scenario
  std::string sc_cfg, sc_out;
  std::optional<std::size_t> sc_samples;
  auto* scen = app.add_subcommand("scenario", "run a full scenario and write W.csv, report.json");
  scen->add_option("--config", sc_cfg, "scenario config JSON")->required();
  scen->add_option("-o,--out", sc_out, "output directory (overrides the config)");
  scen->add_option("--samples", sc_samples, "sample count override");
  scen->callback([&] {
    ScenarioConfig cfg = load_scenario_config(sc_cfg);
    if (!sc_out.empty()) cfg.output_dir = sc_out;
    if (sc_samples) cfg.samples = *sc_samples;
    if (cfg.output_dir.empty()) cfg.output_dir = "out/" + cfg.name;
    const RunReport r = run_scenario(cfg);
    for (const auto& s : r.series)
      std::cout << controller_name(s.controller) << " level " << s.level << ": W(0) = "
                << s.W.front() << ", W(tf) = " << s.W.back() << ", diverged = " << s.diverged
                << "\n";
    std::cout << "report: " << cfg.output_dir << "/report.json (hash " << r.content_hash << ")\n";
  });

  // freq-response
  std::string fr_cfg, fr_out;
  std::size_t fr_n = 200;
  double fr_lo = 1e-2, fr_hi = 1e3;
  auto* fr = app.add_subcommand("freq-response", "disturbance-to-state gain of the LQR loop");
  fr->add_option("--config", fr_cfg, "scenario config for plant files and trim");
  fr->add_option("--n", fr_n, "grid points");
  fr->add_option("--lo", fr_lo, "lowest frequency, rad/s");
  fr->add_option("--hi", fr_hi, "highest frequency, rad/s");
  fr->add_option("-o,--out", fr_out, "CSV omega,gain,gain_db");
  fr->callback([&] {
    const ScenarioConfig cfg = fr_cfg.empty() ? ScenarioConfig{} : load_scenario_config(fr_cfg);
    const Plant plant = build_plant(cfg, false);
    const FreqResponse r = freq_response(plant, log_omega_grid(fr_n, fr_lo, fr_hi));
    if (!fr_out.empty()) {
      std::string csv = "omega,gain,gain_db\n";
      for (std::size_t k = 0; k < r.omega.size(); ++k)
        csv += g17(r.omega[k]) + "," + g17(r.gain[k]) + "," + g17(r.gain_db[k]) + "\n";
      write_text_file(fr_out, csv);
    }
    std::cout << "peak " << r.peak_db << " dB at " << r.peak_omega << " rad/s\n";
  });

  // export-data
  std::string ex_dir;
  auto* ex = app.add_subcommand("export-data", "write the built-in tables and parameters as JSON");
  ex->add_option("-o,--out", ex_dir, "directory")->required();
  ex->callback([&] {
    ensure_directory(ex_dir);
    write_text_file(ex_dir + "/stevens_lewis_aero.json", aero_tables_to_json(stevens_lewis_tables()) + "\n");
    write_text_file(ex_dir + "/f16_params.json", aircraft_params_to_json(AircraftParams{}) + "\n");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const otrobust::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const otrobust::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

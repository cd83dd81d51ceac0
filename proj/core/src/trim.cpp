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


#include "otrobust/trim.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "otrobust/bounded_lsq.hpp"
#include "otrobust/error.hpp"
#include "otrobust/parallel.hpp"
#include "otrobust/units.hpp"

namespace otrobust {
namespace {

using nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool on_bound(double v, double lo, double hi) {
  const double eps = 1e-12 * std::max(1.0, std::abs(v));
  return v <= lo + eps || v >= hi - eps;
}

json trim_to_json(const TrimPoint& tp) {
  json j;
  j["V"] = tp.x_trim.V;
  j["alpha_deg"] = rad2deg(tp.x_trim.alpha);
  j["x_trim"] = {{"theta_deg", rad2deg(tp.x_trim.theta)},
                 {"V", tp.x_trim.V},
                 {"alpha_deg", rad2deg(tp.x_trim.alpha)},
                 {"q_dps", rad2deg(tp.x_trim.q)}};
  j["u_trim"] = {{"T", tp.u_trim.T}, {"delta_e_deg", rad2deg(tp.u_trim.delta_e)}};
  j["residual"] = tp.residual;
  j["converged"] = tp.converged;
  j["thrust_bound_active"] = tp.thrust_bound_active;
  j["bound_active"] = tp.bound_active;
  j["iterations"] = tp.iterations;
  return j;
}

TrimPoint trim_from_json(const json& j) {
  try {
    TrimPoint tp;
    const json& x = j.at("x_trim");
    tp.x_trim = {deg2rad(x.at("theta_deg").get<double>()), x.at("V").get<double>(),
                 deg2rad(x.at("alpha_deg").get<double>()),
                 deg2rad(x.at("q_dps").get<double>())};
    const json& u = j.at("u_trim");
    tp.u_trim = {u.at("T").get<double>(), deg2rad(u.at("delta_e_deg").get<double>())};
    const json* res = j.contains("residual") ? &j["residual"] : nullptr;
    tp.residual = res == nullptr ? 0.0
                  : res->is_number() ? res->get<double>()
                                     : std::numeric_limits<double>::infinity();
    tp.converged = j.value("converged", true);
    tp.thrust_bound_active = j.value("thrust_bound_active", false);
    tp.bound_active = j.value("bound_active", false);
    tp.iterations = j.value("iterations", 0);
    return tp;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("trim point: ") + e.what());
  }
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("trim JSON: ") + e.what());
  }
}

}  // namespace

Eigen::Vector3d trim_residual_vector(const LongitudinalState& x, const ControlInput& u,
                                     const AircraftParams& params,
                                     const AeroTables& tables) {
  const Vec4 d = dynamics(x, u, params, tables);
  return {d(1) / 100.0, d(2), d(3)};
}

double trim_residual(const LongitudinalState& x, const ControlInput& u,
                     const AircraftParams& params, const AeroTables& tables) {
  return trim_residual_vector(x, u, params, tables).norm();
}

TrimPoint find_trim(double V, double alpha, const AircraftParams& params,
                    const AeroTables& tables, const TrimOptions& opts) {
  if (!std::isfinite(V) || V <= 0.0 || !std::isfinite(alpha))
    throw InvalidInput("find_trim: need finite V > 0 and finite alpha");
  const double de_max = deg2rad(kElevatorMaxDeg);
  const double band = opts.theta_band_deg > 0.0 ? deg2rad(opts.theta_band_deg) : kInf;
  BoxLsqOptions lsq;
  lsq.max_iter = opts.max_iter;

  // Phase 1: q = 0, unknowns (theta, T, delta_e).
  auto r1 = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return trim_residual_vector({z(0), V, alpha, 0.0}, {z(1), z(2)}, params, tables);
  };
  Eigen::VectorXd lo1(3), hi1(3), sc1(3), z1(3);
  lo1 << alpha - band, kThrustMin, -de_max;
  hi1 << alpha + band, kThrustMax, de_max;
  sc1 << 1.0, 1e4, 1.0;
  z1 << alpha, 5000.0, 0.0;
  const BoxLsqResult p1 = solve_box_lsq(r1, z1, lo1, hi1, sc1, lsq);

  TrimPoint tp;
  tp.x_trim = {p1.z(0), V, alpha, 0.0};
  tp.u_trim = {p1.z(1), p1.z(2)};
  tp.residual = p1.norm;
  tp.iterations = p1.iterations;
  tp.thrust_bound_active = on_bound(p1.z(1), kThrustMin, kThrustMax);
  tp.bound_active = tp.thrust_bound_active || on_bound(p1.z(0), lo1(0), hi1(0)) ||
                    on_bound(p1.z(2), -de_max, de_max);
  bool stationary = p1.stationary;

  // Phase 2: thrust pinned, pitch rate released.  Needed on the thrust bound
  // and wherever lift cannot be balanced in level flight.
  if (tp.residual >= opts.tol) {
    const double T = p1.z(1);
    auto r2 = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
      return trim_residual_vector({z(0), V, alpha, z(2)}, {T, z(1)}, params, tables);
    };
    Eigen::VectorXd lo2(3), hi2(3), sc2(3), z2(3);
    lo2 << alpha - band, -de_max, -kInf;
    hi2 << alpha + band, de_max, kInf;
    sc2 << 1.0, 1.0, 1.0;
    z2 << p1.z(0), p1.z(2), 0.0;
    const BoxLsqResult p2 = solve_box_lsq(r2, z2, lo2, hi2, sc2, lsq);
    if (p2.norm < tp.residual) {
      tp.x_trim = {p2.z(0), V, alpha, p2.z(2)};
      tp.u_trim = {T, p2.z(1)};
      tp.residual = p2.norm;
      tp.bound_active = tp.thrust_bound_active || on_bound(p2.z(0), lo2(0), hi2(0)) ||
                        on_bound(p2.z(1), -de_max, de_max);
      stationary = p2.stationary;
    }
    tp.iterations += p2.iterations;
  }

  tp.converged = tp.residual < opts.tol || (tp.bound_active && stationary);
  return tp;
}

std::vector<TrimNode> default_trim_grid(int nV, int nalpha) {
  if (nV < 1 || nalpha < 1) throw InvalidInput("default_trim_grid: empty grid");
  std::vector<TrimNode> nodes;
  nodes.reserve(static_cast<std::size_t>(nV * nalpha));
  for (int i = 0; i < nV; ++i) {
    const double V = nV == 1 ? 100.0 : 100.0 + 900.0 * i / (nV - 1);
    for (int j = 0; j < nalpha; ++j) {
      const double a = nalpha == 1 ? -10.0 : -10.0 + 55.0 * j / (nalpha - 1);
      nodes.push_back({V, deg2rad(a)});
    }
  }
  return nodes;
}

std::vector<TrimPoint> trim_grid(const std::vector<TrimNode>& nodes,
                                 const AircraftParams& params, const AeroTables& tables,
                                 const TrimOptions& opts) {
  if (nodes.empty()) throw InvalidInput("trim_grid: empty node list");
  std::vector<TrimPoint> out(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    try {
      out[i] = find_trim(nodes[i].V, nodes[i].alpha, params, tables, opts);
    } catch (const NumericalError&) {
      out[i].x_trim = {nodes[i].alpha, nodes[i].V, nodes[i].alpha, 0.0};
      out[i].u_trim = {kThrustMin, 0.0};
      out[i].residual = std::numeric_limits<double>::infinity();
      out[i].converged = false;
    }
  });
  return out;
}

std::string trim_point_to_json(const TrimPoint& tp, int indent) {
  return trim_to_json(tp).dump(indent);
}

std::string trim_points_to_json(const std::vector<TrimPoint>& tps, int indent) {
  json arr = json::array();
  for (const auto& tp : tps) arr.push_back(trim_to_json(tp));
  return arr.dump(indent);
}

TrimPoint parse_trim_point(std::string_view text) {
  const json j = parse_json(text);
  if (j.is_array()) {
    if (j.size() != 1) throw InvalidInput("trim JSON: expected a single trim point");
    return trim_from_json(j[0]);
  }
  return trim_from_json(j);
}

std::vector<TrimPoint> parse_trim_points(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_array()) throw InvalidInput("trim JSON: expected an array");
  std::vector<TrimPoint> out;
  for (const auto& e : j) out.push_back(trim_from_json(e));
  return out;
}

}  // namespace otrobust

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


#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "otrobust/controller.hpp"
#include "otrobust/error.hpp"
#include "otrobust/parallel.hpp"
#include "otrobust/units.hpp"

namespace otrobust {
namespace {

using nlohmann::json;

std::vector<double> unique_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || std::abs(x - out.back()) > 1e-9 * std::max(1.0, std::abs(x)))
      out.push_back(x);
  return out;
}

std::size_t find_node(const std::vector<double>& nodes, double x) {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (std::abs(nodes[i] - x) <= 1e-9 * std::max(1.0, std::abs(x))) return i;
  throw InvalidInput("schedule: value not on grid");
}

struct Cell {
  std::size_t i0 = 0, i1 = 0;
  double f = 0.0;
};

Cell locate(const std::vector<double>& nodes, double x) {
  const std::size_t n = nodes.size();
  if (n == 1) return {0, 0, 0.0};
  x = std::clamp(x, nodes.front(), nodes.back());
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  std::size_t i = static_cast<std::size_t>(it - nodes.begin());
  i = std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, n - 2);
  return {i, i + 1, (x - nodes[i]) / (nodes[i + 1] - nodes[i])};
}

std::string node_name(const GainSchedule& s, std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << "node (V = " << s.V_nodes[i] << " ft/s, alpha = " << rad2deg(s.alpha_nodes[j])
     << " deg)";
  return os.str();
}

json gain_to_json(const Mat24& K) {
  return json::array({json::array({K(0, 0), K(0, 1), K(0, 2), K(0, 3)}),
                      json::array({K(1, 0), K(1, 1), K(1, 2), K(1, 3)})});
}

Mat24 gain_from_json(const json& j) {
  Mat24 K;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) K(r, c) = j.at(r).at(c).get<double>();
  return K;
}

}  // namespace

GsTrimMode gs_trim_mode_from_name(std::string_view name) {
  if (name == "nominal") return GsTrimMode::kNominal;
  if (name == "interpolated") return GsTrimMode::kInterpolated;
  throw InvalidInput("unknown gsLQR trim mode '" + std::string(name) + "'");
}

const char* gs_trim_mode_name(GsTrimMode mode) {
  return mode == GsTrimMode::kNominal ? "nominal" : "interpolated";
}

GainSchedule build_schedule(const std::vector<TrimPoint>& trims, const LqrWeights& weights,
                            const AircraftParams& params, const AeroTables& tables,
                            const TrimPoint& reference, GsTrimMode mode) {
  if (trims.empty()) throw InvalidInput("build_schedule: no trims");
  weights.validate();
  GainSchedule s;
  s.mode = mode;
  s.reference = reference;
  std::vector<double> Vs, as;
  for (const auto& t : trims) {
    Vs.push_back(t.x_trim.V);
    as.push_back(t.x_trim.alpha);
  }
  s.V_nodes = unique_sorted(Vs);
  s.alpha_nodes = unique_sorted(as);
  const std::size_t n = s.V_nodes.size() * s.alpha_nodes.size();
  if (n != trims.size())
    throw InvalidInput("build_schedule: trims do not form a full (V, alpha) lattice");

  s.trims.assign(n, TrimPoint{});
  std::vector<bool> seen(n, false);
  for (const auto& t : trims) {
    const std::size_t k =
        s.index(find_node(s.V_nodes, t.x_trim.V), find_node(s.alpha_nodes, t.x_trim.alpha));
    if (seen[k]) throw InvalidInput("build_schedule: duplicate grid node");
    seen[k] = true;
    s.trims[k] = t;
  }
  for (std::size_t i = 0; i < s.V_nodes.size(); ++i)
    for (std::size_t j = 0; j < s.alpha_nodes.size(); ++j)
      if (!s.trims[s.index(i, j)].converged)
        throw InvalidInput("build_schedule: trim not converged at " + node_name(s, i, j));

  s.gains.assign(n, Mat24::Zero());
  s.open_loop_abscissa.assign(n, 0.0);
  s.closed_loop_abscissa.assign(n, 0.0);
  std::vector<std::string> failure(n);
  parallel_for(n, [&](std::size_t k) {
    const TrimPoint& t = s.trims[k];
    try {
      const LinearModel lm = linearize_f16(t.x_trim, t.u_trim, params, tables);
      const Mat24 K = lqr_gain(lm, weights);
      s.gains[k] = K;
      s.open_loop_abscissa[k] = spectral_abscissa(lm.A);
      s.closed_loop_abscissa[k] = spectral_abscissa(lm.A + lm.B * K);
      if (!(s.closed_loop_abscissa[k] < 0.0)) failure[k] = "closed loop not Hurwitz";
    } catch (const NumericalError& e) {
      failure[k] = e.what();
    }
  });
  for (std::size_t i = 0; i < s.V_nodes.size(); ++i)
    for (std::size_t j = 0; j < s.alpha_nodes.size(); ++j)
      if (!failure[s.index(i, j)].empty())
        throw SynthesisError("build_schedule: " + node_name(s, i, j) + ": " +
                             failure[s.index(i, j)]);
  return s;
}

ScheduleSample interpolate_schedule(const GainSchedule& s, double V, double alpha) {
  if (s.trims.empty()) throw InvalidInput("empty gain schedule");
  const Cell cv = locate(s.V_nodes, V);
  const Cell ca = locate(s.alpha_nodes, alpha);
  const double w[4] = {(1.0 - cv.f) * (1.0 - ca.f), cv.f * (1.0 - ca.f),
                       (1.0 - cv.f) * ca.f, cv.f * ca.f};
  const std::size_t k[4] = {s.index(cv.i0, ca.i0), s.index(cv.i1, ca.i0),
                            s.index(cv.i0, ca.i1), s.index(cv.i1, ca.i1)};
  ScheduleSample out{Mat24::Zero(), Vec4::Zero(), Vec2::Zero()};
  for (int c = 0; c < 4; ++c) {
    out.K += w[c] * s.gains[k[c]];
    out.x_trim += w[c] * s.trims[k[c]].x_trim.vec();
    out.u_trim += w[c] * s.trims[k[c]].u_trim.vec();
  }
  return out;
}

ControlInput gs_control(const LongitudinalState& x, const GainSchedule& schedule) {
  const ScheduleSample g = interpolate_schedule(schedule, x.V, x.alpha);
  Vec2 u;
  if (schedule.mode == GsTrimMode::kNominal)
    u = schedule.reference.u_trim.vec() + g.K * (x.vec() - schedule.reference.x_trim.vec());
  else
    u = g.u_trim + g.K * (x.vec() - g.x_trim);
  return {u(0), u(1)};
}

std::string schedule_to_json(const GainSchedule& s, int indent) {
  json j;
  j["mode"] = gs_trim_mode_name(s.mode);
  j["V_nodes"] = s.V_nodes;
  std::vector<double> a_deg;
  for (double a : s.alpha_nodes) a_deg.push_back(rad2deg(a));
  j["alpha_nodes_deg"] = a_deg;
  j["reference"] = json::parse(trim_point_to_json(s.reference, -1));
  json nodes = json::array();
  for (std::size_t i = 0; i < s.V_nodes.size(); ++i)
    for (std::size_t jj = 0; jj < s.alpha_nodes.size(); ++jj) {
      const std::size_t k = s.index(i, jj);
      nodes.push_back({{"i", i},
                       {"j", jj},
                       {"trim", json::parse(trim_point_to_json(s.trims[k], -1))},
                       {"K", gain_to_json(s.gains[k])},
                       {"open_loop_abscissa", s.open_loop_abscissa[k]},
                       {"closed_loop_abscissa", s.closed_loop_abscissa[k]}});
    }
  j["nodes"] = nodes;
  return j.dump(indent);
}

GainSchedule parse_schedule(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("schedule JSON: ") + e.what());
  }
  try {
    GainSchedule s;
    s.mode = gs_trim_mode_from_name(j.value("mode", std::string("nominal")));
    s.V_nodes = j.at("V_nodes").get<std::vector<double>>();
    for (double a : j.at("alpha_nodes_deg").get<std::vector<double>>())
      s.alpha_nodes.push_back(deg2rad(a));
    s.reference = parse_trim_point(j.at("reference").dump());
    const std::size_t n = s.V_nodes.size() * s.alpha_nodes.size();
    if (n == 0 || j.at("nodes").size() != n)
      throw InvalidInput("schedule JSON: node count does not match the grid");
    s.trims.resize(n);
    s.gains.resize(n);
    s.open_loop_abscissa.resize(n);
    s.closed_loop_abscissa.resize(n);
    for (const auto& node : j.at("nodes")) {
      const std::size_t i = node.at("i").get<std::size_t>();
      const std::size_t jj = node.at("j").get<std::size_t>();
      if (i >= s.V_nodes.size() || jj >= s.alpha_nodes.size())
        throw InvalidInput("schedule JSON: node index out of range");
      const std::size_t k = s.index(i, jj);
      s.trims[k] = parse_trim_point(node.at("trim").dump());
      s.gains[k] = gain_from_json(node.at("K"));
      s.open_loop_abscissa[k] = node.value("open_loop_abscissa", 0.0);
      s.closed_loop_abscissa[k] = node.value("closed_loop_abscissa", 0.0);
    }
    return s;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("schedule JSON: ") + e.what());
  }
}

GainSchedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_schedule(ss.str());
}

}  // namespace otrobust

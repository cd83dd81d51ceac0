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

#include <json.hpp>

#include "otrobust/error.hpp"
#include "otrobust/f16_model.hpp"

namespace otrobust {
namespace {

using nlohmann::json;

// Stevens & Lewis, "Aircraft Control and Simulation", F-16 model data.
// Stored as one row per elevator breakpoint; transposed on construction.
constexpr double kAlpha[12] = {-10, -5, 0, 5, 10, 15, 20, 25, 30, 35, 40, 45};
constexpr double kDeltaE[5] = {-24, -12, 0, 12, 24};

constexpr double kCX[5][12] = {
    {-.099, -.081, -.081, -.063, -.025, .044, .097, .113, .145, .167, .174, .166},
    {-.048, -.038, -.040, -.021, .016, .083, .127, .137, .162, .177, .179, .167},
    {-.022, -.020, -.021, -.004, .032, .094, .128, .130, .154, .161, .155, .138},
    {-.040, -.038, -.039, -.025, .006, .062, .087, .085, .100, .110, .104, .091},
    {-.083, -.073, -.076, -.072, -.046, .012, .024, .025, .043, .053, .047, .040}};

// CZ depends on elevator through the linear term -0.19 * de / 25.
constexpr double kCZ0[12] = {.770,   .241,   -.100,  -.416,  -.731,  -1.053,
                             -1.366, -1.646, -1.917, -2.120, -2.248, -2.229};

constexpr double kCm[5][12] = {
    {.205, .168, .186, .196, .213, .251, .245, .238, .252, .231, .198, .192},
    {.081, .077, .107, .110, .110, .141, .127, .119, .133, .108, .081, .093},
    {-.046, -.020, -.009, -.005, -.006, .010, .006, -.001, .014, .000, -.013, .032},
    {-.174, -.145, -.121, -.127, -.129, -.102, -.097, -.113, -.087, -.084, -.069, -.006},
    {-.259, -.202, -.184, -.193, -.199, -.150, -.160, -.167, -.104, -.076, -.041, -.005}};

constexpr double kCXq[12] = {-.267, -.110, .308, 1.34, 2.08, 2.91,
                             2.76,  2.05,  1.50, 1.49, 1.83, 1.21};
constexpr double kCZq[12] = {-8.80, -25.8, -28.9, -31.4, -31.2, -30.7,
                             -27.7, -28.2, -29.0, -29.8, -38.3, -35.3};
constexpr double kCmq[12] = {-7.21, -.540, -5.23, -5.26, -6.11, -6.64,
                             -5.69, -6.00, -6.20, -6.40, -6.60, -6.00};

AeroTables build_stevens_lewis() {
  AeroTables t;
  t.alpha_deg.assign(std::begin(kAlpha), std::end(kAlpha));
  t.deltae_deg.assign(std::begin(kDeltaE), std::end(kDeltaE));
  t.CX.resize(12, 5);
  t.CZ.resize(12, 5);
  t.Cm.resize(12, 5);
  t.CXq.resize(12);
  t.CZq.resize(12);
  t.Cmq.resize(12);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 5; ++j) {
      t.CX(i, j) = kCX[j][i];
      t.CZ(i, j) = kCZ0[i] - 0.19 * kDeltaE[j] / 25.0;
      t.Cm(i, j) = kCm[j][i];
    }
    t.CXq(i) = kCXq[i];
    t.CZq(i) = kCZq[i];
    t.Cmq(i) = kCmq[i];
  }
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string(what) + ": " + e.what());
  }
}

Eigen::MatrixXd grid_from_json(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_array())
    throw InvalidInput(std::string("aero tables: missing 2-D array ") + name);
  const json& rows = j[name];
  const auto nr = static_cast<Eigen::Index>(rows.size());
  if (nr == 0 || !rows[0].is_array())
    throw InvalidInput(std::string("aero tables: ") + name + " is not 2-D");
  const auto nc = static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd out(nr, nc);
  for (Eigen::Index i = 0; i < nr; ++i) {
    if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != nc)
      throw InvalidInput(std::string("aero tables: ragged rows in ") + name);
    for (Eigen::Index k = 0; k < nc; ++k) out(i, k) = rows[i][k].get<double>();
  }
  return out;
}

Eigen::VectorXd vector_from_json(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_array())
    throw InvalidInput(std::string("aero tables: missing array ") + name);
  auto v = j[name].get<std::vector<double>>();
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json grid_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(r);
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

const AeroTables& stevens_lewis_tables() {
  static const AeroTables tables = build_stevens_lewis();
  return tables;
}

void AeroTables::validate() const {
  auto increasing = [](const std::vector<double>& b) {
    for (std::size_t i = 1; i < b.size(); ++i)
      if (!(b[i] > b[i - 1])) return false;
    return !b.empty();
  };
  if (!increasing(alpha_deg))
    throw InvalidInput("aero tables: alpha breakpoints must be strictly increasing");
  if (!increasing(deltae_deg))
    throw InvalidInput("aero tables: elevator breakpoints must be strictly increasing");
  const auto na = static_cast<Eigen::Index>(alpha_deg.size());
  const auto nd = static_cast<Eigen::Index>(deltae_deg.size());
  for (const auto* g : {&CX, &CZ, &Cm}) {
    if (g->rows() != na || g->cols() != nd)
      throw InvalidInput("aero tables: 2-D grid shape does not match breakpoints");
    if (!g->allFinite()) throw InvalidInput("aero tables: non-finite grid value");
  }
  for (const auto* v : {&CXq, &CZq, &Cmq}) {
    if (v->size() != na)
      throw InvalidInput("aero tables: 1-D grid length does not match alpha breakpoints");
    if (!v->allFinite()) throw InvalidInput("aero tables: non-finite grid value");
  }
}

AeroTables parse_aero_tables(std::string_view json_text) {
  const json j = parse(json_text, "aero tables");
  AeroTables t;
  try {
    t.alpha_deg = j.at("alpha_breakpoints_deg").get<std::vector<double>>();
    t.deltae_deg = j.at("deltae_breakpoints_deg").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("aero tables: ") + e.what());
  }
  t.CX = grid_from_json(j, "CX");
  t.CZ = grid_from_json(j, "CZ");
  t.Cm = grid_from_json(j, "Cm");
  t.CXq = vector_from_json(j, "CXq");
  t.CZq = vector_from_json(j, "CZq");
  t.Cmq = vector_from_json(j, "Cmq");
  // A single column means no elevator dependence; widen it so that
  // interpolation code only ever sees full grids.
  if (t.deltae_deg.size() == 1) {
    t.deltae_deg = {-kElevatorMaxDeg, kElevatorMaxDeg};
    for (auto* g : {&t.CX, &t.CZ, &t.Cm}) {
      if (g->cols() != 1) continue;
      Eigen::MatrixXd w(g->rows(), 2);
      w << *g, *g;
      *g = w;
    }
  }
  t.validate();
  return t;
}

AeroTables load_aero_tables(const std::string& path) {
  return parse_aero_tables(read_file(path));
}

std::string aero_tables_to_json(const AeroTables& t) {
  json j;
  j["alpha_breakpoints_deg"] = t.alpha_deg;
  j["deltae_breakpoints_deg"] = t.deltae_deg;
  j["CX"] = grid_to_json(t.CX);
  j["CZ"] = grid_to_json(t.CZ);
  j["Cm"] = grid_to_json(t.Cm);
  j["CXq"] = vector_to_json(t.CXq);
  j["CZq"] = vector_to_json(t.CZq);
  j["Cmq"] = vector_to_json(t.Cmq);
  return j.dump(2);
}

AircraftParams parse_aircraft_params(std::string_view json_text) {
  const json j = parse(json_text, "aircraft params");
  if (!j.is_object()) throw InvalidInput("aircraft params: expected an object");
  AircraftParams p;
  static const char* kKnown[] = {"m",   "g",    "S",    "cbar", "xcg_ref", "xcg",
                                 "Jyy", "rho0", "h",    "rho_override"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown))
      throw InvalidInput("aircraft params: unknown field '" + key + "'");
    if (!value.is_number() && !(key == "rho_override" && value.is_null()))
      throw InvalidInput("aircraft params: field '" + key + "' must be a number");
  }
  auto get = [&](const char* k, double& dst) {
    if (j.contains(k)) dst = j[k].get<double>();
  };
  get("m", p.m);
  get("g", p.g);
  get("S", p.S);
  get("cbar", p.cbar);
  get("xcg_ref", p.xcg_ref);
  get("xcg", p.xcg);
  get("Jyy", p.Jyy);
  get("rho0", p.rho0);
  get("h", p.h);
  if (j.contains("rho_override") && !j["rho_override"].is_null())
    p.rho_override = j["rho_override"].get<double>();
  p.validate();
  return p;
}

AircraftParams load_aircraft_params(const std::string& path) {
  return parse_aircraft_params(read_file(path));
}

std::string aircraft_params_to_json(const AircraftParams& p) {
  json j;
  j["m"] = p.m;
  j["g"] = p.g;
  j["S"] = p.S;
  j["cbar"] = p.cbar;
  j["xcg_ref"] = p.xcg_ref;
  j["xcg"] = p.xcg;
  j["Jyy"] = p.Jyy;
  j["rho0"] = p.rho0;
  j["h"] = p.h;
  if (p.rho_override) j["rho_override"] = *p.rho_override;
  return j.dump(2);
}

}  // namespace otrobust

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


#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "otrobust/error.hpp"
#include "otrobust/io.hpp"
#include "otrobust/units.hpp"

namespace otrobust {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r' && c != ' ') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_num(const std::string& s, const std::string& path, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end == s.c_str() || *end != '\0')
    throw InvalidInput(path + ":" + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::string snapshot_csv_header(bool with_params) {
  return with_params ? "t,id,theta_deg,V,alpha_deg,q_dps,m,xcg,Jyy,phi,gamma,diverged\n"
                     : "t,id,theta_deg,V,alpha_deg,q_dps,phi,gamma,diverged\n";
}

std::string snapshot_csv_rows(const EnsembleSnapshot& snap) {
  std::string out;
  for (std::size_t i = 0; i < snap.samples.size(); ++i) {
    const WeightedSample& w = snap.samples[i];
    if (w.x.size() != 4) throw InvalidInput("snapshot CSV: state block must have 4 entries");
    out += num(snap.t) + "," + std::to_string(i) + "," + num(rad2deg(w.x(0))) + "," +
           num(w.x(1)) + "," + num(rad2deg(w.x(2))) + "," + num(rad2deg(w.x(3)));
    for (Eigen::Index k = 0; k < w.p.size(); ++k) out += "," + num(w.p(k));
    out += "," + num(w.phi) + "," + num(w.gamma) + "," + (w.diverged ? "1" : "0") + "\n";
  }
  return out;
}

void write_snapshot_csv(const std::string& path, const EnsembleSnapshot& snap) {
  const bool params = !snap.samples.empty() && snap.samples.front().p.size() > 0;
  write_text_file(path, snapshot_csv_header(params) + snapshot_csv_rows(snap));
}

void write_snapshots_long_csv(const std::string& path,
                              const std::vector<EnsembleSnapshot>& snaps) {
  const bool params = !snaps.empty() && !snaps.front().samples.empty() &&
                      snaps.front().samples.front().p.size() > 0;
  std::string text = snapshot_csv_header(params);
  for (const auto& s : snaps) text += snapshot_csv_rows(s);
  write_text_file(path, text);
}

std::vector<EnsembleSnapshot> read_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput(path + ": empty file");
  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t k = 0; k < header.size(); ++k) col[header[k]] = k;
  for (const char* need : {"t", "theta_deg", "V", "alpha_deg", "q_dps", "phi", "gamma"})
    if (!col.count(need)) throw InvalidInput(path + ": missing column " + need);
  const bool params = col.count("m") && col.count("xcg") && col.count("Jyy");

  std::vector<EnsembleSnapshot> out;
  std::map<double, std::size_t> by_t;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != header.size())
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": wrong field count");
    auto get = [&](const char* name) { return parse_num(f[col.at(name)], path, lineno); };
    const double t = get("t");
    auto it = by_t.find(t);
    if (it == by_t.end()) {
      it = by_t.emplace(t, out.size()).first;
      out.emplace_back();
      out.back().t = t;
    }
    WeightedSample w;
    w.x = Eigen::Vector4d(deg2rad(get("theta_deg")), get("V"), deg2rad(get("alpha_deg")),
                          deg2rad(get("q_dps")));
    if (params) w.p = Eigen::Vector3d(get("m"), get("xcg"), get("Jyy"));
    w.phi = get("phi");
    w.log_phi = w.phi > 0.0 ? std::log(w.phi) : -INFINITY;
    w.gamma = get("gamma");
    w.diverged = col.count("diverged") ? get("diverged") != 0.0 : false;
    out[it->second].samples.push_back(std::move(w));
  }
  return out;
}

}  // namespace otrobust

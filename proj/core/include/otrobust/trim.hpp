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


#ifndef OTROBUST_TRIM_HPP_
#define OTROBUST_TRIM_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "otrobust/f16_model.hpp"

namespace otrobust {

struct TrimPoint {
  LongitudinalState x_trim;
  ControlInput u_trim;
  // |(V_dot / 100, alpha_dot, q_dot)| at the trim point.
  double residual = 0.0;
  bool converged = false;
  bool thrust_bound_active = false;
  // Some bound (thrust, elevator or pitch band) is active at the solution.
  bool bound_active = false;
  int iterations = 0;
};

struct TrimOptions {
  // Pitch attitude is searched within alpha +/- this band; <= 0 disables it.
  double theta_band_deg = 10.0;
  double tol = 1e-8;
  int max_iter = 400;
};

// Scaled residual used by the trim solver.
Eigen::Vector3d trim_residual_vector(const LongitudinalState& x, const ControlInput& u,
                                     const AircraftParams& params,
                                     const AeroTables& tables);
double trim_residual(const LongitudinalState& x, const ControlInput& u,
                     const AircraftParams& params, const AeroTables& tables);

// alpha in rad.
TrimPoint find_trim(double V, double alpha, const AircraftParams& params,
                    const AeroTables& tables, const TrimOptions& opts = {});

struct TrimNode {
  double V = 0.0;      // ft/s
  double alpha = 0.0;  // rad
};

// 10 x 10 lattice, V in [100, 1000] ft/s and alpha in [-10, 45] deg.
// Ordered with alpha varying fastest.
std::vector<TrimNode> default_trim_grid(int nV = 10, int nalpha = 10);

std::vector<TrimPoint> trim_grid(const std::vector<TrimNode>& nodes,
                                 const AircraftParams& params,
                                 const AeroTables& tables,
                                 const TrimOptions& opts = {});

// JSON in CLI units (deg, deg/s).
std::string trim_point_to_json(const TrimPoint& tp, int indent = 2);
std::string trim_points_to_json(const std::vector<TrimPoint>& tps, int indent = 2);
TrimPoint parse_trim_point(std::string_view json_text);
std::vector<TrimPoint> parse_trim_points(std::string_view json_text);

}  // namespace otrobust

#endif  // OTROBUST_TRIM_HPP_

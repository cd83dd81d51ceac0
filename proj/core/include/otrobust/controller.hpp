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


#ifndef OTROBUST_CONTROLLER_HPP_
#define OTROBUST_CONTROLLER_HPP_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "otrobust/f16_model.hpp"
#include "otrobust/trim.hpp"

namespace otrobust {

using Mat4 = Eigen::Matrix4d;
using Mat42 = Eigen::Matrix<double, 4, 2>;
using Mat24 = Eigen::Matrix<double, 2, 4>;

struct LinearModel {
  Mat4 A = Mat4::Zero();
  Mat42 B = Mat42::Zero();
  Vec4 Bw = Vec4::Zero();  // elevator column of B
  Vec4 x0 = Vec4::Zero();
  Vec2 u0 = Vec2::Zero();
};

using PlantRhs = std::function<Vec4(const Vec4& x, const Vec2& u)>;

// Central differences with h_i = 1e-6 * max(1, |z_i|).
LinearModel linearize(const PlantRhs& rhs, const Vec4& x0, const Vec2& u0);
LinearModel linearize_f16(const LongitudinalState& x0, const ControlInput& u0,
                          const AircraftParams& params, const AeroTables& tables);

// Central-difference Jacobian of a general map.
Eigen::MatrixXd jacobian_fd(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn,
    const Eigen::VectorXd& z);

struct LqrWeights {
  Mat4 Q = Eigen::Vector4d(100.0, 0.25, 100.0, 1e-4).asDiagonal();
  Eigen::Matrix2d R = Eigen::Vector2d(1e-6, 625.0).asDiagonal();

  void validate() const;
};

double spectral_abscissa(const Eigen::MatrixXd& A);

// Stabilising solution of A'P + PA - P B R^-1 B' P + Q = 0.
Eigen::MatrixXd solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);
double care_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                     const Eigen::MatrixXd& P);

// Sign convention: K = -R^-1 B' P, applied as u = u_trim + K (x - x_trim).
Eigen::MatrixXd lqr_gain_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);
Mat24 lqr_gain(const LinearModel& model, const LqrWeights& weights = {});

// Pre-saturation command.
ControlInput lqr_control(const LongitudinalState& x, const Mat24& K,
                         const TrimPoint& trim);

// Where gsLQR measures the state deviation from.
enum class GsTrimMode {
  kNominal,       // interpolated gain, deviation from the reference trim
  kInterpolated,  // interpolated gain, trim and input offsets
};

struct GainSchedule {
  std::vector<double> V_nodes;      // ft/s, increasing
  std::vector<double> alpha_nodes;  // rad, increasing
  // Row-major with alpha fastest: node (i, j) at i * alpha_nodes.size() + j.
  std::vector<TrimPoint> trims;
  std::vector<Mat24> gains;
  std::vector<double> open_loop_abscissa;
  std::vector<double> closed_loop_abscissa;
  GsTrimMode mode = GsTrimMode::kNominal;
  TrimPoint reference;

  std::size_t index(std::size_t i, std::size_t j) const {
    return i * alpha_nodes.size() + j;
  }
  std::size_t size() const { return trims.size(); }
};

// Nodes are recovered from the trims' (V, alpha); they must form a full
// lattice.  Throws SynthesisError naming the first non-stabilising node.
GainSchedule build_schedule(const std::vector<TrimPoint>& trims,
                            const LqrWeights& weights, const AircraftParams& params,
                            const AeroTables& tables, const TrimPoint& reference,
                            GsTrimMode mode = GsTrimMode::kNominal);

struct ScheduleSample {
  Mat24 K;
  Vec4 x_trim;
  Vec2 u_trim;
};

// Bilinear interpolation on the (V, alpha) cell, clamped to the grid hull.
ScheduleSample interpolate_schedule(const GainSchedule& s, double V, double alpha);

ControlInput gs_control(const LongitudinalState& x, const GainSchedule& schedule);

GsTrimMode gs_trim_mode_from_name(std::string_view name);
const char* gs_trim_mode_name(GsTrimMode mode);

// Gains act on rad and rad/s deviations; trims are written in degrees.
std::string schedule_to_json(const GainSchedule& s, int indent = 2);
GainSchedule parse_schedule(std::string_view json_text);
GainSchedule load_schedule(const std::string& path);

}  // namespace otrobust

#endif  // OTROBUST_CONTROLLER_HPP_

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

// Longitudinal F-16 plant: state/input types, aero tables, equations of
// motion and the closed-loop vector field.

#ifndef OTROBUST_F16_MODEL_HPP_
#define OTROBUST_F16_MODEL_HPP_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace otrobust {

using Vec2 = Eigen::Matrix<double, 2, 1>;
using Vec4 = Eigen::Matrix<double, 4, 1>;

struct LongitudinalState {
  double theta = 0.0;  // rad
  double V = 0.0;      // ft/s
  double alpha = 0.0;  // rad
  double q = 0.0;      // rad/s

  Vec4 vec() const { return {theta, V, alpha, q}; }
  static LongitudinalState from(const Eigen::Ref<const Eigen::VectorXd>& v);
};

struct ControlInput {
  double T = 0.0;        // lb
  double delta_e = 0.0;  // rad

  Vec2 vec() const { return {T, delta_e}; }
  static ControlInput from(const Eigen::Ref<const Eigen::VectorXd>& v);
};

inline constexpr double kThrustMin = 1000.0;
inline constexpr double kThrustMax = 28000.0;
inline constexpr double kElevatorMaxDeg = 25.0;

struct AircraftParams {
  double m = 636.94;             // slug
  double g = 32.17;              // ft/s^2
  double S = 300.0;              // ft^2
  double cbar = 11.32;           // ft
  double xcg_ref = 0.35 * 11.32; // ft
  double xcg = 0.30 * 11.32;     // ft
  double Jyy = 55814.0;          // slug ft^2
  double rho0 = 2.377e-3;        // slug/ft^3
  double h = 10000.0;            // ft
  // Replaces the altitude formula when set.
  std::optional<double> rho_override;

  double density() const;
  void validate() const;
};

// Row index = alpha breakpoint, column index = elevator breakpoint.
struct AeroTables {
  std::vector<double> alpha_deg;
  std::vector<double> deltae_deg;
  Eigen::MatrixXd CX, CZ, Cm;
  Eigen::VectorXd CXq, CZq, Cmq;

  void validate() const;
};

enum class Coefficient { CX, CZ, Cm, CXq, CZq, Cmq };

Coefficient coefficient_from_name(std::string_view name);
const char* coefficient_name(Coefficient c);

// Public-domain Stevens-Lewis longitudinal data (alpha -10..45 deg,
// elevator -24..24 deg).
const AeroTables& stevens_lewis_tables();

AeroTables parse_aero_tables(std::string_view json_text);
AeroTables load_aero_tables(const std::string& path);
std::string aero_tables_to_json(const AeroTables& tables);

AircraftParams parse_aircraft_params(std::string_view json_text);
AircraftParams load_aircraft_params(const std::string& path);
std::string aircraft_params_to_json(const AircraftParams& params);

double air_density(const AircraftParams& params);
double dynamic_pressure(double V, const AircraftParams& params);

// alpha, delta_e in rad.  Clamped to the breakpoint hull.
double lookup_coefficient(const AeroTables& tables, Coefficient which,
                          double alpha, double delta_e);

ControlInput saturate(const ControlInput& u);

// (theta_dot, V_dot, alpha_dot, q_dot).  Throws SingularState if V <= 0.
Vec4 dynamics(const LongitudinalState& x, const ControlInput& u,
              const AircraftParams& params, const AeroTables& tables);

// Uncertain parameter vector layout used throughout: (m, xcg, Jyy).
inline constexpr int kNumUncertainParams = 3;
AircraftParams with_parameters(const AircraftParams& base,
                               const Eigen::Ref<const Eigen::VectorXd>& p);
Eigen::VectorXd nominal_parameters(const AircraftParams& params);

using ControlLaw = std::function<ControlInput(const LongitudinalState&)>;
// Elevator disturbance in rad.
using Disturbance = std::function<double(double)>;

Disturbance no_disturbance();
// amplitude_deg * sin(omega t), returned in rad.
Disturbance sine_disturbance(double amplitude_deg, double omega);

// f_cl of the state block; u = saturate(law(x) + (0, w(t))).  The parameter
// block of the extended field is identically zero and is not returned.
Vec4 closed_loop_rhs(const LongitudinalState& x,
                     const Eigen::Ref<const Eigen::VectorXd>& p, double t,
                     const ControlLaw& law, const Disturbance& w,
                     const AircraftParams& params, const AeroTables& tables);

// Extended field over [x, p]; returns a vector of the same size with a zero
// parameter block.
Eigen::VectorXd extended_closed_loop_rhs(
    const Eigen::Ref<const Eigen::VectorXd>& xp, double t,
    const ControlLaw& law, const Disturbance& w,
    const AircraftParams& params, const AeroTables& tables);

}  // namespace otrobust

#endif  // OTROBUST_F16_MODEL_HPP_

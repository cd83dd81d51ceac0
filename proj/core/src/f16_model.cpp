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


#include "otrobust/f16_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otrobust/error.hpp"
#include "otrobust/units.hpp"

namespace otrobust {
namespace {

struct Bracket {
  Eigen::Index i = 0;
  double f = 0.0;
};

Bracket bracket(const std::vector<double>& bp, double x) {
  const auto n = static_cast<Eigen::Index>(bp.size());
  if (n == 1) return {0, 0.0};
  x = std::clamp(x, bp.front(), bp.back());
  auto it = std::upper_bound(bp.begin(), bp.end(), x);
  Eigen::Index i = static_cast<Eigen::Index>(it - bp.begin()) - 1;
  i = std::clamp<Eigen::Index>(i, 0, n - 2);
  return {i, (x - bp[i]) / (bp[i + 1] - bp[i])};
}

double interp1(const Eigen::VectorXd& v, const Bracket& a) {
  if (v.size() == 1) return v(0);
  return (1.0 - a.f) * v(a.i) + a.f * v(a.i + 1);
}

double interp2(const Eigen::MatrixXd& g, const Bracket& a, const Bracket& d) {
  const Eigen::Index i1 = g.rows() == 1 ? a.i : a.i + 1;
  const Eigen::Index j1 = g.cols() == 1 ? d.i : d.i + 1;
  return (1.0 - a.f) * (1.0 - d.f) * g(a.i, d.i) + a.f * (1.0 - d.f) * g(i1, d.i) +
         (1.0 - a.f) * d.f * g(a.i, j1) + a.f * d.f * g(i1, j1);
}

}  // namespace

LongitudinalState LongitudinalState::from(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() < 4) throw InvalidInput("state vector needs 4 entries");
  return {v(0), v(1), v(2), v(3)};
}

ControlInput ControlInput::from(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() < 2) throw InvalidInput("input vector needs 2 entries");
  return {v(0), v(1)};
}

double AircraftParams::density() const { return air_density(*this); }

void AircraftParams::validate() const {
  for (double v : {m, g, S, cbar, Jyy, rho0}) {
    if (!std::isfinite(v) || v <= 0.0)
      throw InvalidInput("aircraft params: m, g, S, cbar, Jyy, rho0 must be positive");
  }
  if (!std::isfinite(xcg) || !std::isfinite(xcg_ref) || !std::isfinite(h))
    throw InvalidInput("aircraft params: non-finite field");
  if (rho_override && (!std::isfinite(*rho_override) || *rho_override <= 0.0))
    throw InvalidInput("aircraft params: rho_override must be positive");
  if (!rho_override && 1.0 - 0.703e-5 * h <= 0.0)
    throw InvalidInput("aircraft params: altitude outside density formula range");
}

Coefficient coefficient_from_name(std::string_view name) {
  if (name == "CX") return Coefficient::CX;
  if (name == "CZ") return Coefficient::CZ;
  if (name == "Cm") return Coefficient::Cm;
  if (name == "CXq") return Coefficient::CXq;
  if (name == "CZq") return Coefficient::CZq;
  if (name == "Cmq") return Coefficient::Cmq;
  throw InvalidInput("unknown aero coefficient '" + std::string(name) + "'");
}

const char* coefficient_name(Coefficient c) {
  switch (c) {
    case Coefficient::CX: return "CX";
    case Coefficient::CZ: return "CZ";
    case Coefficient::Cm: return "Cm";
    case Coefficient::CXq: return "CXq";
    case Coefficient::CZq: return "CZq";
    case Coefficient::Cmq: return "Cmq";
  }
  throw InvalidInput("unknown aero coefficient id");
}

double air_density(const AircraftParams& p) {
  if (p.rho_override) return *p.rho_override;
  return p.rho0 * std::pow(1.0 - 0.703e-5 * p.h, 4.14);
}

double dynamic_pressure(double V, const AircraftParams& params) {
  if (!std::isfinite(V)) throw InvalidInput("dynamic_pressure: non-finite V");
  return 0.5 * air_density(params) * V * V;
}

double lookup_coefficient(const AeroTables& t, Coefficient which, double alpha,
                          double delta_e) {
  const Bracket a = bracket(t.alpha_deg, rad2deg(alpha));
  switch (which) {
    case Coefficient::CXq: return interp1(t.CXq, a);
    case Coefficient::CZq: return interp1(t.CZq, a);
    case Coefficient::Cmq: return interp1(t.Cmq, a);
    default: break;
  }
  const Bracket d = bracket(t.deltae_deg, rad2deg(delta_e));
  switch (which) {
    case Coefficient::CX: return interp2(t.CX, a, d);
    case Coefficient::CZ: return interp2(t.CZ, a, d);
    case Coefficient::Cm: return interp2(t.Cm, a, d);
    default: break;
  }
  throw InvalidInput("unknown aero coefficient id");
}

ControlInput saturate(const ControlInput& u) {
  const double de_max = deg2rad(kElevatorMaxDeg);
  return {std::clamp(u.T, kThrustMin, kThrustMax), std::clamp(u.delta_e, -de_max, de_max)};
}

Vec4 dynamics(const LongitudinalState& x, const ControlInput& u,
              const AircraftParams& p, const AeroTables& t) {
  if (!(x.V > 0.0)) throw SingularState("dynamics: V must be positive (V = " +
                                        std::to_string(x.V) + ")");
  const Bracket a = bracket(t.alpha_deg, rad2deg(x.alpha));
  const Bracket d = bracket(t.deltae_deg, rad2deg(u.delta_e));
  const double qbar = 0.5 * air_density(p) * x.V * x.V;
  const double k = p.cbar / (2.0 * x.V) * x.q;

  const double cx = interp2(t.CX, a, d) + k * interp1(t.CXq, a);
  const double cz = interp2(t.CZ, a, d) + k * interp1(t.CZq, a);
  const double cm = interp2(t.Cm, a, d) + k * interp1(t.Cmq, a) +
                    (p.xcg_ref - p.xcg) / p.cbar * cz;

  const double sa = std::sin(x.alpha), ca = std::cos(x.alpha);
  const double X = u.T - p.m * p.g * std::sin(x.theta) + qbar * p.S * cx;
  const double Z = p.m * p.g * std::cos(x.theta) + qbar * p.S * cz;

  Vec4 dx;
  dx(0) = x.q;
  dx(1) = (ca * X + sa * Z) / p.m;
  dx(2) = x.q + (-sa * X + ca * Z) / (p.m * x.V);
  dx(3) = qbar * p.S * p.cbar / p.Jyy * cm;
  return dx;
}

AircraftParams with_parameters(const AircraftParams& base,
                               const Eigen::Ref<const Eigen::VectorXd>& p) {
  if (p.size() == 0) return base;
  if (p.size() != kNumUncertainParams)
    throw InvalidInput("parameter vector must be (m, xcg, Jyy)");
  AircraftParams out = base;
  out.m = p(0);
  out.xcg = p(1);
  out.Jyy = p(2);
  return out;
}

Eigen::VectorXd nominal_parameters(const AircraftParams& params) {
  Eigen::VectorXd p(kNumUncertainParams);
  p << params.m, params.xcg, params.Jyy;
  return p;
}

Disturbance no_disturbance() {
  return [](double) { return 0.0; };
}

Disturbance sine_disturbance(double amplitude_deg, double omega) {
  const double amp = deg2rad(amplitude_deg);
  return [amp, omega](double t) { return amp * std::sin(omega * t); };
}

Vec4 closed_loop_rhs(const LongitudinalState& x,
                     const Eigen::Ref<const Eigen::VectorXd>& p, double t,
                     const ControlLaw& law, const Disturbance& w,
                     const AircraftParams& params, const AeroTables& tables) {
  ControlInput u = law(x);
  if (w) u.delta_e += w(t);
  return dynamics(x, saturate(u), with_parameters(params, p), tables);
}

Eigen::VectorXd extended_closed_loop_rhs(
    const Eigen::Ref<const Eigen::VectorXd>& xp, double t,
    const ControlLaw& law, const Disturbance& w,
    const AircraftParams& params, const AeroTables& tables) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(xp.size());
  out.head<4>() = closed_loop_rhs(LongitudinalState::from(xp.head<4>()),
                                  xp.tail(xp.size() - 4), t, law, w, params, tables);
  return out;
}

}  // namespace otrobust

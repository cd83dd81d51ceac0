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

#include <Eigen/Dense>

#include "otrobust/controller.hpp"
#include "otrobust/error.hpp"

namespace otrobust {

Eigen::MatrixXd jacobian_fd(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn,
    const Eigen::VectorXd& z) {
  Eigen::MatrixXd J;
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(z(k)));
    Eigen::VectorXd zp = z, zm = z;
    zp(k) += h;
    zm(k) -= h;
    const Eigen::VectorXd d = (fn(zp) - fn(zm)) / (zp(k) - zm(k));
    if (J.size() == 0) J.resize(d.size(), z.size());
    J.col(k) = d;
  }
  if (!J.allFinite()) throw NumericalError("jacobian_fd: non-finite derivative");
  return J;
}

LinearModel linearize(const PlantRhs& rhs, const Vec4& x0, const Vec2& u0) {
  LinearModel lm;
  lm.x0 = x0;
  lm.u0 = u0;
  lm.A = jacobian_fd([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return rhs(x, u0); },
                     x0);
  lm.B = jacobian_fd([&](const Eigen::VectorXd& u) -> Eigen::VectorXd { return rhs(x0, u); },
                     u0);
  lm.Bw = lm.B.col(1);
  return lm;
}

LinearModel linearize_f16(const LongitudinalState& x0, const ControlInput& u0,
                          const AircraftParams& params, const AeroTables& tables) {
  return linearize(
      [&](const Vec4& x, const Vec2& u) {
        return dynamics(LongitudinalState::from(x), ControlInput::from(u), params, tables);
      },
      x0.vec(), u0.vec());
}

void LqrWeights::validate() const {
  if (!Q.isApprox(Q.transpose()) || !R.isApprox(R.transpose()))
    throw InvalidInput("LQR weights must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat4> eq(Q);
  if (eq.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, Q.norm()))
    throw InvalidInput("Q must be positive semidefinite");
  Eigen::LLT<Eigen::Matrix2d> lr(R);
  if (lr.info() != Eigen::Success) throw InvalidInput("R must be positive definite");
}

Mat24 lqr_gain(const LinearModel& model, const LqrWeights& weights) {
  weights.validate();
  return lqr_gain_matrix(model.A, model.B, weights.Q, weights.R);
}

ControlInput lqr_control(const LongitudinalState& x, const Mat24& K, const TrimPoint& trim) {
  const Vec2 u = trim.u_trim.vec() + K * (x.vec() - trim.x_trim.vec());
  return {u(0), u(1)};
}

}  // namespace otrobust

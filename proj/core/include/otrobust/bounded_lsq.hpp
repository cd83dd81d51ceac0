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


// Box-constrained nonlinear least squares (projected Levenberg-Marquardt).

#ifndef OTROBUST_BOUNDED_LSQ_HPP_
#define OTROBUST_BOUNDED_LSQ_HPP_

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace otrobust {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct BoxLsqOptions {
  int max_iter = 400;
  double lambda0 = 1e-3;
  double lambda_max = 1e16;
  // Stop once the residual norm drops below this.
  double rtol = 1e-15;
};

struct BoxLsqResult {
  Eigen::VectorXd z;
  Eigen::VectorXd r;
  double norm = 0.0;
  double initial_norm = 0.0;
  int iterations = 0;
  // True when no improving step exists from z (local minimiser within
  // floating point resolution); false when max_iter was hit.
  bool stationary = false;
  // Per-variable flag: z sits on a bound with the gradient pushing outward.
  std::vector<bool> active;
};

// Minimise 0.5*|fn(z)|^2 subject to lo <= z <= hi.  `scale` gives the typical
// magnitude of each variable; steps are computed in z/scale.  Only steps
// that reduce |fn| are accepted, so norm <= initial_norm always holds.
BoxLsqResult solve_box_lsq(const ResidualFn& fn, const Eigen::VectorXd& z0,
                           const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                           const Eigen::VectorXd& scale,
                           const BoxLsqOptions& opts = {});

}  // namespace otrobust

#endif  // OTROBUST_BOUNDED_LSQ_HPP_

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


#include "otrobust/bounded_lsq.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "otrobust/error.hpp"

namespace otrobust {
namespace {

Eigen::VectorXd clip(const Eigen::VectorXd& s, const Eigen::VectorXd& lo,
                     const Eigen::VectorXd& hi) {
  return s.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

BoxLsqResult solve_box_lsq(const ResidualFn& fn, const Eigen::VectorXd& z0,
                           const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                           const Eigen::VectorXd& scale, const BoxLsqOptions& opts) {
  const Eigen::Index n = z0.size();
  if (lo.size() != n || hi.size() != n || scale.size() != n)
    throw InvalidInput("solve_box_lsq: dimension mismatch");
  if ((lo.array() > hi.array()).any()) throw InvalidInput("solve_box_lsq: lo > hi");
  if ((scale.array() <= 0.0).any()) throw InvalidInput("solve_box_lsq: scale must be positive");

  // Work in s = z / scale.
  const Eigen::VectorXd slo = lo.cwiseQuotient(scale);
  const Eigen::VectorXd shi = hi.cwiseQuotient(scale);
  auto eval = [&](const Eigen::VectorXd& s) { return fn(s.cwiseProduct(scale)); };

  Eigen::VectorXd s = clip(z0.cwiseQuotient(scale), slo, shi);
  Eigen::VectorXd r = eval(s);
  if (!r.allFinite()) throw NumericalError("solve_box_lsq: non-finite residual at start");

  BoxLsqResult res;
  res.initial_norm = r.norm();
  res.active.assign(static_cast<std::size_t>(n), false);
  double lambda = opts.lambda0;
  int it = 0;
  bool stationary = false;

  Eigen::MatrixXd J(r.size(), n);
  for (; it < opts.max_iter; ++it) {
    if (r.norm() <= opts.rtol) {
      stationary = true;
      break;
    }
    // Finite-difference Jacobian; one-sided next to a bound.
    for (Eigen::Index k = 0; k < n; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(s(k)));
      Eigen::VectorXd sp = s, sm = s;
      sp(k) = std::min(s(k) + h, shi(k));
      sm(k) = std::max(s(k) - h, slo(k));
      const double span = sp(k) - sm(k);
      if (span <= 0.0) {
        J.col(k).setZero();
        continue;
      }
      const Eigen::VectorXd rp = sp(k) == s(k) ? r : eval(sp);
      const Eigen::VectorXd rm = sm(k) == s(k) ? r : eval(sm);
      J.col(k) = (rp - rm) / span;
    }
    const Eigen::VectorXd g = J.transpose() * r;

    std::vector<bool> free(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
      const bool at_lo = s(k) <= slo(k) && g(k) > 0.0;
      const bool at_hi = s(k) >= shi(k) && g(k) < 0.0;
      res.active[static_cast<std::size_t>(k)] = at_lo || at_hi;
      free[static_cast<std::size_t>(k)] = !(at_lo || at_hi);
    }
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < n; ++k)
      if (free[static_cast<std::size_t>(k)]) idx.push_back(k);
    if (idx.empty()) {
      stationary = true;
      break;
    }
    const auto nf = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd Jf(J.rows(), nf);
    for (Eigen::Index k = 0; k < nf; ++k) Jf.col(k) = J.col(idx[static_cast<std::size_t>(k)]);
    const Eigen::MatrixXd A = Jf.transpose() * Jf;
    const Eigen::VectorXd gf = Jf.transpose() * r;
    const Eigen::VectorXd d = A.diagonal().cwiseMax(1e-12 * std::max(1.0, A.diagonal().maxCoeff()));

    bool improved = false;
    while (lambda <= opts.lambda_max) {
      Eigen::MatrixXd M = A;
      M.diagonal() += lambda * d;
      const Eigen::VectorXd df = M.ldlt().solve(-gf);
      Eigen::VectorXd trial = s;
      for (Eigen::Index k = 0; k < nf; ++k) trial(idx[static_cast<std::size_t>(k)]) += df(k);
      trial = clip(trial, slo, shi);
      if ((trial - s).cwiseAbs().maxCoeff() <= 1e-16 * (1.0 + s.cwiseAbs().maxCoeff())) {
        lambda = opts.lambda_max * 2.0;
        break;
      }
      const Eigen::VectorXd rt = eval(trial);
      if (rt.allFinite() && rt.norm() < r.norm()) {
        s = trial;
        r = rt;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) {
      stationary = true;
      break;
    }
  }

  res.z = s.cwiseProduct(scale);
  res.r = r;
  res.norm = r.norm();
  res.iterations = it;
  res.stationary = stationary;
  return res;
}

}  // namespace otrobust

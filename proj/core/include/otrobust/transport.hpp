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


// Discrete optimal transport (squared Euclidean cost) between weighted
// point clouds.

#ifndef OTROBUST_TRANSPORT_HPP_
#define OTROBUST_TRANSPORT_HPP_

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "otrobust/liouville.hpp"

namespace otrobust {

struct DiscreteDistribution {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> masses;

  std::size_t size() const { return points.size(); }
  Eigen::Index dim() const { return points.empty() ? 0 : points.front().size(); }
  // Uniform masses 1/n.
  static DiscreteDistribution uniform(std::vector<Eigen::VectorXd> pts);
};

struct PlanEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  double mass = 0.0;
};

struct TransportPlan {
  std::vector<PlanEntry> entries;
  double cost = 0.0;  // sum of mass * c_ij
  double W = 0.0;     // sqrt(cost)
  std::size_t pivots = 0;
};

enum class Pricing { kDantzig, kBlock };

struct LpOptions {
  // Per-dimension weights applied to coordinate differences (empty = 1).
  std::vector<double> scale;
  // Refuse problems with more than this many coupling variables.
  double memory_budget = 2.5e7;
  Pricing pricing = Pricing::kBlock;
  // Degenerate pivots in a row before switching to Bland's rule.
  std::size_t degenerate_streak = 50;
};

// Mass handling shared by every entry point: zero masses dropped, sums within
// 1e-9 of one renormalised, anything else rejected.
struct NormalizedMasses {
  std::vector<double> mass;
  std::vector<std::size_t> index;  // original index of each kept entry
};
NormalizedMasses normalize_masses(const std::vector<double>& masses);

// Transportation LP on a dense m x n cost matrix (row-major).  Masses are
// used as given (no normalisation) but must balance.
TransportPlan solve_transportation(const std::vector<double>& supply,
                                   const std::vector<double>& demand,
                                   const std::vector<double>& cost,
                                   const LpOptions& opts = {});

TransportPlan wasserstein_lp(const DiscreteDistribution& a, const DiscreteDistribution& b,
                             const LpOptions& opts = {});

// Throws NumericalError if row/column sums or signs are off by more than tol.
void check_plan(const TransportPlan& plan, const std::vector<double>& supply,
                const std::vector<double>& demand, double tol = 1e-9);

// sqrt(sum_i gamma_i |S (x_i - x_ref)|^2) over the state block.
double wasserstein_dirac(const EnsembleSnapshot& snapshot, const Eigen::VectorXd& x_ref,
                         const std::vector<double>& scale = {});
double wasserstein_dirac(const DiscreteDistribution& a, const Eigen::VectorXd& x_ref,
                         const std::vector<double>& scale = {});

// Exact W2 for d = 1 by merging quantile functions.
double wasserstein_1d(const DiscreteDistribution& a, const DiscreteDistribution& b);

// LP between {[x_i(t), p_i], gamma_i} and {[x_trim, p_j], gamma_j} with
// c_ij = |S (x_i - x_trim)|^2 + |p_i - p_j|^2.
TransportPlan extended_wasserstein(const EnsembleSnapshot& snapshot,
                                   const Eigen::VectorXd& x_trim,
                                   const std::vector<double>& state_scale = {},
                                   const LpOptions& opts = {});

struct MarginalBound {
  std::vector<double> W_axis;
  double W_joint = 0.0;
  bool satisfied = false;
};

// Per-axis W via wasserstein_1d, joint W via wasserstein_lp; satisfied iff
// sum W_i^2 <= W_joint^2 + 1e-9.
MarginalBound marginal_bound_check(const DiscreteDistribution& a,
                                   const DiscreteDistribution& b);

}  // namespace otrobust

#endif  // OTROBUST_TRANSPORT_HPP_

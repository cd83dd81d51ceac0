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


// Density transport along characteristics: each sample carries its state and
// log-density, integrated together with fixed-step RK4.

#ifndef OTROBUST_LIOUVILLE_HPP_
#define OTROBUST_LIOUVILLE_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "otrobust/sampling.hpp"

namespace otrobust {

// State derivative at (x, p, t); the parameter block is constant.
using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd& x,
                                                  const Eigen::VectorXd& p, double t)>;

struct IntegratorSettings {
  double dt = 0.01;
  int emit_every = 100;
  bool strict_rk4 = false;
};

struct EnsembleSnapshot {
  double t = 0.0;
  std::vector<WeightedSample> samples;
  std::string scenario_id;
  std::string controller_id;
  IntegratorSettings integrator;
};

// Trace of the central-difference Jacobian of the state block.
double divergence(const VectorField& rhs, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& p, double t);

Eigen::VectorXd rk4_step(const VectorField& rhs, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& p, double t, double dt);

struct PropagateOptions {
  double tf = 20.0;
  double dt = 0.01;
  int emit_every = 100;
  // Divergence at all four RK4 stages instead of once at the step midpoint.
  bool strict_rk4 = false;
  unsigned workers = 0;
};

struct PropagationCounters {
  std::uint64_t steps = 0;
  std::uint64_t rhs_evaluations = 0;
  std::uint64_t divergence_evaluations = 0;
  // State dimension + 1 (the log-density).
  int scalar_odes_per_sample = 0;
};

// Snapshots at t = 0, every emit_every steps, and t = tf.  A sample whose
// state or density turns non-finite (or whose field throws) is frozen at its
// last finite value and flagged diverged.
std::vector<EnsembleSnapshot> propagate(const EnsembleSnapshot& cloud,
                                        const VectorField& rhs,
                                        const PropagateOptions& opts,
                                        PropagationCounters* counters = nullptr);

// Plain trajectories (no density) with the same stepping as propagate.
// Result indexed [emit][sample]; diverged samples are frozen the same way.
struct TrajectoryBundle {
  std::vector<double> t;
  std::vector<std::vector<Eigen::VectorXd>> x;
  std::vector<std::vector<bool>> diverged;
};
TrajectoryBundle integrate_trajectories(const std::vector<Eigen::VectorXd>& x0,
                                        const std::vector<Eigen::VectorXd>& p,
                                        const VectorField& rhs, const PropagateOptions& opts);

// Density at (x_star, p) at time t: back-propagate to t = 0, evaluate phi0 on
// [x0, p] (0 off the support), then integrate the density forward.
double query_density(const Eigen::VectorXd& x_star, const Eigen::VectorXd& p, double t,
                     const VectorField& rhs, const InitialPdf& phi0, double dt,
                     bool strict_rk4 = false);

struct LikelihoodExtremes {
  double t = 0.0;
  std::size_t max_id = 0;
  std::size_t min_id = 0;
  double max_phi = 0.0;
  double min_phi = 0.0;
};

// Over non-diverged samples; ties go to the lowest index.
std::vector<LikelihoodExtremes> likelihood_extremes(
    const std::vector<EnsembleSnapshot>& snapshots);

}  // namespace otrobust

#endif  // OTROBUST_LIOUVILLE_HPP_

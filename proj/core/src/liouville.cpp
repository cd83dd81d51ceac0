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


#include "otrobust/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "otrobust/error.hpp"
#include "otrobust/parallel.hpp"

namespace otrobust {
namespace {

struct StepCount {
  std::size_t steps = 0;
  std::vector<std::size_t> emits;  // step indices at which to emit
};

StepCount plan_steps(double tf, double dt, int emit_every) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("propagate: dt must be positive");
  if (!(tf >= 0.0) || !std::isfinite(tf)) throw InvalidInput("propagate: tf must be >= 0");
  if (emit_every < 1) throw InvalidInput("propagate: emit_every must be >= 1");
  const double r = tf / dt;
  const auto n = static_cast<std::size_t>(std::llround(r));
  if (std::abs(r - static_cast<double>(n)) > 1e-6 * std::max(1.0, r))
    throw InvalidInput("propagate: tf must be an integer multiple of dt");
  StepCount sc;
  sc.steps = n;
  for (std::size_t k = 0; k <= n; k += static_cast<std::size_t>(emit_every)) sc.emits.push_back(k);
  if (sc.emits.back() != n) sc.emits.push_back(n);
  return sc;
}

struct SampleState {
  Eigen::VectorXd x;
  double log_phi = 0.0;
  bool diverged = false;
};

// One RK4 step for the state and, optionally, the log-density.
// Returns false if the step produced a non-finite value or the field threw.
bool step_sample(const VectorField& rhs, SampleState& s, const Eigen::VectorXd& p,
                 double t, double dt, bool with_density, bool strict,
                 std::uint64_t& evals, std::uint64_t& divs) {
  try {
    const double h2 = 0.5 * dt;
    const Eigen::VectorXd k1 = rhs(s.x, p, t);
    const Eigen::VectorXd x2 = s.x + h2 * k1;
    const Eigen::VectorXd k2 = rhs(x2, p, t + h2);
    const Eigen::VectorXd x3 = s.x + h2 * k2;
    const Eigen::VectorXd k3 = rhs(x3, p, t + h2);
    const Eigen::VectorXd x4 = s.x + dt * k3;
    const Eigen::VectorXd k4 = rhs(x4, p, t + dt);
    evals += 4;
    const Eigen::VectorXd xn = s.x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    double lp = s.log_phi;
    if (with_density) {
      if (strict) {
        const double d1 = divergence(rhs, s.x, p, t);
        const double d2 = divergence(rhs, x2, p, t + h2);
        const double d3 = divergence(rhs, x3, p, t + h2);
        const double d4 = divergence(rhs, x4, p, t + dt);
        lp -= dt / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
        divs += 4;
        evals += 8 * static_cast<std::uint64_t>(s.x.size());
      } else {
        lp -= dt * divergence(rhs, x3, p, t + h2);
        divs += 1;
        evals += 2 * static_cast<std::uint64_t>(s.x.size());
      }
    }
    if (!xn.allFinite() || (with_density && !std::isfinite(lp))) return false;
    s.x = xn;
    s.log_phi = lp;
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

double divergence(const VectorField& rhs, const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                  double t) {
  double tr = 0.0;
  Eigen::VectorXd xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(i)));
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    const double d = (rhs(xp, p, t)(i) - rhs(xm, p, t)(i)) / (xp(i) - xm(i));
    xp(i) = xm(i) = x(i);
    tr += d;
  }
  if (!std::isfinite(tr)) throw PropagationError("divergence: non-finite Jacobian entry");
  return tr;
}

Eigen::VectorXd rk4_step(const VectorField& rhs, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& p, double t, double dt) {
  SampleState s{x, 0.0, false};
  std::uint64_t e = 0, d = 0;
  if (!step_sample(rhs, s, p, t, dt, false, false, e, d))
    throw PropagationError("rk4_step: non-finite state");
  return s.x;
}

std::vector<EnsembleSnapshot> propagate(const EnsembleSnapshot& cloud, const VectorField& rhs,
                                        const PropagateOptions& opts,
                                        PropagationCounters* counters) {
  const StepCount plan = plan_steps(opts.tf, opts.dt, opts.emit_every);
  const std::size_t n = cloud.samples.size();
  if (n == 0) throw InvalidInput("propagate: empty cloud");
  const Eigen::Index nx = cloud.samples.front().x.size();
  for (const auto& s : cloud.samples) {
    if (s.x.size() != nx || s.p.size() != cloud.samples.front().p.size())
      throw InvalidInput("propagate: samples must share dimensionality");
    if (!(s.phi >= 0.0) || !(s.gamma >= 0.0) || !s.x.allFinite())
      throw InvalidInput("propagate: invalid sample");
  }

  // history[i][e] = state of sample i at emit e.
  std::vector<std::vector<SampleState>> history(n);
  std::vector<std::uint64_t> evals(n, 0), divs(n, 0);
  parallel_for(
      n,
      [&](std::size_t i) {
        const WeightedSample& w = cloud.samples[i];
        SampleState s{w.x, w.phi > 0.0 ? std::log(w.phi) : -INFINITY, w.diverged};
        const bool with_density = w.phi > 0.0;
        auto& h = history[i];
        h.reserve(plan.emits.size());
        std::size_t next = 0;
        for (std::size_t k = 0;; ++k) {
          if (next < plan.emits.size() && plan.emits[next] == k) {
            h.push_back(s);
            ++next;
          }
          if (k == plan.steps) break;
          if (s.diverged) continue;
          const double t = cloud.t + static_cast<double>(k) * opts.dt;
          if (!step_sample(rhs, s, w.p, t, opts.dt, with_density, opts.strict_rk4, evals[i],
                           divs[i]))
            s.diverged = true;
        }
      },
      opts.workers);

  std::vector<EnsembleSnapshot> out(plan.emits.size());
  for (std::size_t e = 0; e < plan.emits.size(); ++e) {
    EnsembleSnapshot& snap = out[e];
    snap.t = cloud.t + static_cast<double>(plan.emits[e]) * opts.dt;
    snap.scenario_id = cloud.scenario_id;
    snap.controller_id = cloud.controller_id;
    snap.integrator = {opts.dt, opts.emit_every, opts.strict_rk4};
    snap.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const SampleState& s = history[i][e];
      WeightedSample& w = snap.samples[i];
      w.x = s.x;
      w.p = cloud.samples[i].p;
      w.log_phi = s.log_phi;
      w.phi = cloud.samples[i].phi > 0.0 ? std::exp(s.log_phi) : 0.0;
      w.gamma = cloud.samples[i].gamma;
      w.diverged = s.diverged;
    }
  }
  if (counters) {
    counters->steps = plan.steps;
    counters->rhs_evaluations = 0;
    counters->divergence_evaluations = 0;
    for (std::size_t i = 0; i < n; ++i) {
      counters->rhs_evaluations += evals[i];
      counters->divergence_evaluations += divs[i];
    }
    counters->scalar_odes_per_sample = static_cast<int>(nx) + 1;
  }
  return out;
}

TrajectoryBundle integrate_trajectories(const std::vector<Eigen::VectorXd>& x0,
                                        const std::vector<Eigen::VectorXd>& p,
                                        const VectorField& rhs, const PropagateOptions& opts) {
  const StepCount plan = plan_steps(opts.tf, opts.dt, opts.emit_every);
  const std::size_t n = x0.size();
  if (p.size() != n) throw InvalidInput("integrate_trajectories: x0/p size mismatch");
  std::vector<std::vector<SampleState>> history(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        SampleState s{x0[i], 0.0, false};
        std::uint64_t e = 0, d = 0;
        std::size_t next = 0;
        for (std::size_t k = 0;; ++k) {
          if (next < plan.emits.size() && plan.emits[next] == k) {
            history[i].push_back(s);
            ++next;
          }
          if (k == plan.steps) break;
          if (s.diverged) continue;
          const double t = static_cast<double>(k) * opts.dt;
          if (!step_sample(rhs, s, p[i], t, opts.dt, false, false, e, d)) s.diverged = true;
        }
      },
      opts.workers);
  TrajectoryBundle b;
  for (std::size_t e = 0; e < plan.emits.size(); ++e) {
    b.t.push_back(static_cast<double>(plan.emits[e]) * opts.dt);
    std::vector<Eigen::VectorXd> xs(n);
    std::vector<bool> dv(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = history[i][e].x;
      dv[i] = history[i][e].diverged;
    }
    b.x.push_back(std::move(xs));
    b.diverged.push_back(std::move(dv));
  }
  return b;
}

double query_density(const Eigen::VectorXd& x_star, const Eigen::VectorXd& p, double t,
                     const VectorField& rhs, const InitialPdf& phi0, double dt,
                     bool strict_rk4) {
  if (!(t >= 0.0)) throw InvalidInput("query_density: t must be >= 0");
  if (!(dt > 0.0)) throw InvalidInput("query_density: dt must be positive");
  auto extended = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd e(x.size() + p.size());
    e << x, p;
    return e;
  };
  if (t == 0.0) return phi0(extended(x_star));

  const auto n = static_cast<std::size_t>(std::max<long long>(1, std::llround(std::ceil(t / dt - 1e-9))));
  const double h = t / static_cast<double>(n);
  std::uint64_t e = 0, d = 0;

  SampleState back{x_star, 0.0, false};
  for (std::size_t k = 0; k < n; ++k) {
    const double tk = t - static_cast<double>(k) * h;
    if (!step_sample(rhs, back, p, tk, -h, false, false, e, d))
      throw PropagationError("query_density: backward integration blew up");
  }
  const double f0 = phi0(extended(back.x));
  if (!(f0 > 0.0)) return 0.0;

  SampleState fwd{back.x, std::log(f0), false};
  for (std::size_t k = 0; k < n; ++k) {
    if (!step_sample(rhs, fwd, p, static_cast<double>(k) * h, h, true, strict_rk4, e, d))
      throw PropagationError("query_density: forward integration blew up");
  }
  return std::exp(fwd.log_phi);
}

std::vector<LikelihoodExtremes> likelihood_extremes(
    const std::vector<EnsembleSnapshot>& snapshots) {
  if (snapshots.empty()) throw InvalidInput("likelihood_extremes: no snapshots");
  std::vector<LikelihoodExtremes> out;
  for (const auto& snap : snapshots) {
    LikelihoodExtremes ex;
    ex.t = snap.t;
    bool any = false;
    for (std::size_t i = 0; i < snap.samples.size(); ++i) {
      const auto& s = snap.samples[i];
      if (s.diverged) continue;
      if (!any || s.log_phi > snap.samples[ex.max_id].log_phi) ex.max_id = i;
      if (!any || s.log_phi < snap.samples[ex.min_id].log_phi) ex.min_id = i;
      any = true;
    }
    if (!any) ex.max_id = ex.min_id = 0;
    if (!snap.samples.empty()) {
      ex.max_phi = snap.samples[ex.max_id].phi;
      ex.min_phi = snap.samples[ex.min_id].phi;
    }
    out.push_back(ex);
  }
  return out;
}

}  // namespace otrobust

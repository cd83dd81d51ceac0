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


#include "otrobust/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "otrobust/error.hpp"
#include "otrobust/parallel.hpp"
#include "otrobust/sampling.hpp"

namespace otrobust {
namespace {

double weighted_sq(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const std::vector<double>& scale) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double w = scale.empty() ? 1.0 : scale[static_cast<std::size_t>(k)];
    const double d = w * (a(k) - b(k));
    s += d * d;
  }
  return s;
}

void check_dims(const DiscreteDistribution& a, const char* what) {
  if (a.points.empty()) throw InvalidInput(std::string(what) + ": empty distribution");
  if (a.points.size() != a.masses.size())
    throw InvalidInput(std::string(what) + ": points/masses length mismatch");
  const Eigen::Index d = a.points.front().size();
  for (const auto& p : a.points)
    if (p.size() != d || !p.allFinite())
      throw InvalidInput(std::string(what) + ": points must be finite with uniform dimension");
}

}  // namespace

DiscreteDistribution DiscreteDistribution::uniform(std::vector<Eigen::VectorXd> pts) {
  DiscreteDistribution d;
  const double w = pts.empty() ? 0.0 : 1.0 / static_cast<double>(pts.size());
  d.masses.assign(pts.size(), w);
  d.points = std::move(pts);
  return d;
}

NormalizedMasses normalize_masses(const std::vector<double>& masses) {
  NormalizedMasses out;
  std::vector<double> kept;
  for (std::size_t k = 0; k < masses.size(); ++k) {
    const double w = masses[k];
    if (!std::isfinite(w) || w < 0.0) throw InvalidInput("masses must be finite and >= 0");
    if (w == 0.0) continue;
    kept.push_back(w);
    out.index.push_back(k);
  }
  if (kept.empty()) throw InvalidInput("all masses are zero");
  const double total = compensated_sum(kept);
  if (!(std::abs(total - 1.0) < 1e-9))
    throw InvalidInput("mass balance violated: total mass " + std::to_string(total));
  for (double& w : kept) w /= total;
  out.mass = std::move(kept);
  return out;
}

void check_plan(const TransportPlan& plan, const std::vector<double>& supply,
                const std::vector<double>& demand, double tol) {
  std::vector<double> rs(supply.size(), 0.0), cs(demand.size(), 0.0);
  for (const auto& e : plan.entries) {
    if (e.i >= supply.size() || e.j >= demand.size())
      throw NumericalError("plan check: index out of range");
    if (!(e.mass >= -tol)) throw NumericalError("plan check: negative coupling mass");
    rs[e.i] += e.mass;
    cs[e.j] += e.mass;
  }
  for (std::size_t i = 0; i < supply.size(); ++i)
    if (std::abs(rs[i] - supply[i]) > tol)
      throw NumericalError("plan check: row " + std::to_string(i) + " sum is off");
  for (std::size_t j = 0; j < demand.size(); ++j)
    if (std::abs(cs[j] - demand[j]) > tol)
      throw NumericalError("plan check: column " + std::to_string(j) + " sum is off");
}

TransportPlan wasserstein_lp(const DiscreteDistribution& a, const DiscreteDistribution& b,
                             const LpOptions& opts) {
  check_dims(a, "wasserstein_lp");
  check_dims(b, "wasserstein_lp");
  if (a.dim() != b.dim()) throw InvalidInput("wasserstein_lp: dimension mismatch");
  if (!opts.scale.empty() && static_cast<Eigen::Index>(opts.scale.size()) != a.dim())
    throw InvalidInput("wasserstein_lp: scale length must equal the dimension");
  const NormalizedMasses na = normalize_masses(a.masses);
  const NormalizedMasses nb = normalize_masses(b.masses);
  const std::size_t m = na.mass.size(), n = nb.mass.size();
  if (static_cast<double>(m) * static_cast<double>(n) > opts.memory_budget)
    throw SizeError("wasserstein_lp: m*n = " + std::to_string(m * n) +
                    " coupling variables exceed the memory budget of " +
                    std::to_string(static_cast<long long>(opts.memory_budget)));
  std::vector<double> cost(m * n);
  parallel_for(m, [&](std::size_t i) {
    const Eigen::VectorXd& x = a.points[na.index[i]];
    for (std::size_t j = 0; j < n; ++j)
      cost[i * n + j] = weighted_sq(x, b.points[nb.index[j]], opts.scale);
  });
  TransportPlan plan = solve_transportation(na.mass, nb.mass, cost, opts);
  check_plan(plan, na.mass, nb.mass);
  for (auto& e : plan.entries) {
    e.i = na.index[e.i];
    e.j = nb.index[e.j];
  }
  return plan;
}

double wasserstein_dirac(const DiscreteDistribution& a, const Eigen::VectorXd& x_ref,
                         const std::vector<double>& scale) {
  check_dims(a, "wasserstein_dirac");
  if (a.dim() != x_ref.size()) throw InvalidInput("wasserstein_dirac: dimension mismatch");
  const NormalizedMasses na = normalize_masses(a.masses);
  double s = 0.0;
  for (std::size_t k = 0; k < na.mass.size(); ++k)
    s += na.mass[k] * weighted_sq(a.points[na.index[k]], x_ref, scale);
  return std::sqrt(s);
}

double wasserstein_dirac(const EnsembleSnapshot& snapshot, const Eigen::VectorXd& x_ref,
                         const std::vector<double>& scale) {
  DiscreteDistribution d;
  for (const auto& w : snapshot.samples) {
    d.points.push_back(w.x);
    d.masses.push_back(w.gamma);
  }
  return wasserstein_dirac(d, x_ref, scale);
}

double wasserstein_1d(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  check_dims(a, "wasserstein_1d");
  check_dims(b, "wasserstein_1d");
  if (a.dim() != 1 || b.dim() != 1) throw InvalidInput("wasserstein_1d: needs d = 1");
  auto sorted = [](const DiscreteDistribution& d) {
    const NormalizedMasses nm = normalize_masses(d.masses);
    std::vector<std::pair<double, double>> v;
    for (std::size_t k = 0; k < nm.mass.size(); ++k)
      v.emplace_back(d.points[nm.index[k]](0), nm.mass[k]);
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto va = sorted(a), vb = sorted(b);
  std::size_t i = 0, j = 0;
  double ra = va[0].second, rb = vb[0].second, w2 = 0.0;
  while (i < va.size() && j < vb.size()) {
    const double seg = std::min(ra, rb);
    const double d = va[i].first - vb[j].first;
    w2 += seg * d * d;
    if (ra < rb) {
      rb -= ra;
      if (++i < va.size()) ra = va[i].second;
    } else if (rb < ra) {
      ra -= rb;
      if (++j < vb.size()) rb = vb[j].second;
    } else {
      if (++i < va.size()) ra = va[i].second;
      if (++j < vb.size()) rb = vb[j].second;
    }
  }
  return std::sqrt(w2);
}

TransportPlan extended_wasserstein(const EnsembleSnapshot& snapshot,
                                   const Eigen::VectorXd& x_trim,
                                   const std::vector<double>& state_scale,
                                   const LpOptions& opts) {
  if (snapshot.samples.empty()) throw InvalidInput("extended_wasserstein: empty snapshot");
  const Eigen::Index nx = snapshot.samples.front().x.size();
  const Eigen::Index np = snapshot.samples.front().p.size();
  if (np == 0) throw InvalidInput("extended_wasserstein: snapshot has no parameter block");
  if (x_trim.size() != nx) throw InvalidInput("extended_wasserstein: x_trim dimension");
  if (!state_scale.empty() && static_cast<Eigen::Index>(state_scale.size()) != nx)
    throw InvalidInput("extended_wasserstein: scale length must equal the state dimension");
  Eigen::VectorXd s = Eigen::VectorXd::Ones(nx);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(state_scale.size()); ++k)
    s(k) = state_scale[static_cast<std::size_t>(k)];
  const Eigen::VectorXd ref = s.cwiseProduct(x_trim);
  DiscreteDistribution a, b;
  for (const auto& w : snapshot.samples) {
    Eigen::VectorXd pa(nx + np), pb(nx + np);
    pa << s.cwiseProduct(w.x), w.p;
    pb << ref, w.p;
    a.points.push_back(std::move(pa));
    b.points.push_back(std::move(pb));
    a.masses.push_back(w.gamma);
    b.masses.push_back(w.gamma);
  }
  LpOptions o = opts;
  o.scale.clear();
  return wasserstein_lp(a, b, o);
}

MarginalBound marginal_bound_check(const DiscreteDistribution& a,
                                   const DiscreteDistribution& b) {
  check_dims(a, "marginal_bound_check");
  check_dims(b, "marginal_bound_check");
  if (a.dim() != b.dim()) throw InvalidInput("marginal_bound_check: dimension mismatch");
  MarginalBound out;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < a.dim(); ++k) {
    DiscreteDistribution pa, pb;
    for (const auto& p : a.points) pa.points.push_back(Eigen::VectorXd::Constant(1, p(k)));
    for (const auto& p : b.points) pb.points.push_back(Eigen::VectorXd::Constant(1, p(k)));
    pa.masses = a.masses;
    pb.masses = b.masses;
    const double w = wasserstein_1d(pa, pb);
    out.W_axis.push_back(w);
    sum += w * w;
  }
  out.W_joint = wasserstein_lp(a, b).W;
  out.satisfied = sum <= out.W_joint * out.W_joint + 1e-9;
  return out;
}

}  // namespace otrobust

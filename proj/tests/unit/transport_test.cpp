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
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "otrobust/error.hpp"
#include "otrobust/transport.hpp"

namespace otrobust {
namespace {

using Eigen::VectorXd;

VectorXd v1(double a) { return VectorXd::Constant(1, a); }

std::vector<VectorXd> random_points(std::size_t n, int d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<VectorXd> pts(n, VectorXd(d));
  for (auto& p : pts)
    for (int k = 0; k < d; ++k) p(k) = nd(rng);
  return pts;
}

std::vector<double> random_masses(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> m(n);
  for (auto& x : m) x = u(rng);
  const double s = std::accumulate(m.begin(), m.end(), 0.0);
  for (auto& x : m) x /= s;
  return m;
}

DiscreteDistribution random_dist(std::size_t n, int d, std::mt19937_64& rng) {
  DiscreteDistribution a;
  a.points = random_points(n, d, rng);
  a.masses = random_masses(n, rng);
  return a;
}

// Equal-mass assignment problem solved by enumerating permutations.
double brute_force_w(const std::vector<VectorXd>& a, const std::vector<VectorXd>& b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) c += (a[i] - b[perm[i]]).squaredNorm();
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / static_cast<double>(a.size()));
}

TEST(WassersteinLp, SpecExamples) {
  std::mt19937_64 rng(1);
  const auto a = random_dist(7, 3, rng);
  const auto self = wasserstein_lp(a, a);
  EXPECT_NEAR(self.W, 0.0, 1e-12);
  for (const auto& e : self.entries)
    if (e.mass > 1e-15) EXPECT_EQ(e.i, e.j);

  const auto d0 = DiscreteDistribution::uniform({v1(0.0)});
  EXPECT_NEAR(wasserstein_lp(d0, DiscreteDistribution::uniform({v1(3.0)})).W, 3.0, 1e-12);
  EXPECT_NEAR(wasserstein_lp(DiscreteDistribution::uniform({v1(0.0), v1(1.0)}), d0).W,
              std::sqrt(0.5), 1e-12);
}

TEST(WassersteinLp, MatchesPermutationOracle) {
  std::mt19937_64 rng(2);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto pa = random_points(n, 2 + rep % 3, rng);
      const auto pb = random_points(n, 2 + rep % 3, rng);
      const double lp = wasserstein_lp(DiscreteDistribution::uniform(pa),
                                       DiscreteDistribution::uniform(pb)).W;
      EXPECT_NEAR(lp, brute_force_w(pa, pb), 1e-9) << "n=" << n;
    }
  }
}

TEST(WassersteinLp, MatchesQuantileOracleIn1d) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const auto a = random_dist(1 + rep % 13, 1, rng);
    const auto b = random_dist(1 + (rep * 7) % 17, 1, rng);
    EXPECT_NEAR(wasserstein_lp(a, b).W, wasserstein_1d(a, b), 1e-9);
  }
}

TEST(WassersteinLp, DantzigAndBlockPricingAgree) {
  std::mt19937_64 rng(4);
  const auto a = random_dist(40, 4, rng), b = random_dist(35, 4, rng);
  LpOptions dz;
  dz.pricing = Pricing::kDantzig;
  EXPECT_NEAR(wasserstein_lp(a, b).cost, wasserstein_lp(a, b, dz).cost, 1e-10);
}

TEST(WassersteinLp, MetricAxioms) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = random_dist(12, 3, rng), b = random_dist(9, 3, rng), c = random_dist(15, 3, rng);
    const double ab = wasserstein_lp(a, b).W, ba = wasserstein_lp(b, a).W;
    const double bc = wasserstein_lp(b, c).W, ac = wasserstein_lp(a, c).W;
    EXPECT_NEAR(ab, ba, 1e-9);
    EXPECT_LE(ac, ab + bc + 1e-9);
    EXPECT_NEAR(wasserstein_lp(a, a).W, 0.0, 1e-9);
  }
}

TEST(WassersteinLp, NoFeasiblePlanIsCheaper) {
  std::mt19937_64 rng(6);
  const auto a = random_dist(10, 2, rng), b = random_dist(8, 2, rng);
  double product = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      product += a.masses[i] * b.masses[j] * (a.points[i] - b.points[j]).squaredNorm();
  const auto plan = wasserstein_lp(a, b);
  EXPECT_LE(plan.cost, product + 1e-12);
  check_plan(plan, a.masses, b.masses);
  // Basic solution: at most m + n - 1 positive entries.
  std::size_t pos = 0;
  for (const auto& e : plan.entries) pos += e.mass > 0.0;
  EXPECT_LE(pos, a.size() + b.size() - 1);
}

TEST(WassersteinLp, ScaleWeightsCoordinates) {
  DiscreteDistribution a = DiscreteDistribution::uniform({VectorXd::Zero(2)});
  VectorXd p(2);
  p << 1.0, 2.0;
  LpOptions o;
  o.scale = {3.0, 0.5};
  EXPECT_NEAR(wasserstein_lp(a, DiscreteDistribution::uniform({p}), o).W, std::sqrt(9.0 + 1.0), 1e-12);
}

TEST(WassersteinLp, DegenerateAndLargeInstancesStayFeasible) {
  // Many ties in cost; exercises the anti-cycling path.
  std::vector<VectorXd> grid;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) grid.push_back((VectorXd(2) << i, j).finished());
  auto shifted = grid;
  for (auto& p : shifted) p(0) += 1.0;
  const auto a = DiscreteDistribution::uniform(grid), b = DiscreteDistribution::uniform(shifted);
  const auto plan = wasserstein_lp(a, b);
  EXPECT_NEAR(plan.W, 1.0, 1e-9);
  check_plan(plan, a.masses, b.masses);

  std::mt19937_64 rng(7);
  const auto big_a = random_dist(300, 4, rng), big_b = random_dist(250, 4, rng);
  const auto big = wasserstein_lp(big_a, big_b);
  check_plan(big, big_a.masses, big_b.masses);
}

TEST(Masses, ZeroMassesDroppedNearOneRenormalisedOtherwiseRejected) {
  const auto nm = normalize_masses({0.5, 0.0, 0.5 + 5e-10});
  ASSERT_EQ(nm.mass.size(), 2u);
  EXPECT_EQ(nm.index[1], 2u);
  EXPECT_NEAR(nm.mass[0] + nm.mass[1], 1.0, 1e-15);
  EXPECT_THROW(normalize_masses({0.5, 0.6}), InvalidInput);
  EXPECT_THROW(normalize_masses({1.5, -0.5}), InvalidInput);

  DiscreteDistribution a;
  a.points = {v1(0.0), v1(5.0), v1(1.0)};
  a.masses = {0.5, 0.0, 0.5};
  const auto plan = wasserstein_lp(a, DiscreteDistribution::uniform({v1(0.0)}));
  EXPECT_NEAR(plan.W, std::sqrt(0.5), 1e-12);
  for (const auto& e : plan.entries) EXPECT_NE(e.i, 1u);
}

TEST(WassersteinLp, InputErrors) {
  const auto a = DiscreteDistribution::uniform({v1(0.0), v1(1.0)});
  const auto b2 = DiscreteDistribution::uniform({VectorXd::Zero(2)});
  EXPECT_THROW(wasserstein_lp(a, b2), InvalidInput);
  EXPECT_THROW(wasserstein_lp(a, DiscreteDistribution{}), InvalidInput);
  DiscreteDistribution bad = a;
  bad.points[0](0) = NAN;
  EXPECT_THROW(wasserstein_lp(bad, a), InvalidInput);
}

TEST(WassersteinLp, SizeErrorNamesCouplingCount) {
  std::mt19937_64 rng(8);
  const auto a = random_dist(20, 1, rng), b = random_dist(30, 1, rng);
  LpOptions o;
  o.memory_budget = 500;
  try {
    wasserstein_lp(a, b, o);
    FAIL() << "expected SizeError";
  } catch (const SizeError& e) {
    EXPECT_NE(std::string(e.what()).find("600"), std::string::npos);
  }
}

TEST(CheckPlan, RejectsInfeasiblePlans) {
  TransportPlan p;
  p.entries = {{0, 0, 0.5}, {1, 0, 0.5}};
  EXPECT_NO_THROW(check_plan(p, {0.5, 0.5}, {1.0}));
  EXPECT_THROW(check_plan(p, {0.4, 0.6}, {1.0}), NumericalError);
  p.entries[0].mass = -0.1;
  EXPECT_THROW(check_plan(p, {0.5, 0.5}, {1.0}), NumericalError);
}

TEST(WassersteinDirac, Examples) {
  const VectorXd ref = VectorXd::Constant(3, 2.0);
  EXPECT_EQ(wasserstein_dirac(DiscreteDistribution::uniform({ref, ref}), ref), 0.0);
  VectorXd e1 = VectorXd::Zero(3);
  e1(0) = 1.0;
  EXPECT_NEAR(wasserstein_dirac(DiscreteDistribution::uniform({ref + e1, ref - e1}), ref), 1.0, 1e-15);
  EXPECT_NEAR(wasserstein_dirac(DiscreteDistribution::uniform({ref + 4.0 * e1}), ref), 4.0, 1e-15);
}

TEST(WassersteinDirac, MatchesLpAgainstPointMass) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = random_dist(25, 4, rng);
    const VectorXd ref = random_points(1, 4, rng)[0];
    const std::vector<double> scale = {57.3, 1.0, 57.3, 57.3};
    LpOptions o;
    o.scale = scale;
    EXPECT_NEAR(wasserstein_dirac(a, ref, scale),
                wasserstein_lp(a, DiscreteDistribution::uniform({ref}), o).W, 1e-9);
  }
}

TEST(WassersteinDirac, SnapshotOverloadUsesGamma) {
  EnsembleSnapshot s;
  for (double x : {1.0, 3.0}) {
    WeightedSample w;
    w.x = v1(x);
    w.gamma = x == 1.0 ? 0.75 : 0.25;
    s.samples.push_back(w);
  }
  EXPECT_NEAR(wasserstein_dirac(s, v1(0.0)), std::sqrt(0.75 + 0.25 * 9.0), 1e-15);
}

TEST(Wasserstein1d, Examples) {
  const auto a = DiscreteDistribution::uniform({v1(0.0), v1(1.0)});
  EXPECT_EQ(wasserstein_1d(a, a), 0.0);
  EXPECT_EQ(wasserstein_1d(DiscreteDistribution::uniform({v1(0.0)}),
                           DiscreteDistribution::uniform({v1(3.0)})),
            3.0);
  EXPECT_NEAR(wasserstein_1d(a, DiscreteDistribution::uniform({v1(3.0), v1(2.0)})), 2.0, 1e-15);
  EXPECT_THROW(wasserstein_1d(DiscreteDistribution::uniform({VectorXd::Zero(2)}),
                              DiscreteDistribution::uniform({VectorXd::Zero(2)})),
               InvalidInput);
}

EnsembleSnapshot param_snapshot(const std::vector<VectorXd>& xs, const std::vector<VectorXd>& ps) {
  EnsembleSnapshot s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    WeightedSample w;
    w.x = xs[i];
    w.p = ps[i];
    w.gamma = 1.0 / static_cast<double>(xs.size());
    s.samples.push_back(w);
  }
  return s;
}

TEST(ExtendedWasserstein, AtTrimIsZero) {
  const VectorXd trim = VectorXd::Constant(4, 0.3);
  std::mt19937_64 rng(10);
  const auto ps = random_points(5, 3, rng);
  EXPECT_NEAR(extended_wasserstein(param_snapshot(std::vector<VectorXd>(5, trim), ps), trim).W, 0.0,
              1e-12);
}

TEST(ExtendedWasserstein, SingleSampleIsEuclideanDistance) {
  const VectorXd trim = VectorXd::Zero(4);
  VectorXd x(4);
  x << 0.1, -2.0, 0.05, 0.3;
  const auto s = param_snapshot({x}, {VectorXd::Constant(3, 1.0)});
  EXPECT_NEAR(extended_wasserstein(s, trim).W, x.norm(), 1e-12);
  const std::vector<double> sc = {2.0, 1.0, 2.0, 2.0};
  EXPECT_NEAR(extended_wasserstein(s, trim, sc).W,
              std::sqrt(4 * 0.01 + 4.0 + 4 * 0.0025 + 4 * 0.09), 1e-12);
}

TEST(ExtendedWasserstein, TwoSampleBruteForce) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto xs = random_points(2, 4, rng);
    const auto ps = random_points(2, 3, rng);
    const VectorXd trim = random_points(1, 4, rng)[0];
    // Feasible plans: mu = [[t, 1/2 - t], [1/2 - t, t]], t in [0, 1/2]; cost is
    // linear in t so the optimum sits at an end point.
    auto c = [&](int i, int j) { return (xs[i] - trim).squaredNorm() + (ps[i] - ps[j]).squaredNorm(); };
    const double diag = 0.5 * (c(0, 0) + c(1, 1)), off = 0.5 * (c(0, 1) + c(1, 0));
    EXPECT_NEAR(extended_wasserstein(param_snapshot(xs, ps), trim).W, std::sqrt(std::min(diag, off)),
                1e-9);
  }
}

TEST(ExtendedWasserstein, Errors) {
  EXPECT_THROW(extended_wasserstein(param_snapshot({VectorXd::Zero(4)}, {VectorXd()}), VectorXd::Zero(4)),
               InvalidInput);
  EXPECT_THROW(extended_wasserstein(param_snapshot({VectorXd::Zero(4)}, {VectorXd::Zero(3)}),
                                    VectorXd::Zero(2)),
               InvalidInput);
  std::mt19937_64 rng(12);
  const auto s = param_snapshot(random_points(30, 4, rng), random_points(30, 3, rng));
  LpOptions o;
  o.memory_budget = 100;
  EXPECT_THROW(extended_wasserstein(s, VectorXd::Zero(4), {}, o), SizeError);
}

TEST(MarginalBound, OneDimensionIsEquality) {
  std::mt19937_64 rng(13);
  const auto a = random_dist(9, 1, rng), b = random_dist(11, 1, rng);
  const auto r = marginal_bound_check(a, b);
  EXPECT_TRUE(r.satisfied);
  EXPECT_NEAR(r.W_axis[0] * r.W_axis[0], r.W_joint * r.W_joint, 1e-9);
}

TEST(MarginalBound, HoldsOnRandomClouds) {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    const auto r = marginal_bound_check(random_dist(15, 2 + rep % 3, rng), random_dist(12, 2 + rep % 3, rng));
    EXPECT_TRUE(r.satisfied);
  }
}

TEST(MarginalBound, ProductCloudsAttainEquality) {
  // Grid clouds: the product of the axis-wise monotone couplings is feasible
  // and optimal, so the bound is tight.
  std::vector<VectorXd> a, b;
  for (double x : {0.0, 1.0, 3.0})
    for (double y : {-1.0, 2.0}) {
      a.push_back((VectorXd(2) << x, y).finished());
      b.push_back((VectorXd(2) << 2.0 * x + 0.5, y - 4.0).finished());
    }
  const auto r = marginal_bound_check(DiscreteDistribution::uniform(a), DiscreteDistribution::uniform(b));
  const double sum = r.W_axis[0] * r.W_axis[0] + r.W_axis[1] * r.W_axis[1];
  EXPECT_NEAR(sum, r.W_joint * r.W_joint, 1e-9);
  EXPECT_NEAR(r.W_joint, brute_force_w(a, b), 1e-9);
}

}  // namespace
}  // namespace otrobust

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


#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "otrobust/error.hpp"
#include "otrobust/sampling.hpp"

namespace otrobust {
namespace {

using Eigen::VectorXd;

BoxDomain unit(int d) { return BoxDomain(VectorXd::Zero(d), VectorXd::Ones(d)); }

TEST(Halton, BaseTwoSequence) {
  const auto pts = halton(4, unit(1), 0);
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_EQ(pts[0](0), 0.5);
  EXPECT_EQ(pts[1](0), 0.25);
  EXPECT_EQ(pts[2](0), 0.75);
  EXPECT_EQ(pts[3](0), 0.125);
}

TEST(Halton, FirstTwoDimensionalPoint) {
  const auto p = halton(1, unit(2), 0).front();
  EXPECT_EQ(p(0), 0.5);
  EXPECT_NEAR(p(1), 1.0 / 3.0, 1e-16);
}

TEST(Halton, AffineMap) {
  const BoxDomain box(VectorXd::Constant(1, 0.0), VectorXd::Constant(1, 10.0));
  EXPECT_EQ(halton(1, box, 0).front()(0), 5.0);
}

TEST(Halton, SkipShiftsSequence) {
  const auto a = halton(30, unit(3), 0);
  const auto b = halton(10, unit(3), 20);
  for (int k = 0; k < 10; ++k) EXPECT_TRUE(a[20 + k] == b[k]);
}

TEST(Halton, PrimesAndDimensionLimit) {
  const auto p = first_primes(6);
  EXPECT_EQ(p, (std::vector<unsigned>{2, 3, 5, 7, 11, 13}));
  EXPECT_THROW(first_primes(17), InvalidInput);
  EXPECT_EQ(radical_inverse(6, 3), 2.0 / 9.0);
}

TEST(Halton, PointsInsideBox) {
  VectorXd lo(4), hi(4);
  lo << -0.6, 340, -0.25, -1.2;
  hi << 0.6, 470, 0.98, 1.2;
  const BoxDomain box(lo, hi);
  for (const auto& p : halton(500, box)) EXPECT_TRUE(box.contains(p));
}

TEST(Box, RejectsEmptyInterval) {
  EXPECT_THROW(BoxDomain(VectorXd::Ones(2), VectorXd::Ones(2)), InvalidInput);
  EXPECT_THROW(BoxDomain(VectorXd::Ones(2), VectorXd::Zero(3)), InvalidInput);
}

TEST(InitialPdf, UniformIsReciprocalVolumeOnBox) {
  VectorXd lo(3), hi(3);
  lo << 0, -1, 2;
  hi << 2, 1, 7;
  const BoxDomain box(lo, hi);
  const InitialPdf pdf = InitialPdf::uniform(box);
  for (const auto& p : halton(50, box)) EXPECT_DOUBLE_EQ(pdf(p), 1.0 / 20.0);
  VectorXd out(3);
  out << 3, 0, 3;
  EXPECT_EQ(pdf(out), 0.0);
}

TEST(Mcmc, UniformMeanNearCentre) {
  const BoxDomain box(VectorXd::Constant(2, -1.0), VectorXd::Constant(2, 3.0));
  const std::size_t n = 4000;
  const McmcResult r = mcmc_sample(InitialPdf::uniform(box), n, 42);
  ASSERT_EQ(r.samples.size(), n);
  VectorXd mean = VectorXd::Zero(2);
  for (const auto& s : r.samples) {
    EXPECT_TRUE(box.contains(s));
    mean += s / static_cast<double>(n);
  }
  // Correlated chain: inflate the i.i.d. bound by the integrated
  // autocorrelation, which stays below 25 for this proposal.
  const double sigma = 4.0 / std::sqrt(12.0);
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(mean(k), 1.0, 4.0 * sigma * std::sqrt(25.0 / n));
}

TEST(Mcmc, NarrowTargetShrinksSpread) {
  const BoxDomain box(VectorXd::Constant(1, -1.0), VectorXd::Constant(1, 1.0));
  auto spread = [&](double s) {
    const auto pdf = InitialPdf::truncated_gaussian(VectorXd::Zero(1), VectorXd::Constant(1, s), box);
    const auto r = mcmc_sample(pdf, 3000, 5);
    double m = 0, v = 0;
    for (const auto& x : r.samples) m += x(0) / 3000.0;
    for (const auto& x : r.samples) v += (x(0) - m) * (x(0) - m) / 3000.0;
    return std::sqrt(v);
  };
  const double wide = spread(0.3), narrow = spread(0.03);
  EXPECT_LT(narrow, 0.5 * wide);
  EXPECT_NEAR(narrow, 0.03, 0.015);
}

TEST(Mcmc, SeedDeterminism) {
  const auto pdf = InitialPdf::uniform(unit(3));
  const auto a = mcmc_sample(pdf, 200, 9), b = mcmc_sample(pdf, 200, 9);
  for (std::size_t k = 0; k < a.samples.size(); ++k) EXPECT_TRUE(a.samples[k] == b.samples[k]);
  const auto c = mcmc_sample(pdf, 200, 10);
  EXPECT_FALSE(a.samples.back() == c.samples.back());
}

TEST(Mcmc, NeedsSupport) {
  InitialPdf pdf;
  pdf.density = [](const VectorXd&) { return 1.0; };
  EXPECT_THROW(mcmc_sample(pdf, 10, 1), InvalidInput);
}

TEST(WeightedCloud, MassesSumToOneExactly) {
  for (std::size_t n : {3u, 200u, 2000u}) {
    const BoxDomain box = unit(4);
    const auto cloud = weighted_cloud(halton(n, box), InitialPdf::uniform(box));
    std::vector<double> g;
    for (const auto& w : cloud) g.push_back(w.gamma);
    EXPECT_EQ(compensated_sum(g), 1.0) << n;
  }
}

TEST(WeightedCloud, OffSupportRejected) {
  const BoxDomain box = unit(2);
  std::vector<VectorXd> pts = halton(5, box);
  pts.push_back(VectorXd::Constant(2, 2.0));
  std::size_t rejected = 0;
  const auto cloud = weighted_cloud(pts, InitialPdf::uniform(box), -1, &rejected);
  EXPECT_EQ(rejected, 1u);
  EXPECT_EQ(cloud.size(), 5u);
  EXPECT_EQ(cloud.front().gamma, 0.2);
}

TEST(WeightedCloud, SplitsStateAndParameters) {
  const BoxDomain box = unit(5);
  const auto cloud = weighted_cloud(halton(4, box), InitialPdf::uniform(box), 3);
  EXPECT_EQ(cloud.front().x.size(), 3);
  EXPECT_EQ(cloud.front().p.size(), 2);
  EXPECT_EQ(cloud.front().phi, 1.0);
}

TEST(CompensatedSum, RecoversCancelledDigits) {
  std::vector<double> v = {1e16, 1.0, -1e16, 1.0};
  EXPECT_EQ(compensated_sum(v), 2.0);
}

}  // namespace
}  // namespace otrobust

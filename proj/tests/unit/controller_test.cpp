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


#include <chrono>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "otrobust/controller.hpp"
#include "otrobust/error.hpp"
#include "otrobust/trim.hpp"
#include "otrobust/units.hpp"

namespace otrobust {
namespace {

using Eigen::MatrixXd;

const AeroTables& T() { return stevens_lewis_tables(); }

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

TEST(Care, ScalarExamples) {
  EXPECT_NEAR(solve_care(scalar(0), scalar(1), scalar(1), scalar(1))(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(solve_care(scalar(-1), scalar(1), scalar(1), scalar(1))(0, 0), std::sqrt(2.0) - 1.0,
              1e-12);
  // Unstable scalar: -P^2 + 2P + 1 = 0, stabilising root 1 + sqrt 2.
  EXPECT_NEAR(solve_care(scalar(1), scalar(1), scalar(1), scalar(1))(0, 0), 1.0 + std::sqrt(2.0),
              1e-12);
}

TEST(Care, ZeroWeightOnStablePlant) {
  MatrixXd A(2, 2);
  A << -1, 2, 0, -3;
  const MatrixXd P = solve_care(A, MatrixXd::Identity(2, 1) * 1.0, MatrixXd::Zero(2, 2),
                                MatrixXd::Identity(1, 1));
  EXPECT_LT(P.norm(), 1e-12);
}

TEST(Care, DoubleIntegratorClosedForm) {
  MatrixXd A(2, 2), B(2, 1);
  A << 0, 1, 0, 0;
  B << 0, 1;
  const MatrixXd P = solve_care(A, B, MatrixXd::Identity(2, 2), scalar(1));
  const double s3 = std::sqrt(3.0);
  EXPECT_NEAR(P(0, 0), s3, 1e-10);
  EXPECT_NEAR(P(0, 1), 1.0, 1e-10);
  EXPECT_NEAR(P(1, 1), s3, 1e-10);
}

TEST(Care, RandomSystemsResidualAndStability) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5, m = 1 + trial % 2;
    MatrixXd A(n, n), B(n, m), L(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = nd(rng), L(i, j) = nd(rng);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) B(i, j) = nd(rng);
    const MatrixXd Q = L * L.transpose() + MatrixXd::Identity(n, n);
    const MatrixXd R = MatrixXd::Identity(m, m);
    const MatrixXd P = solve_care(A, B, Q, R);
    EXPECT_LT(care_residual(A, B, Q, R, P), 1e-8 * Q.norm());
    EXPECT_LT((P - P.transpose()).norm(), 1e-9 * (1.0 + P.norm()));
    const MatrixXd K = lqr_gain_matrix(A, B, Q, R);
    EXPECT_LT(spectral_abscissa(A + B * K), 0.0);
  }
}

TEST(Care, UnstabilisableRejected) {
  MatrixXd A(2, 2), B(2, 1);
  A << 1, 0, 0, 1;
  B << 1, 0;  // second mode unstable and unreachable
  EXPECT_THROW(solve_care(A, B, MatrixXd::Identity(2, 2), scalar(1)), SynthesisError);
}

TEST(LqrGain, ScalarSignConvention) {
  // u = u_trim + K dx with K = -R^-1 B' P.
  EXPECT_NEAR(lqr_gain_matrix(scalar(-1), scalar(1), scalar(1), scalar(1))(0, 0),
              -(std::sqrt(2.0) - 1.0), 1e-12);
}

TEST(Linearize, ExactForLinearMaps) {
  Mat4 M;
  M << -1, 2, 0.5, 0, 0.1, -3, 0, 1, 0, 0.2, -0.7, 4, 1, 0, 0, -2;
  Mat42 N;
  N << 1, 0, 0, 2, 3, 1, 0, 0.5;
  const PlantRhs f = [&](const Vec4& x, const Vec2& u) -> Vec4 { return M * x + N * u; };
  const LinearModel lm = linearize(f, Vec4(0.1, 2, 0.2, 0), Vec2(0.3, 0.1));
  EXPECT_LT((lm.A - M).norm(), 1e-8 * M.norm());
  EXPECT_LT((lm.B - N).norm(), 1e-8 * N.norm());
  EXPECT_TRUE(lm.Bw == lm.B.col(1));
}

TEST(Linearize, ConstantField) {
  const PlantRhs f = [](const Vec4&, const Vec2&) -> Vec4 { return Vec4(1, 2, 3, 4); };
  const LinearModel lm = linearize(f, Vec4::Zero(), Vec2::Zero());
  EXPECT_TRUE(lm.A.isZero(0.0));
  EXPECT_TRUE(lm.B.isZero(0.0));
}

class Nominal : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    trim_ = new TrimPoint(find_trim(407.8942, deg2rad(6.1650), AircraftParams{}, T()));
    model_ = new LinearModel(linearize_f16(trim_->x_trim, trim_->u_trim, AircraftParams{}, T()));
  }
  static void TearDownTestSuite() {
    delete trim_;
    delete model_;
  }
  static TrimPoint* trim_;
  static LinearModel* model_;
};
TrimPoint* Nominal::trim_ = nullptr;
LinearModel* Nominal::model_ = nullptr;

TEST_F(Nominal, OpenLoopInClosedLeftHalfPlane) {
  EXPECT_LE(spectral_abscissa(model_->A), 1e-9);
}

TEST_F(Nominal, GainMatchesPublishedWithinTolerance) {
  const Mat24 K = lqr_gain(*model_);
  Mat24 ref;
  ref << 7144.9, -400.58, -1355.8, 2002.8, 0.7419, -0.0113, -0.2053, 0.3221;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(std::signbit(K(i, j)), std::signbit(ref(i, j))) << i << "," << j;
      EXPECT_NEAR(K(i, j) / ref(i, j), 1.0, 0.25) << i << "," << j;
    }
  EXPECT_LT(spectral_abscissa(model_->A + model_->B * K), 0.0);
  LqrWeights w;
  const MatrixXd P = solve_care(model_->A, model_->B, w.Q, w.R);
  EXPECT_LT(care_residual(model_->A, model_->B, w.Q, w.R, P), 1e-8 * w.Q.norm());
}

TEST_F(Nominal, LqrControlIsAffine) {
  const Mat24 K = lqr_gain(*model_);
  const ControlInput u0 = lqr_control(trim_->x_trim, K, *trim_);
  EXPECT_EQ(u0.T, trim_->u_trim.T);
  EXPECT_EQ(u0.delta_e, trim_->u_trim.delta_e);
  LongitudinalState x1 = trim_->x_trim, x2 = trim_->x_trim;
  x1.theta += deg2rad(1.0);
  x2.theta += deg2rad(2.0);
  const ControlInput u1 = lqr_control(x1, K, *trim_), u2 = lqr_control(x2, K, *trim_);
  EXPECT_NEAR(u2.T - u0.T, 2.0 * (u1.T - u0.T), 1e-8);
  EXPECT_NEAR(u1.T - u0.T, K(0, 0) * deg2rad(1.0), 1e-9);
}

TEST(Weights, Validation) {
  LqrWeights w;
  EXPECT_NO_THROW(w.validate());
  w.R(0, 0) = 0.0;
  EXPECT_THROW(w.validate(), InvalidInput);
  LqrWeights v;
  v.Q(0, 1) = 1.0;  // asymmetric
  EXPECT_THROW(v.validate(), InvalidInput);
}

class Schedule : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const TrimPoint ref = find_trim(407.8942, deg2rad(6.1650), AircraftParams{}, T());
    const auto t0 = std::chrono::steady_clock::now();
    s_ = new GainSchedule(build_schedule(trim_grid(default_trim_grid(), AircraftParams{}, T()),
                                         LqrWeights{}, AircraftParams{}, T(), ref));
    secs_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  static void TearDownTestSuite() { delete s_; }
  static GainSchedule* s_;
  static double secs_;
};
GainSchedule* Schedule::s_ = nullptr;
double Schedule::secs_ = 0.0;

TEST_F(Schedule, AllNodesStabilisedSomeOpenLoopUnstable) {
  ASSERT_EQ(s_->size(), 100u);
  int unstable = 0;
  for (std::size_t k = 0; k < s_->size(); ++k) {
    EXPECT_LT(s_->closed_loop_abscissa[k], 0.0) << "node " << k;
    unstable += s_->open_loop_abscissa[k] > 0.0;
  }
  EXPECT_GT(unstable, 0);
  EXPECT_LT(secs_, 30.0);
}

TEST_F(Schedule, InterpolationIdentityAtNodes) {
  for (std::size_t i = 0; i < s_->V_nodes.size(); ++i)
    for (std::size_t j = 0; j < s_->alpha_nodes.size(); ++j) {
      const auto smp = interpolate_schedule(*s_, s_->V_nodes[i], s_->alpha_nodes[j]);
      const std::size_t k = s_->index(i, j);
      EXPECT_LT((smp.K - s_->gains[k]).norm(), 1e-12 * (1.0 + s_->gains[k].norm()));
      EXPECT_LT((smp.u_trim - s_->trims[k].u_trim.vec()).norm(), 1e-9);
    }
}

TEST_F(Schedule, MidpointInVIsMean) {
  const double V = 0.5 * (s_->V_nodes[2] + s_->V_nodes[3]);
  const auto smp = interpolate_schedule(*s_, V, s_->alpha_nodes[4]);
  const Mat24 mean = 0.5 * (s_->gains[s_->index(2, 4)] + s_->gains[s_->index(3, 4)]);
  EXPECT_LT((smp.K - mean).norm(), 1e-9 * (1.0 + mean.norm()));
}

TEST_F(Schedule, ClampsBelowGrid) {
  const auto a = interpolate_schedule(*s_, 40.0, s_->alpha_nodes[3]);
  const auto b = interpolate_schedule(*s_, s_->V_nodes.front(), s_->alpha_nodes[3]);
  EXPECT_TRUE(a.K == b.K);
}

TEST_F(Schedule, InterpolatedModeReturnsNodeTrimAtNode) {
  GainSchedule s = *s_;
  s.mode = GsTrimMode::kInterpolated;
  const TrimPoint& node = s.trims[s.index(5, 2)];
  const ControlInput u = gs_control(node.x_trim, s);
  EXPECT_NEAR(u.T, node.u_trim.T, 1e-6);
  EXPECT_NEAR(u.delta_e, node.u_trim.delta_e, 1e-10);
}

TEST_F(Schedule, JsonRoundTrip) {
  const GainSchedule back = parse_schedule(schedule_to_json(*s_));
  ASSERT_EQ(back.size(), s_->size());
  for (std::size_t k = 0; k < back.size(); ++k)
    EXPECT_LT((back.gains[k] - s_->gains[k]).norm(), 1e-9 * (1.0 + s_->gains[k].norm()));
  EXPECT_EQ(back.mode, s_->mode);
}

TEST(ScheduleSingle, DegeneratesToLqr) {
  const TrimPoint tp = find_trim(407.8942, deg2rad(6.1650), AircraftParams{}, T());
  const GainSchedule s = build_schedule({tp}, LqrWeights{}, AircraftParams{}, T(), tp,
                                        GsTrimMode::kInterpolated);
  const Mat24 K = lqr_gain(linearize_f16(tp.x_trim, tp.u_trim, AircraftParams{}, T()));
  LongitudinalState x = tp.x_trim;
  x.theta += 0.05;
  x.V += 12.0;
  x.q -= 0.02;
  const ControlInput a = gs_control(x, s), b = lqr_control(x, K, tp);
  EXPECT_NEAR(a.T, b.T, 1e-6 * std::abs(b.T));
  EXPECT_NEAR(a.delta_e, b.delta_e, 1e-9);
}

TEST(ScheduleErrors, NonConvergedNodeRejected) {
  TrimPoint bad = find_trim(407.8942, deg2rad(6.1650), AircraftParams{}, T());
  bad.converged = false;
  EXPECT_THROW(build_schedule({bad}, LqrWeights{}, AircraftParams{}, T(), bad), InvalidInput);
}

}  // namespace
}  // namespace otrobust

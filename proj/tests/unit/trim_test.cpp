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

#include <gtest/gtest.h>

#include "otrobust/error.hpp"
#include "otrobust/trim.hpp"
#include "otrobust/units.hpp"

namespace otrobust {
namespace {

const AeroTables& T() { return stevens_lewis_tables(); }

TEST(FindTrim, NominalFlightCondition) {
  const auto t0 = std::chrono::steady_clock::now();
  const TrimPoint tp = find_trim(407.8942, deg2rad(6.1650), AircraftParams{}, T());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_TRUE(tp.converged);
  EXPECT_NEAR(rad2deg(tp.x_trim.theta), 2.8190, 0.3);
  EXPECT_NEAR(rad2deg(tp.u_trim.delta_e), -2.9737, 0.5);
  EXPECT_NEAR(tp.u_trim.T, 1000.0, 50.0);
  EXPECT_TRUE(tp.thrust_bound_active);
  EXPECT_LT(tp.residual, 1e-8);
  EXPECT_LT(secs, 1.0);
}

TEST(FindTrim, ResidualMatchesDynamics) {
  const TrimPoint tp = find_trim(407.8942, deg2rad(6.1650), AircraftParams{}, T());
  EXPECT_NEAR(trim_residual(tp.x_trim, tp.u_trim, AircraftParams{}, T()), tp.residual, 1e-15);
  const Vec4 d = dynamics(tp.x_trim, tp.u_trim, AircraftParams{}, T());
  EXPECT_LE(Eigen::Vector3d(d(1) / 100.0, d(2), d(3)).norm(), tp.residual + 1e-18);
}

TEST(FindTrim, InteriorSolutionHasZeroPitchRate) {
  // Above idle thrust and with lift balancing weight, so no bound is active.
  const TrimPoint tp = find_trim(600.0, deg2rad(2.0), AircraftParams{}, T());
  ASSERT_TRUE(tp.converged);
  EXPECT_FALSE(tp.thrust_bound_active);
  EXPECT_EQ(tp.x_trim.q, 0.0);
  EXPECT_LT(tp.residual, 1e-8);
}

TEST(FindTrim, RejectsBadInput) {
  EXPECT_THROW(find_trim(0.0, 0.1, AircraftParams{}, T()), InvalidInput);
  EXPECT_THROW(find_trim(400.0, std::nan(""), AircraftParams{}, T()), InvalidInput);
}

TEST(FindTrim, Deterministic) {
  const TrimPoint a = find_trim(350.0, deg2rad(12.0), AircraftParams{}, T());
  const TrimPoint b = find_trim(350.0, deg2rad(12.0), AircraftParams{}, T());
  EXPECT_EQ(a.x_trim.theta, b.x_trim.theta);
  EXPECT_EQ(a.u_trim.T, b.u_trim.T);
  EXPECT_EQ(a.u_trim.delta_e, b.u_trim.delta_e);
  EXPECT_EQ(a.residual, b.residual);
}

TEST(TrimGrid, DefaultLatticeConvergesEverywhere) {
  const auto nodes = default_trim_grid();
  ASSERT_EQ(nodes.size(), 100u);
  EXPECT_DOUBLE_EQ(nodes.front().V, 100.0);
  EXPECT_DOUBLE_EQ(nodes.back().V, 1000.0);
  EXPECT_NEAR(rad2deg(nodes[9].alpha), 45.0, 1e-12);
  const auto tps = trim_grid(nodes, AircraftParams{}, T());
  ASSERT_EQ(tps.size(), 100u);
  const double de_max = deg2rad(kElevatorMaxDeg);
  for (std::size_t i = 0; i < tps.size(); ++i) {
    EXPECT_TRUE(tps[i].converged) << "node " << i;
    EXPECT_EQ(tps[i].x_trim.V, nodes[i].V);
    EXPECT_EQ(tps[i].x_trim.alpha, nodes[i].alpha);
    // Bound feasibility: saturation leaves the trim input alone.
    const ControlInput s = saturate(tps[i].u_trim);
    EXPECT_EQ(s.T, tps[i].u_trim.T);
    EXPECT_EQ(s.delta_e, tps[i].u_trim.delta_e);
    EXPECT_LE(std::abs(tps[i].u_trim.delta_e), de_max);
  }
}

TEST(TrimGrid, SingletonEqualsFindTrim) {
  const TrimNode n{100.0, deg2rad(45.0)};
  const auto tps = trim_grid({n}, AircraftParams{}, T());
  const TrimPoint tp = find_trim(n.V, n.alpha, AircraftParams{}, T());
  ASSERT_EQ(tps.size(), 1u);
  EXPECT_EQ(tps[0].x_trim.theta, tp.x_trim.theta);
  EXPECT_EQ(tps[0].u_trim.T, tp.u_trim.T);
  EXPECT_EQ(tps[0].converged, tp.converged);
}

TEST(TrimGrid, ResidualNeverAboveInitialGuess) {
  for (const auto& n : default_trim_grid(4, 4)) {
    const TrimPoint tp = find_trim(n.V, n.alpha, AircraftParams{}, T());
    const double r0 = trim_residual({n.alpha, n.V, n.alpha, 0.0}, {5000.0, 0.0}, AircraftParams{}, T());
    EXPECT_LE(tp.residual, r0);
  }
}

TEST(TrimJson, RoundTrip) {
  const TrimPoint tp = find_trim(407.8942, deg2rad(6.1650), AircraftParams{}, T());
  const TrimPoint back = parse_trim_point(trim_point_to_json(tp));
  EXPECT_NEAR(back.x_trim.theta, tp.x_trim.theta, 1e-15);
  EXPECT_NEAR(back.x_trim.alpha, tp.x_trim.alpha, 1e-15);
  EXPECT_EQ(back.u_trim.T, tp.u_trim.T);
  EXPECT_EQ(back.converged, tp.converged);
  const auto many = parse_trim_points(trim_points_to_json({tp, tp}));
  EXPECT_EQ(many.size(), 2u);
  EXPECT_THROW(parse_trim_point("[1, 2"), InvalidInput);
}

}  // namespace
}  // namespace otrobust

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
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "otrobust/error.hpp"
#include "otrobust/io.hpp"
#include "otrobust/signal.hpp"

namespace otrobust {
namespace {

TEST(DominantFrequency, RecoversSineOnWindow) {
  std::vector<double> t, y;
  for (int k = 0; k <= 2000; ++k) {
    t.push_back(0.01 * k);
    y.push_back(3.0 + std::sin(2.0 * t.back()) + 0.2 * std::sin(7.0 * t.back()));
  }
  const auto p = dominant_frequency(t, y, 10.0, 20.0);
  EXPECT_EQ(p.samples, 1001u);
  // Bin width 2 pi / 10 s.
  EXPECT_NEAR(p.omega, 2.0, 2.0 * std::numbers::pi / 10.0);
}

TEST(DominantFrequency, RejectsShortOrMismatchedInput) {
  EXPECT_THROW(dominant_frequency({0.0, 1.0}, {0.0}, 0.0, 1.0), InvalidInput);
  EXPECT_THROW(dominant_frequency({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}, 0.0, 2.0), InvalidInput);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(SnapshotCsv, RoundTripWithAndWithoutParameters) {
  const auto dir = std::filesystem::temp_directory_path() / "otrobust_io_test";
  std::filesystem::remove_all(dir);
  std::vector<EnsembleSnapshot> snaps(2);
  for (int e = 0; e < 2; ++e) {
    snaps[e].t = 0.5 * e;
    for (int i = 0; i < 3; ++i) {
      WeightedSample w;
      w.x = Eigen::Vector4d(0.1 * i, 400.0 + i, -0.05 * e, 0.01);
      w.p = Eigen::Vector3d(600.0 + i, 3.4, 55000.0);
      w.phi = 0.5 + i;
      w.gamma = 1.0 / 3.0;
      w.diverged = i == 2;
      snaps[e].samples.push_back(w);
    }
  }
  const std::string path = (dir / "long.csv").string();
  write_snapshots_long_csv(path, snaps);
  const auto back = read_snapshot_csv(path);
  ASSERT_EQ(back.size(), 2u);
  for (int e = 0; e < 2; ++e) {
    EXPECT_EQ(back[e].t, snaps[e].t);
    for (int i = 0; i < 3; ++i) {
      const auto& a = snaps[e].samples[i];
      const auto& b = back[e].samples[i];
      EXPECT_LT((a.x - b.x).norm(), 1e-15);
      EXPECT_TRUE(a.p == b.p);
      EXPECT_EQ(a.phi, b.phi);
      EXPECT_EQ(a.gamma, b.gamma);
      EXPECT_EQ(a.diverged, b.diverged);
    }
  }
  for (auto& s : snaps[0].samples) s.p.resize(0);
  write_snapshot_csv(path, snaps[0]);
  const auto one = read_snapshot_csv(path);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].samples[0].p.size(), 0);
  std::filesystem::remove_all(dir);
}

TEST(SnapshotCsv, MalformedInputIsRejected) {
  const auto dir = std::filesystem::temp_directory_path() / "otrobust_io_bad";
  const std::string path = (dir / "bad.csv").string();
  write_text_file(path, "t,id,theta_deg,V\n0,0,1,2\n");
  EXPECT_THROW(read_snapshot_csv(path), InvalidInput);
  write_text_file(path, snapshot_csv_header(false) + "0,0,1,2,3,4,x,1,0\n");
  EXPECT_THROW(read_snapshot_csv(path), InvalidInput);
  EXPECT_THROW(read_snapshot_csv((dir / "missing.csv").string()), InvalidInput);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace otrobust

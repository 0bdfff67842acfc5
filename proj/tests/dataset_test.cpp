/*
 * Copyright 2026 The fedchain-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fedchain/dataset.hpp"
#include "fedchain/error.hpp"
#include "fedchain/random.hpp"
#include "fedchain/text.hpp"
#include "test_util.hpp"

namespace fedchain {
namespace {

// CMAPSS-style text: unit, cycle, 3 settings, 21 sensors.
std::string TurbofanText(const std::vector<std::pair<int, int>>& units, std::uint64_t seed) {
  Rng rng(seed);
  std::ostringstream out;
  for (auto [unit, cycles] : units) {
    for (int c = 1; c <= cycles; ++c) {
      out << unit << ' ' << c;
      for (int k = 0; k < 3; ++k) out << ' ' << rng.Normal(0, 0.01);
      for (int s = 1; s <= 21; ++s) {
        // Sensor 1 constant, as in FD001; others drift with the cycle.
        double v = s == 1 ? 518.67 : 100.0 * s + 0.05 * c + rng.Normal();
        out << ' ' << v;
      }
      out << '\n';
    }
  }
  return out.str();
}

TEST(TurbofanTest, ParsesTenFeaturesAndRul) {
  Dataset d = ParseTurbofan(TurbofanText({{1, 192}, {2, 50}}, 1));
  ASSERT_EQ(d.rows(), 242u);
  EXPECT_EQ(d.features[0].size(), 10u);
  EXPECT_EQ(d.targets[0], 191.0);
  EXPECT_EQ(d.targets[191], 0.0);  // final cycle of unit 1
  EXPECT_EQ(d.targets[192], 49.0);
  EXPECT_EQ(d.targets[241], 0.0);
}

TEST(TurbofanTest, FeaturesAreZScored) {
  Dataset d = ParseTurbofan(TurbofanText({{1, 120}, {2, 80}}, 2));
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    double sum = 0, sq = 0;
    for (const auto& row : d.features) {
      ASSERT_TRUE(std::isfinite(row[k]));
      sum += row[k];
      sq += row[k] * row[k];
    }
    double n = static_cast<double>(d.rows());
    EXPECT_NEAR(sum / n, 0.0, 1e-9);
    EXPECT_NEAR(sq / n, 1.0, 1e-9);
  }
}

TEST(TurbofanTest, NonNumericTokenNamesLine) {
  std::string line3 = "1 3 0 0 0";
  for (int s = 0; s < 20; ++s) line3 += " 1";
  line3 += " oops\n";
  std::string bad = TurbofanText({{1, 2}}, 3) + line3;
  try {
    ParseTurbofan(bad);
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(TurbofanTest, MissingColumnsIsDimensionError) {
  EXPECT_FC_ERROR(ParseTurbofan("1 1 0 0 0 1 2 3\n"), ErrorCode::kDimensionError);
}

TEST(TurbofanTest, LoadFromFile) {
  testing::TempDir dir("turbofan");
  text::WriteFile(dir.path() / "train.txt", TurbofanText({{1, 30}}, 4));
  EXPECT_EQ(LoadTurbofan(dir.path() / "train.txt").rows(), 30u);
  EXPECT_FC_ERROR(LoadTurbofan(dir.path() / "missing.txt"), ErrorCode::kIoError);
}

TEST(SyntheticTest, Deterministic) {
  Dataset a = GenerateSynthetic(200, 0);
  Dataset b = GenerateSynthetic(200, 0);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.targets, b.targets);
  EXPECT_NE(GenerateSynthetic(200, 1).targets, a.targets);
}

TEST(SyntheticTest, TooFewRows) {
  EXPECT_FC_ERROR(GenerateSynthetic(5, 0), ErrorCode::kInvalidArgument);
}

// Normal equations solved independently recover the generating weights.
TEST(SyntheticTest, NoiselessOlsRecoversWeights) {
  Dataset d = GenerateSynthetic(500, 7, 0.0);
  Eigen::MatrixXd X(d.rows(), kFeatureCount + 1);
  Eigen::VectorXd y(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t k = 0; k < kFeatureCount; ++k) X(i, k) = d.features[i][k];
    X(i, kFeatureCount) = 1.0;
    y(i) = d.targets[i];
  }
  Eigen::VectorXd w = (X.transpose() * X).ldlt().solve(X.transpose() * y);
  for (std::size_t k = 0; k < kFeatureCount; ++k) EXPECT_NEAR(w(k), SyntheticWeights()[k], 1e-8);
  EXPECT_NEAR(w(kFeatureCount), kSyntheticBias, 1e-8);
}

std::multiset<double> TargetSet(const Dataset& d) { return {d.targets.begin(), d.targets.end()}; }

TEST(PartitionTest, EvenSplit) {
  auto shards = Partition(GenerateSynthetic(100, 1), 10, 3);
  ASSERT_EQ(shards.size(), 10u);
  for (const auto& s : shards) EXPECT_EQ(s.rows(), 10u);
}

TEST(PartitionTest, CoversAllRowsOnce) {
  Dataset d = GenerateSynthetic(103, 2);
  auto shards = Partition(d, 7, 5);
  std::multiset<double> seen;
  std::size_t lo = d.rows(), hi = 0;
  for (const auto& s : shards) {
    lo = std::min(lo, s.rows());
    hi = std::max(hi, s.rows());
    for (double y : s.targets) seen.insert(y);
  }
  EXPECT_LE(hi - lo, 1u);
  EXPECT_EQ(seen, TargetSet(d));
}

TEST(PartitionTest, RowsKeepTheirTargets) {
  Dataset d = GenerateSynthetic(60, 9);
  std::map<double, FeatureRow> by_target;
  for (std::size_t i = 0; i < d.rows(); ++i) by_target[d.targets[i]] = d.features[i];
  for (const auto& s : Partition(d, 4, 1)) {
    for (std::size_t i = 0; i < s.rows(); ++i) EXPECT_EQ(by_target.at(s.targets[i]), s.features[i]);
  }
}

TEST(PartitionTest, DeterministicPerSeed) {
  Dataset d = GenerateSynthetic(50, 3);
  auto a = Partition(d, 5, 8);
  auto b = Partition(d, 5, 8);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].targets, b[i].targets);
}

TEST(PartitionTest, BadClientCounts) {
  Dataset d = GenerateSynthetic(20, 3);
  EXPECT_FC_ERROR(Partition(d, 0, 1), ErrorCode::kInvalidArgument);
  EXPECT_FC_ERROR(Partition(d, 21, 1), ErrorCode::kInvalidArgument);
  EXPECT_EQ(Partition(d, 20, 1).size(), 20u);
}

TEST(HoldoutTest, SplitsDisjointly) {
  Dataset d = GenerateSynthetic(100, 4);
  auto [train, eval] = SplitHoldout(d, 0.2, 6);
  EXPECT_EQ(eval.rows(), 20u);
  EXPECT_EQ(train.rows(), 80u);
  std::multiset<double> all = TargetSet(train);
  for (double y : eval.targets) all.insert(y);
  EXPECT_EQ(all, TargetSet(d));
}

TEST(TargetNoiseTest, AddsRequestedSpread) {
  Dataset d = GenerateSynthetic(20000, 5, 0.0);
  Dataset noisy = d;
  AddTargetNoise(noisy, 2.0, 9);
  double sum = 0, sq = 0;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    double e = noisy.targets[i] - d.targets[i];
    sum += e;
    sq += e * e;
  }
  double n = static_cast<double>(d.rows());
  EXPECT_NEAR(std::sqrt(sq / n - (sum / n) * (sum / n)), 2.0, 0.05);
  Dataset same = d;
  AddTargetNoise(same, 0.0, 9);
  EXPECT_EQ(same.targets, d.targets);
}

}  // namespace
}  // namespace fedchain

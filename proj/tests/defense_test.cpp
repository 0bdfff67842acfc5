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
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fedchain/dataset.hpp"
#include "fedchain/defense.hpp"
#include "fedchain/error.hpp"
#include "fedchain/model.hpp"
#include "fedchain/random.hpp"
#include "test_util.hpp"

namespace fedchain {
namespace {

ParamVector Gaussian(Rng& rng, std::size_t d, double mean, double sd) {
  ParamVector p(d);
  for (auto& v : p.values) v = rng.Normal(mean, sd);
  return p;
}

// Ten honest updates trained from the zero model on shards of one synthetic set.
std::vector<ClientUpdate> HonestRound(std::uint64_t seed, std::size_t n = 10) {
  Dataset data = GenerateSynthetic(4000, DeriveSeed(seed, {1}));
  auto shards = Partition(data, n, DeriveSeed(seed, {2}));
  std::vector<ClientUpdate> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(LocalTrain("c" + std::to_string(i), ZeroModel(), shards[i], {}));
  }
  return out;
}

TEST(DistanceTest, IdenticalVectorsAllZero) {
  std::vector<ParamVector> v(4, ParamVector({1.0, 2.0, 3.0}));
  DistanceMatrix d = PairwiseDistances(v);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(d(i, j), 0.0);
  }
}

TEST(DistanceTest, ThreeFourFive) {
  std::vector<ParamVector> v{ParamVector({0.0, 0.0}), ParamVector({3.0, 4.0})};
  DistanceMatrix d = PairwiseDistances(v);
  EXPECT_EQ(d(0, 1), 5.0);
  EXPECT_EQ(d(1, 0), 5.0);
}

TEST(DistanceTest, MatchesDoubleLoop) {
  Rng rng(1);
  std::vector<ParamVector> v;
  for (int i = 0; i < 5; ++i) v.push_back(Gaussian(rng, 8, 0, 2));
  DistanceMatrix d = PairwiseDistances(v);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(d(i, i), 0.0);
    for (std::size_t j = 0; j < 5; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < 8; ++k) s += (v[i][k] - v[j][k]) * (v[i][k] - v[j][k]);
      EXPECT_NEAR(d(i, j), std::sqrt(s), 1e-10);
      EXPECT_EQ(d(i, j), d(j, i));
    }
  }
}

TEST(DistanceTest, Errors) {
  std::vector<ParamVector> one{ParamVector(2)};
  EXPECT_FC_ERROR(PairwiseDistances(one), ErrorCode::kEmptyInput);
  std::vector<ParamVector> mixed{ParamVector(2), ParamVector(3)};
  EXPECT_FC_ERROR(PairwiseDistances(mixed), ErrorCode::kDimensionMismatch);
}

TEST(KMeansTest, SeparatesTwoBlobs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    std::vector<ParamVector> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(Gaussian(rng, 11, 0.0, 0.1));
    for (int i = 0; i < 10; ++i) pts.push_back(Gaussian(rng, 11, 50.0, 0.1));
    ClusterAssignment a = KMeans2(pts, seed, 100);
    for (int i = 0; i < 10; ++i) {
      EXPECT_EQ(a.labels[i], a.labels[0]);
      EXPECT_EQ(a.labels[10 + i], a.labels[10]);
    }
    EXPECT_NE(a.labels[0], a.labels[10]);
  }
}

TEST(KMeansTest, IdenticalPointsDegenerate) {
  std::vector<ParamVector> pts(6, ParamVector({2.0, -1.0}));
  ClusterAssignment a = KMeans2(pts, 3, 100);
  EXPECT_EQ(a.centroids[0], pts[0]);
  EXPECT_EQ(a.centroids[1], pts[0]);
  EXPECT_EQ(a.labels.size(), 6u);
  OutlierDecision dec = DecideOutlierCluster(a, pts, PairwiseDistances(pts), 2.0);
  EXPECT_EQ(dec.spread, 0.0);
  EXPECT_FALSE(dec.cluster.has_value());
}

TEST(KMeansTest, TwoPointsSplit) {
  std::vector<ParamVector> pts{ParamVector({0.0}), ParamVector({1.0})};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ClusterAssignment a = KMeans2(pts, seed, 100);
    EXPECT_NE(a.labels[0], a.labels[1]);
  }
}

TEST(KMeansTest, DeterministicPerSeed) {
  Rng rng(4);
  std::vector<ParamVector> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(Gaussian(rng, 5, 0, 1));
  ClusterAssignment a = KMeans2(pts, 9, 100);
  ClusterAssignment b = KMeans2(pts, 9, 100);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.centroids[0], b.centroids[0]);
  EXPECT_LE(a.iterations, 100u);
}

TEST(KMeansTest, CentroidsAreClusterMeans) {
  Rng rng(5);
  std::vector<ParamVector> pts;
  for (int i = 0; i < 15; ++i) pts.push_back(Gaussian(rng, 3, i < 5 ? 10.0 : 0.0, 1));
  ClusterAssignment a = KMeans2(pts, 1, 100);
  for (int c = 0; c < 2; ++c) {
    ParamVector mean(3);
    double n = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (a.labels[i] != c) continue;
      for (int k = 0; k < 3; ++k) mean[k] += pts[i][k];
      ++n;
    }
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a.centroids[c][k], mean[k] / n, 1e-12);
  }
}

// Pooled within-cluster standard deviation straight from the points.
double PooledSpread(const ClusterAssignment& a, const std::vector<ParamVector>& pts) {
  double wss = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double d = L2Distance(pts[i], a.centroids[a.labels[i]]);
    wss += d * d;
  }
  return std::sqrt(wss / static_cast<double>(pts.size() - 2));
}

TEST(OutlierTest, AmplifiedSingletonFlagged) {
  Rng rng(6);
  std::vector<ParamVector> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(Gaussian(rng, 11, 1.0, 0.1));
  for (auto& v : pts[7].values) v *= 100;
  ClusterAssignment a = KMeans2(pts, 2, 100);
  auto cluster = SelectOutlierCluster(a, pts);
  ASSERT_TRUE(cluster.has_value());
  EXPECT_EQ(a.ClusterSize(*cluster), 1u);
  EXPECT_EQ(a.labels[7], *cluster);
  double sep = L2Distance(a.centroids[0], a.centroids[1]);
  EXPECT_GT(sep, 2.0 * PooledSpread(a, pts));
  OutlierDecision dec = DecideOutlierCluster(a, pts, PairwiseDistances(pts), 2.0);
  EXPECT_NEAR(dec.spread, PooledSpread(a, pts), 1e-9);
  EXPECT_NEAR(dec.separation, sep, 1e-12);
}

TEST(OutlierTest, EqualClustersCloseTogetherGiveNone) {
  // Two squares of equal size and shape, barely apart.
  std::vector<ParamVector> pts{ParamVector({0.0, 0.0}), ParamVector({0.0, 1.0}),
                               ParamVector({1.0, 0.0}), ParamVector({1.0, 1.0}),
                               ParamVector({1.5, 0.0}), ParamVector({1.5, 1.0}),
                               ParamVector({2.5, 0.0}), ParamVector({2.5, 1.0})};
  ClusterAssignment a;
  a.labels = {0, 0, 0, 0, 1, 1, 1, 1};
  a.centroids = {ParamVector({0.5, 0.5}), ParamVector({2.0, 0.5})};
  EXPECT_FALSE(SelectOutlierCluster(a, pts).has_value());
}

TEST(OutlierTest, IdenticalUpdatesGiveNone) {
  std::vector<ParamVector> pts(5, ParamVector({3.0, 3.0}));
  EXPECT_FALSE(SelectOutlierCluster(KMeans2(pts, 0, 100), pts).has_value());
}

TEST(OutlierTest, LabelSwapInvariant) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    std::vector<ParamVector> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(Gaussian(rng, 4, 0, 1));
    if (t % 2 == 0) {
      for (auto& v : pts[t % 10].values) v *= 40;
    }
    ClusterAssignment a = KMeans2(pts, t, 100);
    ClusterAssignment b = a;
    for (int& l : b.labels) l = 1 - l;
    std::swap(b.centroids[0], b.centroids[1]);
    auto ca = SelectOutlierCluster(a, pts);
    auto cb = SelectOutlierCluster(b, pts);
    ASSERT_EQ(ca.has_value(), cb.has_value());
    if (ca) EXPECT_EQ(*cb, 1 - *ca);
  }
}

TEST(FilterTest, HonestRoundsRarelyExclude) {
  int clean = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    FilterResult r = FilterUpdates(HonestRound(seed), {2.0, 100, seed});
    if (r.excluded.empty()) ++clean;
  }
  EXPECT_GE(clean, 99);
}

TEST(FilterTest, AmplifiedPoisonersExcluded) {
  int exact = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto updates = HonestRound(1000 + seed);
    Rng rng(seed);
    std::size_t p1 = rng.Below(10), p2 = rng.Below(9);
    if (p2 >= p1) ++p2;
    updates[p1] = InjectPoison(updates[p1], PoisonMode::Amplify(100), 0);
    updates[p2] = InjectPoison(updates[p2], PoisonMode::Amplify(100), 0);
    FilterResult r = FilterUpdates(updates, {2.0, 100, seed});
    std::set<std::string> got(r.excluded.begin(), r.excluded.end());
    if (got == std::set<std::string>{updates[p1].device_id, updates[p2].device_id}) ++exact;
  }
  EXPECT_GE(exact, 95);
}

TEST(FilterTest, PairWithOneAmplified) {
  auto updates = HonestRound(5, 2);
  updates[1] = InjectPoison(updates[1], PoisonMode::Amplify(100), 0);
  FilterResult r = FilterUpdates(updates, {});
  ASSERT_EQ(r.excluded.size(), 1u);
  EXPECT_EQ(r.excluded[0], "c1");
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0].device_id, "c0");
}

TEST(FilterTest, PartitionAndBound) {
  Rng rng(8);
  for (std::uint64_t t = 0; t < 60; ++t) {
    std::size_t n = 2 + t % 9;
    std::vector<ClientUpdate> updates(n);
    for (std::size_t i = 0; i < n; ++i) {
      updates[i].device_id = "u" + std::to_string(i);
      updates[i].params = Gaussian(rng, 6, 0, 1);
      if (rng.Below(3) == 0) {
        for (auto& v : updates[i].params.values) v *= 30;
      }
    }
    FilterResult r = FilterUpdates(updates, {2.0, 100, t});
    EXPECT_LE(r.excluded.size(), (n + 1) / 2);
    EXPECT_EQ(r.kept.size() + r.excluded.size(), n);
    std::set<std::string> all;
    for (const auto& u : r.kept) all.insert(u.device_id);
    for (const auto& id : r.excluded) EXPECT_TRUE(all.insert(id).second) << id;
    EXPECT_EQ(all.size(), n);
    FilterResult again = FilterUpdates(updates, {2.0, 100, t});
    EXPECT_EQ(again.excluded, r.excluded);
  }
}

TEST(FilterTest, DimensionMismatchPropagates) {
  std::vector<ClientUpdate> updates(2);
  updates[0].params = ParamVector(3);
  updates[1].params = ParamVector(4);
  EXPECT_FC_ERROR(FilterUpdates(updates, {}), ErrorCode::kDimensionMismatch);
}

}  // namespace
}  // namespace fedchain

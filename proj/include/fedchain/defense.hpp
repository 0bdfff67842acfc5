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

#ifndef FEDCHAIN_DEFENSE_HPP_
#define FEDCHAIN_DEFENSE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedchain/model.hpp"

namespace fedchain {

// Symmetric matrix of L2 distances between client updates, zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t n() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void Set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

struct ClusterAssignment {
  std::vector<int> labels;  // 0 or 1 per update
  std::array<ParamVector, 2> centroids;
  std::optional<int> outlier_cluster;
  std::size_t iterations = 0;

  std::size_t ClusterSize(int c) const;
};

// Throws kEmptyInput for fewer than 2 updates, kDimensionMismatch.
DistanceMatrix PairwiseDistances(std::span<const ParamVector> updates);

// 2-means: k-means++ seeding then Lloyd iterations until the labels stop
// changing or max_iters is reached. Distance ties go to cluster 0. A cluster
// left empty receives the point farthest from its current centroid.
ClusterAssignment KMeans2(std::span<const ParamVector> updates, std::uint64_t seed,
                          std::size_t max_iters);

struct OutlierDecision {
  std::optional<int> cluster;
  double separation = 0.0;  // distance between the two centroids
  double spread = 0.0;      // pooled within-cluster standard deviation
  std::array<double, 2> dispersion{};  // mean member-to-centroid distance per cluster
};

// The smaller cluster is the candidate (equal sizes: the one with higher
// dispersion, then the one whose centroid has the larger norm; still tied:
// none). It is declared the outlier cluster when the centroid separation
// exceeds tau pooled within-cluster standard deviations:
//
//   |c_small - c_large| > tau * sqrt( (1/(n-2)) sum_C (1/(2|C|)) sum_{i,j in C} d_ij^2 )
//
// The spread term is computed from the distance matrix and is 0 for n = 2.
OutlierDecision DecideOutlierCluster(const ClusterAssignment& assignment,
                                     std::span<const ParamVector> updates,
                                     const DistanceMatrix& distances, double tau);

std::optional<int> SelectOutlierCluster(const ClusterAssignment& assignment,
                                        std::span<const ParamVector> updates, double tau = 2.0);

struct DefenseConfig {
  double outlier_sigma = 2.0;  // tau
  std::size_t kmeans_iters = 100;
  std::uint64_t seed = 0;
};

struct FilterResult {
  std::vector<ClientUpdate> kept;
  std::vector<std::string> excluded;  // device ids; callers emit divergent_update for these
  ClusterAssignment assignment;
  OutlierDecision decision;
};

// pairwise distances -> 2-means -> outlier cluster selection. Input order is
// preserved in `kept` and `excluded`.
FilterResult FilterUpdates(std::span<const ClientUpdate> updates, const DefenseConfig& config);

}  // namespace fedchain

#endif  // FEDCHAIN_DEFENSE_HPP_

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

#include "fedchain/defense.hpp"

#include <algorithm>
#include <cmath>

#include "fedchain/error.hpp"
#include "fedchain/random.hpp"

namespace fedchain {

std::size_t ClusterAssignment::ClusterSize(int c) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), c));
}

namespace {

void CheckShapes(std::span<const ParamVector> updates) {
  if (updates.size() < 2) throw Error(ErrorCode::kEmptyInput, "need at least 2 updates");
  const std::size_t d = updates.front().size();
  for (const auto& u : updates) {
    if (u.size() != d) throw Error(ErrorCode::kDimensionMismatch, "update dimensions differ");
  }
}

double SquaredDistance(const ParamVector& a, const ParamVector& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

std::vector<int> Assign(std::span<const ParamVector> pts, const std::array<ParamVector, 2>& c) {
  std::vector<int> labels(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    labels[i] = SquaredDistance(pts[i], c[1]) < SquaredDistance(pts[i], c[0]) ? 1 : 0;
  }
  return labels;
}

std::array<ParamVector, 2> Means(std::span<const ParamVector> pts, const std::vector<int>& labels,
                                 const std::array<ParamVector, 2>& previous) {
  const std::size_t d = pts.front().size();
  std::array<ParamVector, 2> sums{ParamVector(d, 0.0), ParamVector(d, 0.0)};
  std::array<std::size_t, 2> counts{0, 0};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto& s = sums[labels[i]];
    for (std::size_t k = 0; k < d; ++k) s[k] += pts[i][k];
    ++counts[labels[i]];
  }
  for (int c = 0; c < 2; ++c) {
    if (counts[c] == 0) {
      sums[c] = previous[c];
      continue;
    }
    for (double& v : sums[c].values) v /= static_cast<double>(counts[c]);
  }
  return sums;
}

void RepairEmpty(std::span<const ParamVector> pts, std::vector<int>& labels,
                 std::array<ParamVector, 2>& centroids) {
  for (int c = 0; c < 2; ++c) {
    if (std::find(labels.begin(), labels.end(), c) != labels.end()) continue;
    std::size_t far = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double dist = SquaredDistance(pts[i], centroids[labels[i]]);
      if (dist > best) {
        best = dist;
        far = i;
      }
    }
    labels[far] = c;
    centroids[c] = pts[far];
  }
}

}  // namespace

DistanceMatrix PairwiseDistances(std::span<const ParamVector> updates) {
  CheckShapes(updates);
  DistanceMatrix m(updates.size());
  for (std::size_t i = 0; i < updates.size(); ++i) {
    for (std::size_t j = i + 1; j < updates.size(); ++j) {
      m.Set(i, j, std::sqrt(SquaredDistance(updates[i], updates[j])));
    }
  }
  return m;
}

ClusterAssignment KMeans2(std::span<const ParamVector> updates, std::uint64_t seed,
                          std::size_t max_iters) {
  CheckShapes(updates);
  const std::size_t n = updates.size();
  Rng rng(seed);

  // k-means++: first centre uniform, second proportional to squared distance.
  std::array<ParamVector, 2> centroids;
  const std::size_t first = static_cast<std::size_t>(rng.Below(n));
  centroids[0] = updates[first];
  std::vector<double> d2(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += d2[i] = SquaredDistance(updates[i], centroids[0]);
  std::size_t second = first;
  if (total > 0.0) {
    double r = rng.Uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] == 0.0) continue;
      acc += d2[i];
      second = i;
      if (acc > r) break;
    }
  }
  centroids[1] = updates[second];

  ClusterAssignment out;
  std::vector<int> labels = Assign(updates, centroids);
  RepairEmpty(updates, labels, centroids);
  std::size_t iters = 1;
  while (iters < std::max<std::size_t>(max_iters, 1)) {
    centroids = Means(updates, labels, centroids);
    std::vector<int> next = Assign(updates, centroids);
    RepairEmpty(updates, next, centroids);
    ++iters;
    if (next == labels) break;
    labels = std::move(next);
  }
  out.centroids = Means(updates, labels, centroids);
  out.labels = std::move(labels);
  out.iterations = iters;
  return out;
}

OutlierDecision DecideOutlierCluster(const ClusterAssignment& a,
                                     std::span<const ParamVector> updates,
                                     const DistanceMatrix& distances, double tau) {
  if (a.labels.size() != updates.size() || distances.n() != updates.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "assignment does not match updates");
  }
  OutlierDecision out;
  const std::size_t n = updates.size();
  std::array<std::size_t, 2> size{a.ClusterSize(0), a.ClusterSize(1)};

  for (std::size_t i = 0; i < n; ++i) {
    out.dispersion[a.labels[i]] += L2Distance(updates[i], a.centroids[a.labels[i]]);
  }
  for (int c = 0; c < 2; ++c) {
    if (size[c] > 0) out.dispersion[c] /= static_cast<double>(size[c]);
  }

  // Within-cluster sum of squares from pairwise distances:
  // sum_i |x_i - c|^2 = (1 / (2|C|)) sum_{i,j in C} d_ij^2.
  // Pooled over both clusters with n - 2 degrees of freedom.
  double within = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (a.labels[i] != a.labels[j]) continue;
      within += distances(i, j) * distances(i, j) / (2.0 * static_cast<double>(size[a.labels[i]]));
    }
  }
  out.spread = n > 2 ? std::sqrt(within / static_cast<double>(n - 2)) : 0.0;
  out.separation = L2Distance(a.centroids[0], a.centroids[1]);

  int candidate;
  if (size[0] != size[1]) {
    candidate = size[0] < size[1] ? 0 : 1;
  } else if (out.dispersion[0] != out.dispersion[1]) {
    candidate = out.dispersion[0] > out.dispersion[1] ? 0 : 1;
  } else if (double n0 = L2Norm(a.centroids[0]), n1 = L2Norm(a.centroids[1]); n0 != n1) {
    // Singleton pairs: the larger-magnitude update is the suspect.
    candidate = n0 > n1 ? 0 : 1;
  } else {
    return out;
  }
  if (size[candidate] == 0) return out;
  if (out.separation > tau * out.spread) out.cluster = candidate;
  return out;
}

std::optional<int> SelectOutlierCluster(const ClusterAssignment& assignment,
                                        std::span<const ParamVector> updates, double tau) {
  return DecideOutlierCluster(assignment, updates, PairwiseDistances(updates), tau).cluster;
}

FilterResult FilterUpdates(std::span<const ClientUpdate> updates, const DefenseConfig& config) {
  if (updates.size() < 2) throw Error(ErrorCode::kEmptyInput, "filter needs at least 2 updates");
  std::vector<ParamVector> params;
  params.reserve(updates.size());
  for (const auto& u : updates) params.push_back(u.params);

  FilterResult out;
  DistanceMatrix distances = PairwiseDistances(params);
  out.assignment = KMeans2(params, config.seed, config.kmeans_iters);
  out.decision = DecideOutlierCluster(out.assignment, params, distances, config.outlier_sigma);
  out.assignment.outlier_cluster = out.decision.cluster;
  for (std::size_t i = 0; i < updates.size(); ++i) {
    if (out.decision.cluster && out.assignment.labels[i] == *out.decision.cluster) {
      out.excluded.push_back(updates[i].device_id);
    } else {
      out.kept.push_back(updates[i]);
    }
  }
  return out;
}

}  // namespace fedchain

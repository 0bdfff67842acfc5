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

#ifndef FEDCHAIN_DATASET_HPP_
#define FEDCHAIN_DATASET_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

namespace fedchain {

inline constexpr std::size_t kFeatureCount = 10;

using FeatureRow = std::array<double, kFeatureCount>;

struct Dataset {
  std::vector<FeatureRow> features;
  std::vector<double> targets;

  std::size_t rows() const { return targets.size(); }
  bool empty() const { return targets.empty(); }
  void Append(const FeatureRow& x, double y) {
    features.push_back(x);
    targets.push_back(y);
  }
};

// Sensor columns used as features for CMAPSS turbofan files, 1-based sensor
// numbers: s2 s3 s4 s7 s11 s12 s15 s17 s20 s21. These are the sensors that
// vary with degradation in a single operating condition; the others are
// constant or nearly so.
inline constexpr std::array<int, kFeatureCount> kTurbofanSensors = {2,  3,  4,  7,  11,
                                                                    12, 15, 17, 20, 21};

// Parses whitespace-separated CMAPSS rows: unit, cycle, 3 operational
// settings, 21 sensors. Target is remaining useful life, max cycle of the
// unit minus the current cycle. Features are z-score normalized per column
// (constant columns map to 0).
// Throws kParseError (with line number) or kDimensionError.
Dataset ParseTurbofan(std::string_view contents);
Dataset LoadTurbofan(const std::filesystem::path& path);

// Synthetic linear data y = w*.x + b* + N(0, noise_stddev^2) with x ~ N(0, I).
// w*, b* are SyntheticWeights()/kSyntheticBias. Throws kInvalidArgument for
// n_rows < 10.
Dataset GenerateSynthetic(std::size_t n_rows, std::uint64_t seed, double noise_stddev = 1.0);
const FeatureRow& SyntheticWeights();
inline constexpr double kSyntheticBias = 0.5;

// Random disjoint shards covering every row; sizes differ by at most one.
std::vector<Dataset> Partition(const Dataset& data, std::size_t n_clients, std::uint64_t seed);

// Random split into (train, holdout) with round(fraction * rows) holdout rows.
std::pair<Dataset, Dataset> SplitHoldout(const Dataset& data, double fraction, std::uint64_t seed);

// Adds i.i.d. N(0, stddev^2) to every target.
void AddTargetNoise(Dataset& data, double stddev, std::uint64_t seed);

double TargetStddev(const Dataset& data);

}  // namespace fedchain

#endif  // FEDCHAIN_DATASET_HPP_

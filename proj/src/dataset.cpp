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

#include "fedchain/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "fedchain/error.hpp"
#include "fedchain/random.hpp"
#include "fedchain/text.hpp"

namespace fedchain {

namespace {

constexpr std::size_t kTurbofanColumns = 26;  // unit, cycle, 3 settings, 21 sensors

std::size_t SensorColumn(int sensor) { return 4 + static_cast<std::size_t>(sensor); }

}  // namespace

Dataset ParseTurbofan(std::string_view contents) {
  struct Row {
    std::uint64_t unit;
    double cycle;
    FeatureRow x;
  };
  std::vector<Row> rows;
  std::unordered_map<std::uint64_t, double> max_cycle;

  std::size_t lineno = 0;
  for (const std::string& line : text::Split(contents, '\n')) {
    ++lineno;
    auto fields = text::SplitWhitespace(line);
    if (fields.empty()) continue;
    if (fields.size() < kTurbofanColumns) {
      throw Error(ErrorCode::kDimensionError,
                  "line " + std::to_string(lineno) + ": expected " +
                      std::to_string(kTurbofanColumns) + " columns, got " +
                      std::to_string(fields.size()));
    }
    double values[kTurbofanColumns];
    for (std::size_t c = 0; c < kTurbofanColumns; ++c) {
      if (!text::ParseDouble(fields[c], values[c]) || !std::isfinite(values[c])) {
        throw Error(ErrorCode::kParseError, "line " + std::to_string(lineno) +
                                                ": non-numeric token '" +
                                                std::string(fields[c]) + "'");
      }
    }
    Row r{static_cast<std::uint64_t>(values[0]), values[1], {}};
    for (std::size_t f = 0; f < kFeatureCount; ++f) r.x[f] = values[SensorColumn(kTurbofanSensors[f])];
    auto [it, inserted] = max_cycle.try_emplace(r.unit, r.cycle);
    if (!inserted) it->second = std::max(it->second, r.cycle);
    rows.push_back(r);
  }
  if (rows.empty()) throw Error(ErrorCode::kDimensionError, "no data rows");

  Dataset out;
  out.features.reserve(rows.size());
  out.targets.reserve(rows.size());
  for (const Row& r : rows) out.Append(r.x, max_cycle[r.unit] - r.cycle);

  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    double mean = 0.0;
    for (const auto& x : out.features) mean += x[f];
    mean /= static_cast<double>(out.rows());
    double var = 0.0;
    for (const auto& x : out.features) var += (x[f] - mean) * (x[f] - mean);
    double sd = std::sqrt(var / static_cast<double>(out.rows()));
    for (auto& x : out.features) x[f] = sd > 0.0 ? (x[f] - mean) / sd : 0.0;
  }
  return out;
}

Dataset LoadTurbofan(const std::filesystem::path& path) {
  return ParseTurbofan(text::ReadFile(path));
}

const FeatureRow& SyntheticWeights() {
  static const FeatureRow kWeights = {1.5, -2.0, 0.5, 3.0, -1.0, 0.25, 2.0, -0.75, 1.0, -1.25};
  return kWeights;
}

Dataset GenerateSynthetic(std::size_t n_rows, std::uint64_t seed, double noise_stddev) {
  if (n_rows < 10) throw Error(ErrorCode::kInvalidArgument, "synthetic dataset needs >= 10 rows");
  if (!(noise_stddev >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative noise");
  Rng rng(seed);
  const FeatureRow& w = SyntheticWeights();
  Dataset out;
  out.features.reserve(n_rows);
  out.targets.reserve(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    FeatureRow x;
    double y = kSyntheticBias;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      x[f] = rng.Normal();
      y += w[f] * x[f];
    }
    y += noise_stddev * rng.Normal();
    out.Append(x, y);
  }
  return out;
}

namespace {

std::vector<std::size_t> ShuffledIndices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.Shuffle(std::span(idx));
  return idx;
}

}  // namespace

std::vector<Dataset> Partition(const Dataset& data, std::size_t n_clients, std::uint64_t seed) {
  if (n_clients == 0 || n_clients > data.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "need 1 <= n_clients <= rows");
  }
  auto idx = ShuffledIndices(data.rows(), seed);
  std::vector<Dataset> shards(n_clients);
  const std::size_t base = data.rows() / n_clients;
  const std::size_t extra = data.rows() % n_clients;
  std::size_t pos = 0;
  for (std::size_t c = 0; c < n_clients; ++c) {
    std::size_t count = base + (c < extra ? 1 : 0);
    shards[c].features.reserve(count);
    shards[c].targets.reserve(count);
    for (std::size_t k = 0; k < count; ++k, ++pos) {
      shards[c].Append(data.features[idx[pos]], data.targets[idx[pos]]);
    }
  }
  return shards;
}

std::pair<Dataset, Dataset> SplitHoldout(const Dataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "holdout fraction must be in [0,1)");
  }
  auto idx = ShuffledIndices(data.rows(), seed);
  auto n_hold = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(data.rows())));
  Dataset train, hold;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    Dataset& dst = k < n_hold ? hold : train;
    dst.Append(data.features[idx[k]], data.targets[idx[k]]);
  }
  return {std::move(train), std::move(hold)};
}

void AddTargetNoise(Dataset& data, double stddev, std::uint64_t seed) {
  if (stddev == 0.0) return;
  Rng rng(seed);
  for (double& y : data.targets) y += stddev * rng.Normal();
}

double TargetStddev(const Dataset& data) {
  if (data.empty()) return 0.0;
  double mean = std::accumulate(data.targets.begin(), data.targets.end(), 0.0) /
                static_cast<double>(data.rows());
  double var = 0.0;
  for (double y : data.targets) var += (y - mean) * (y - mean);
  return std::sqrt(var / static_cast<double>(data.rows()));
}

}  // namespace fedchain

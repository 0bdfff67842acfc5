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

#ifndef FEDCHAIN_MODEL_HPP_
#define FEDCHAIN_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "fedchain/dataset.hpp"

namespace fedchain {

// Linear regression: kFeatureCount weights followed by the bias.
inline constexpr std::size_t kParamCount = kFeatureCount + 1;

// Flat parameter vector exchanged between clients and the aggregator.
struct ParamVector {
  std::vector<double> values;

  ParamVector() = default;
  explicit ParamVector(std::vector<double> v) : values(std::move(v)) {}
  ParamVector(std::initializer_list<double> v) : values(v) {}
  explicit ParamVector(std::size_t n, double fill = 0.0) : values(n, fill) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const ParamVector&) const = default;
  bool AllFinite() const;
};

ParamVector ZeroModel();

double L2Distance(const ParamVector& a, const ParamVector& b);
double L2Norm(const ParamVector& a);

// Little-endian u64 element count followed by little-endian IEEE-754 doubles.
std::string SerializeParams(const ParamVector& p);
// Throws kParseError on a malformed buffer.
ParamVector DeserializeParams(std::string_view bytes);

double Predict(const ParamVector& params, const FeatureRow& x);

// Mean-squared error over the dataset. Throws kDimensionMismatch.
double Evaluate(const ParamVector& params, const Dataset& data);

// Gradient of Evaluate over rows [begin, end).
ParamVector MseGradient(const ParamVector& params, const Dataset& data, std::size_t begin,
                        std::size_t end);
inline ParamVector MseGradient(const ParamVector& params, const Dataset& data) {
  return MseGradient(params, data, 0, data.rows());
}

struct TrainOptions {
  std::size_t epochs = 5;
  double lr = 0.01;
  std::size_t batch_size = 32;
};

// Simulated cost of one sample passing forward+backward once. Local training
// time is epochs * rows * this; a forward-only evaluation costs a third.
inline constexpr double kTrainSecondsPerSample = 1e-3;
inline constexpr double kEvalSecondsPerSample = kTrainSecondsPerSample / 3.0;

struct ClientUpdate {
  std::string device_id;
  ParamVector params;
  double local_loss = 0.0;    // MSE on the client's shard after training
  double train_time_s = 0.0;  // simulated
  double wall_time_s = 0.0;   // measured, never written to deterministic outputs
  std::size_t samples = 0;
};

// Mini-batch gradient descent on MSE from the global parameters, batches taken
// in row order. Throws kInvalidArgument for an empty shard or lr <= 0, and
// kNumericalDivergence once the loss or parameters stop being finite.
ClientUpdate LocalTrain(std::string device_id, const ParamVector& global, const Dataset& shard,
                        const TrainOptions& options);

// Weighted element-wise mean with weights normalized to sum to one.
// Throws kEmptyInput, kDimensionMismatch, or kInvalidArgument for bad weights.
ParamVector FedAvg(std::span<const ParamVector> models, std::span<const double> weights);
ParamVector FedAvg(std::span<const ClientUpdate> updates, std::span<const double> weights);

struct PoisonMode {
  enum class Kind { kAmplify, kRandomNoise };
  Kind kind = Kind::kAmplify;
  double magnitude = 100.0;  // amplify factor, or uniform noise half-width

  static PoisonMode Amplify(double factor) { return {Kind::kAmplify, factor}; }
  static PoisonMode RandomNoise(double scale) { return {Kind::kRandomNoise, scale}; }
};

// amplify: params *= factor. random_noise: params += U(-scale, scale) per
// entry, so each entry's noise has stddev scale / sqrt(3).
ClientUpdate InjectPoison(ClientUpdate update, const PoisonMode& mode, std::uint64_t seed);

}  // namespace fedchain

#endif  // FEDCHAIN_MODEL_HPP_

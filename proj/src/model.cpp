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

#include "fedchain/model.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>

#include "fedchain/error.hpp"
#include "fedchain/random.hpp"

namespace fedchain {

bool ParamVector::AllFinite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

ParamVector ZeroModel() { return ParamVector(kParamCount, 0.0); }

double L2Distance(const ParamVector& a, const ParamVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "L2Distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double L2Norm(const ParamVector& a) {
  double s = 0.0;
  for (double v : a.values) s += v * v;
  return std::sqrt(s);
}

namespace {

void PutU64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t GetU64(std::string_view in, std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return v;
}

void CheckModelShape(const ParamVector& params) {
  if (params.size() != kParamCount) {
    throw Error(ErrorCode::kDimensionMismatch, "expected " + std::to_string(kParamCount) +
                                                   " parameters, got " +
                                                   std::to_string(params.size()));
  }
}

}  // namespace

std::string SerializeParams(const ParamVector& p) {
  std::string out;
  out.reserve(8 + 8 * p.size());
  PutU64(out, p.size());
  for (double v : p.values) PutU64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

ParamVector DeserializeParams(std::string_view bytes) {
  if (bytes.size() < 8) throw Error(ErrorCode::kParseError, "model buffer too short");
  std::uint64_t n = GetU64(bytes, 0);
  if (n > (bytes.size() - 8) / 8 || bytes.size() != 8 + 8 * n) {
    throw Error(ErrorCode::kParseError, "model buffer length mismatch");
  }
  ParamVector p(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) p[i] = std::bit_cast<double>(GetU64(bytes, 8 + 8 * i));
  return p;
}

double Predict(const ParamVector& params, const FeatureRow& x) {
  double y = params[kFeatureCount];
  for (std::size_t f = 0; f < kFeatureCount; ++f) y += params[f] * x[f];
  return y;
}

double Evaluate(const ParamVector& params, const Dataset& data) {
  CheckModelShape(params);
  if (data.empty()) throw Error(ErrorCode::kEmptyInput, "evaluate on empty dataset");
  double s = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    double r = Predict(params, data.features[i]) - data.targets[i];
    s += r * r;
  }
  return s / static_cast<double>(data.rows());
}

ParamVector MseGradient(const ParamVector& params, const Dataset& data, std::size_t begin,
                        std::size_t end) {
  CheckModelShape(params);
  ParamVector g(kParamCount, 0.0);
  if (end <= begin) return g;
  for (std::size_t i = begin; i < end; ++i) {
    const FeatureRow& x = data.features[i];
    double r = Predict(params, x) - data.targets[i];
    for (std::size_t f = 0; f < kFeatureCount; ++f) g[f] += r * x[f];
    g[kFeatureCount] += r;
  }
  const double scale = 2.0 / static_cast<double>(end - begin);
  for (double& v : g.values) v *= scale;
  return g;
}

ClientUpdate LocalTrain(std::string device_id, const ParamVector& global, const Dataset& shard,
                        const TrainOptions& options) {
  CheckModelShape(global);
  if (shard.empty()) throw Error(ErrorCode::kInvalidArgument, "empty shard");
  if (!(options.lr > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lr must be > 0");
  if (options.batch_size == 0) throw Error(ErrorCode::kInvalidArgument, "batch_size must be > 0");

  const auto wall_start = std::chrono::steady_clock::now();
  ParamVector w = global;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t begin = 0; begin < shard.rows(); begin += options.batch_size) {
      std::size_t end = std::min(shard.rows(), begin + options.batch_size);
      ParamVector g = MseGradient(w, shard, begin, end);
      for (std::size_t k = 0; k < kParamCount; ++k) w[k] -= options.lr * g[k];
    }
    if (!w.AllFinite()) {
      throw Error(ErrorCode::kNumericalDivergence,
                  device_id + ": parameters diverged in epoch " + std::to_string(epoch) +
                      " (lr too large?)");
    }
  }

  ClientUpdate u;
  u.local_loss = Evaluate(w, shard);
  if (!std::isfinite(u.local_loss)) {
    throw Error(ErrorCode::kNumericalDivergence, device_id + ": loss is not finite");
  }
  u.device_id = std::move(device_id);
  u.params = std::move(w);
  u.samples = shard.rows();
  u.train_time_s = static_cast<double>(options.epochs) * static_cast<double>(shard.rows()) *
                   kTrainSecondsPerSample;
  u.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return u;
}

ParamVector FedAvg(std::span<const ParamVector> models, std::span<const double> weights) {
  if (models.empty()) throw Error(ErrorCode::kEmptyInput, "FedAvg needs at least one model");
  if (weights.size() != models.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one weight per model required");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::kInvalidArgument, "bad weight");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidArgument, "weights sum to zero");
  const std::size_t d = models.front().size();
  ParamVector out(d, 0.0);
  for (std::size_t m = 0; m < models.size(); ++m) {
    if (models[m].size() != d) throw Error(ErrorCode::kDimensionMismatch, "FedAvg");
    const double w = weights[m] / total;
    for (std::size_t k = 0; k < d; ++k) out[k] += w * models[m][k];
  }
  return out;
}

ParamVector FedAvg(std::span<const ClientUpdate> updates, std::span<const double> weights) {
  std::vector<ParamVector> models;
  models.reserve(updates.size());
  for (const auto& u : updates) models.push_back(u.params);
  return FedAvg(std::span<const ParamVector>(models), weights);
}

ClientUpdate InjectPoison(ClientUpdate update, const PoisonMode& mode, std::uint64_t seed) {
  if (!(mode.magnitude > 0.0)) throw Error(ErrorCode::kInvalidArgument, "poison magnitude <= 0");
  switch (mode.kind) {
    case PoisonMode::Kind::kAmplify:
      for (double& v : update.params.values) v *= mode.magnitude;
      break;
    case PoisonMode::Kind::kRandomNoise: {
      Rng rng(seed);
      for (double& v : update.params.values) v += rng.Uniform(-mode.magnitude, mode.magnitude);
      break;
    }
  }
  return update;
}

}  // namespace fedchain

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

#include "fedchain/privacy.hpp"

#include <algorithm>
#include <cmath>

#include "fedchain/error.hpp"
#include "fedchain/random.hpp"

namespace fedchain {

ParamVector Obfuscate(const ParamVector& g, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be a finite value >= 0");
  }
  if (sigma == 0.0) return g;
  Rng rng(seed);
  ParamVector out = g;
  for (double& v : out.values) v += sigma * rng.Normal();
  return out;
}

double Sensitivity(std::span<const ParamVector> updates) {
  if (updates.size() < 2) throw Error(ErrorCode::kEmptyInput, "sensitivity needs >= 2 updates");
  const std::size_t d = updates.front().size();
  for (const auto& u : updates) {
    if (u.size() != d) throw Error(ErrorCode::kDimensionMismatch, "sensitivity");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < updates.size(); ++i) {
    for (std::size_t j = i + 1; j < updates.size(); ++j) {
      best = std::max(best, L2Distance(updates[i], updates[j]));
    }
  }
  return best;
}

double EpsilonBound(const PrivacyParams& p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be > 0");
  }
  if (!(p.delta > 0.0 && p.delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must be in (0, 1)");
  }
  if (!(p.sensitivity_delta >= 0.0) || !std::isfinite(p.sensitivity_delta)) {
    throw Error(ErrorCode::kInvalidArgument, "sensitivity must be >= 0");
  }
  return p.sensitivity_delta / p.sigma * std::sqrt(2.0 * std::log(1.25 / p.delta));
}

}  // namespace fedchain

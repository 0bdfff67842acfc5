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

#ifndef FEDCHAIN_PRIVACY_HPP_
#define FEDCHAIN_PRIVACY_HPP_

#include <cstdint>
#include <span>

#include "fedchain/model.hpp"

namespace fedchain {

struct PrivacyParams {
  double sigma = 1.0;              // noise stddev, gradient units
  double delta = 1e-5;             // in (0, 1)
  double sensitivity_delta = 0.0;  // max pairwise L2 distance between gradients
};

// Gaussian mechanism: adds i.i.d. N(0, sigma^2) to every coordinate.
// sigma == 0 returns the input unchanged. Throws kInvalidArgument for sigma < 0.
ParamVector Obfuscate(const ParamVector& g, double sigma, std::uint64_t seed);

// Maximum pairwise L2 distance. Throws kEmptyInput (< 2 vectors) or
// kDimensionMismatch.
double Sensitivity(std::span<const ParamVector> updates);

// epsilon = (sensitivity / sigma) * sqrt(2 ln(1.25 / delta)).
// Throws kInvalidArgument unless sigma > 0, 0 < delta < 1, sensitivity >= 0.
double EpsilonBound(const PrivacyParams& params);

}  // namespace fedchain

#endif  // FEDCHAIN_PRIVACY_HPP_

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

#ifndef FEDCHAIN_RANDOM_HPP_
#define FEDCHAIN_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <utility>

namespace fedchain {

// SplitMix64 finalizer. Used to derive independent stream seeds from a run
// seed plus tags (round, client index, purpose).
std::uint64_t Mix64(std::uint64_t x);
std::uint64_t DeriveSeed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

// Seeded generator with platform-independent variates.
//
// std::mt19937_64 has a fully specified output sequence, but the standard
// distributions do not, so all transforms are implemented here:
//   uniform    53 high bits of one draw scaled to [0, 1)
//   below(n)   rejection sampling on the top bits (unbiased)
//   normal     Marsaglia polar method, second variate cached
//   exponential inverse CDF, -mean * log(1 - u)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  std::uint64_t Below(std::uint64_t n);
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }
  double Exponential(double mean);

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace fedchain

#endif  // FEDCHAIN_RANDOM_HPP_

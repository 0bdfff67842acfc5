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

#ifndef FEDCHAIN_CONFIG_HPP_
#define FEDCHAIN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "fedchain/chain.hpp"
#include "fedchain/model.hpp"
#include "fedchain/registry.hpp"
#include "fedchain/reputation.hpp"

namespace fedchain {

struct SimConfig {
  // Population
  std::size_t n_clients = 10;
  std::string roster_path;  // overrides n_clients and roles when set
  double poisoner_fraction = 0.0;
  double straggler_fraction = 0.0;
  double straggler_delay_s = 5.0;
  PoisonMode poison{PoisonMode::Kind::kAmplify, 100.0};

  // Data
  std::string data_path;  // CMAPSS file; synthetic data when empty
  std::size_t synthetic_rows = 4000;
  double synthetic_noise = 1.0;
  double holdout_fraction = 0.2;
  // Target noise added to every client shard, in percent of the training
  // target standard deviation (0, 20, 75, 100, 150, ...).
  double noise_level = 0.0;

  // Training
  std::size_t n_rounds = 20;
  TrainOptions train;

  // Defense and committee
  bool defense_enabled = true;
  double outlier_sigma = 2.0;
  std::size_t kmeans_iters = 100;
  std::size_t committee_size = 3;
  // Committee scores are 1/(1+MSE), so this floor rejects updates whose
  // median member MSE exceeds 199. Scale it with the target variance.
  double cc_floor = 0.005;
  ReputationConfig reputation;

  // Privacy; sigma 0 disables obfuscation.
  double dp_sigma = 0.0;
  double dp_delta = 1e-5;

  // Chain
  ConsensusKind consensus = ConsensusKind::kPow;
  std::uint32_t pow_bits = 12;
  double poet_mean_ms = 100.0;

  EligibilityPolicy eligibility;

  // Early stop once the loss improves by less than convergence_tol
  // (relative) over convergence_window rounds.
  bool early_stop = true;
  std::size_t convergence_window = 5;
  double convergence_tol = 1e-4;

  std::uint64_t seed = 1;
  std::uint64_t registry_seed = 0;

  std::string output_dir = "fedchain-out";
  bool record_wall_clock = false;

  // Throws kInvalidArgument naming the offending field.
  void Validate() const;
};

// Sets one field from its key=value spelling. Keys are the field names above
// with nested fields flattened (epochs, lr, batch_size, poison_mode,
// poison_magnitude, min_free_disk_gb, delta_divergent_update, ...).
// Throws kParseError for an unknown key or malformed value.
void SetConfigValue(SimConfig& config, std::string_view key, std::string_view value);

// Flat key=value text; '#' comments and blank lines ignored.
SimConfig ParseConfig(std::string_view contents, SimConfig base = {});
SimConfig LoadConfig(const std::filesystem::path& path, SimConfig base = {});

// key=value dump of every field, in a fixed order; ParseConfig reads it back.
std::string DumpConfig(const SimConfig& config);

}  // namespace fedchain

#endif  // FEDCHAIN_CONFIG_HPP_

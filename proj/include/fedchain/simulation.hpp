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

#ifndef FEDCHAIN_SIMULATION_HPP_
#define FEDCHAIN_SIMULATION_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fedchain/chain.hpp"
#include "fedchain/config.hpp"
#include "fedchain/dataset.hpp"
#include "fedchain/model.hpp"
#include "fedchain/probe.hpp"
#include "fedchain/registry.hpp"
#include "fedchain/reputation.hpp"

namespace fedchain {

// Simulated seconds per SHA-256 evaluation while mining.
inline constexpr double kHashSeconds = 1e-6;

struct RoundReport {
  std::uint64_t round = 0;
  bool skipped = false;  // every update rejected; model and chains unchanged
  double global_loss = 0.0;
  std::vector<std::string> eligible;
  std::vector<std::string> committee;
  std::vector<std::string> trainers;
  std::vector<std::string> excluded_devices;  // removed by the outlier filter
  std::vector<std::string> rejected_devices;  // CC-score below the floor
  std::vector<std::string> accepted_devices;
  std::map<std::string, double> cc_scores;
  std::map<std::string, double> reputation;  // snapshot after this round
  double simulated_time_s = 0.0;              // this round
  double cumulative_time_s = 0.0;
  double wall_time_s = 0.0;
  std::size_t blocks_appended = 0;
  std::size_t total_blocks = 0;
  std::uint64_t tip_index = 0;  // highest block index over all chains
  double block_size_mb = 0.0;   // accounting size at tip_index
  double chain_size_mb = 0.0;
  std::optional<double> epsilon;  // when obfuscation is on
  std::vector<std::string> phases;  // pipeline phases in execution order
};

// Owns every service of one run: registry, probe, ledger, shards, chains and
// the global model. RunRound executes one pass of the pipeline
//   gate -> distribute -> train -> defend -> validate -> aggregate ->
//   reputation -> seal
// and all state mutation happens between phases, on the calling thread.
class Simulation {
 public:
  // Throws kInvalidArgument for a bad config and whatever loading the data or
  // roster throws.
  explicit Simulation(SimConfig config);

  // Uses the given probe instead of the roster/default simulated one.
  Simulation(SimConfig config, std::shared_ptr<const ResourceProbe> probe);

  // Throws kNoEligibleDevices / kInsufficientCandidates when the round cannot
  // form; an all-rejected round returns a report with skipped = true.
  RoundReport RunRound();

  // Runs up to n_rounds (or until convergence). Errors are rethrown with the
  // round index prefixed.
  std::vector<RoundReport> Run();

  // metrics.csv, storage.csv, chains/<device>/..., final_model.vec
  void WriteArtifacts(const std::filesystem::path& dir,
                      const std::vector<RoundReport>& reports) const;

  void set_logger(std::function<void(const std::string&)> logger) { logger_ = std::move(logger); }

  const SimConfig& config() const { return config_; }
  const Registry& registry() const { return *registry_; }
  const ReputationLedger& ledger() const { return ledger_; }
  const std::map<std::string, Chain, std::less<>>& chains() const { return chains_; }
  const ModelStore& models() const { return models_; }
  const ParamVector& global_model() const { return models_.at(global_ref_); }
  const Digest& global_ref() const { return global_ref_; }
  const Dataset& eval_set() const { return eval_; }
  const std::map<std::string, Dataset, std::less<>>& shards() const { return shards_; }
  std::vector<std::string> devices_with_role(DeviceRole role) const;
  std::uint64_t rounds_run() const { return round_; }

  // Exposed for tamper experiments.
  std::map<std::string, Chain, std::less<>>& mutable_chains() { return chains_; }

 private:
  void Setup(std::shared_ptr<const ResourceProbe> probe);
  void Log(const std::string& line) const;
  bool Converged(const std::vector<RoundReport>& reports) const;

  SimConfig config_;
  std::unique_ptr<Registry> registry_;
  ReputationLedger ledger_;
  std::map<std::string, double, std::less<>> delays_;
  std::map<std::string, Dataset, std::less<>> shards_;
  Dataset eval_;
  std::map<std::string, Chain, std::less<>> chains_;
  ModelStore models_;
  Digest global_ref_{};
  Committee previous_committee_;
  std::uint64_t round_ = 0;
  double clock_s_ = 0.0;
  std::function<void(const std::string&)> logger_;
};

// Builds a Simulation, runs it, and writes artifacts to config.output_dir.
std::vector<RoundReport> RunSimulation(const SimConfig& config);

}  // namespace fedchain

#endif  // FEDCHAIN_SIMULATION_HPP_
